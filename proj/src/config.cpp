#include "spdelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spdelab/csv.hpp"

namespace spdelab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& raw, const std::string& path, std::size_t line) {
    double v = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || raw.empty()) {
        fail_line(line, path + ": expected a number, got \"" + raw + "\"");
    }
    return v;
}

std::size_t parse_count(const std::string& raw, const std::string& path, std::size_t line) {
    std::size_t v = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || raw.empty()) {
        fail_line(line, path + ": expected a nonnegative integer, got \"" + raw + "\"");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& path, std::size_t line) {
    std::uint64_t v = 0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || raw.empty()) {
        fail_line(line, path + ": expected a nonnegative integer, got \"" + raw + "\"");
    }
    return v;
}

bool parse_bool(const std::string& raw, const std::string& path, std::size_t line) {
    if (raw == "true") return true;
    if (raw == "false") return false;
    fail_line(line, path + ": expected true or false, got \"" + raw + "\"");
}

std::vector<double> parse_double_list(const std::string& raw, const std::string& path,
                                      std::size_t line) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(raw);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail_line(line, path + ": empty list entry");
        out.push_back(parse_double(item, path, line));
    }
    if (out.empty()) fail_line(line, path + ": empty list");
    return out;
}

std::string join_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig config;
    std::string section;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool schedule_given = false;

    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail_line(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "coefficients" && section != "initial" &&
                section != "run") {
                fail_line(line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "empty key");
        if (section.empty()) fail_line(line_no, "key \"" + key + "\" outside any section");

        const std::string path = section + "." + key;
        if (!seen.insert(path).second) fail_line(line_no, "duplicate key " + path);

        if (section == "grid") {
            if (key == "t_end") config.t_end = parse_double(value, path, line_no);
            else if (key == "x_left") config.x_left = parse_double(value, path, line_no);
            else if (key == "x_right") config.x_right = parse_double(value, path, line_no);
            else if (key == "n_t") config.n_t = parse_count(value, path, line_no);
            else if (key == "n_x") config.n_x = parse_count(value, path, line_no);
            else if (key == "domain_kind") config.domain_kind = value;
            else fail_line(line_no, "unknown key " + path);
        } else if (section == "coefficients") {
            if (key == "preset") config.preset = value;
            else if (key == "C") config.C = parse_double(value, path, line_no);
            else if (key == "gamma") config.gamma = parse_double(value, path, line_no);
            else fail_line(line_no, "unknown key " + path);
        } else if (section == "initial") {
            if (key == "preset") config.initial = value;
            else if (key == "height") config.height = parse_double(value, path, line_no);
            else if (key == "center") config.center = parse_double(value, path, line_no);
            else if (key == "sigma") config.sigma = parse_double(value, path, line_no);
            else if (key == "amplitude") config.amplitude = parse_double(value, path, line_no);
            else if (key == "radius") config.radius = parse_double(value, path, line_no);
            else if (key == "left") config.left = parse_double(value, path, line_no);
            else if (key == "right") config.right = parse_double(value, path, line_no);
            else if (key == "ramp") config.ramp = parse_double(value, path, line_no);
            else fail_line(line_no, "unknown key " + path);
        } else {  // run
            if (key == "boundary") config.boundary = value;
            else if (key == "ensemble_size") config.ensemble_size = parse_count(value, path, line_no);
            else if (key == "schedule") {
                config.schedule = parse_double_list(value, path, line_no);
                schedule_given = true;
            } else if (key == "epsilon_factor") config.epsilon_factor = parse_double(value, path, line_no);
            else if (key == "base_seed") config.base_seed = parse_u64(value, path, line_no);
            else if (key == "output_dir") config.output_dir = value;
            else if (key == "thin_every") config.thin_every = parse_count(value, path, line_no);
            else if (key == "save_fields") config.save_fields = parse_bool(value, path, line_no);
            else if (key == "scheme") config.scheme = value;
            else if (key == "gamma_list") config.gamma_list = parse_double_list(value, path, line_no);
            else if (key == "functional") config.functional = value;
            else if (key == "containment_left") config.containment_left = parse_double(value, path, line_no);
            else if (key == "containment_right") config.containment_right = parse_double(value, path, line_no);
            else fail_line(line_no, "unknown key " + path);
        }
    }

    if (!schedule_given) config.schedule = {1.0, 2.0, 4.0, 8.0, 16.0};
    return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path.string());
    }
    return parse_config(in);
}

void validate_config(const RunConfig& config, RunMode mode) {
    // [grid]
    if (!(config.t_end > 0.0)) fail_field("grid.t_end", "must be positive");
    if (!(config.x_right > config.x_left)) fail_field("grid.x_right", "must exceed grid.x_left");
    if (config.n_t < 1) fail_field("grid.n_t", "must be at least 1");
    if (config.n_x < 1) fail_field("grid.n_x", "must be at least 1");
    if (config.domain_kind != "truncated-line" && config.domain_kind != "rectangle") {
        fail_field("grid.domain_kind", "must be truncated-line or rectangle, got \"" +
                                           config.domain_kind + "\"");
    }

    // [coefficients]
    const bool deterministic = config.preset == "deterministic-heat";
    if (config.preset != "heat-power" && config.preset != "allen-cahn" &&
        config.preset != "kpp" && !deterministic) {
        fail_field("coefficients.preset",
                   "must be heat-power, allen-cahn, kpp, or deterministic-heat, got \"" +
                       config.preset + "\"");
    }
    if (!deterministic) {
        if (config.C == 0.0) fail_field("coefficients.C", "must be nonzero");
        if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
            fail_field("coefficients.gamma", "must lie in [0, 1]");
        }
    }

    // [initial]
    if (config.initial == "constant") {
        // any height is fine, including 0
    } else if (config.initial == "gaussian") {
        if (!(config.sigma > 0.0)) fail_field("initial.sigma", "must be positive");
    } else if (config.initial == "bump") {
        if (!(config.radius > 0.0)) fail_field("initial.radius", "must be positive");
    } else if (config.initial == "plateau") {
        if (!(config.ramp > 0.0)) fail_field("initial.ramp", "must be positive");
        if (!(config.right - config.left > 2.0 * config.ramp)) {
            fail_field("initial.right", "plateau needs right - left > 2*ramp");
        }
    } else {
        fail_field("initial.preset", "must be constant, gaussian, bump, or plateau, got \"" +
                                         config.initial + "\"");
    }

    // [run]
    if (config.boundary != "neumann" && config.boundary != "dirichlet") {
        fail_field("run.boundary", "must be neumann or dirichlet, got \"" + config.boundary +
                                       "\"");
    }
    if (config.ensemble_size < 1) fail_field("run.ensemble_size", "must be at least 1");
    if (!(config.epsilon_factor > 0.0)) fail_field("run.epsilon_factor", "must be positive");
    if (config.scheme != "euler" && config.scheme != "exact") {
        fail_field("run.scheme", "must be euler or exact, got \"" + config.scheme + "\"");
    }
    if (config.functional != "midpoint-tanh" && config.functional != "midpoint" &&
        config.functional != "mass") {
        fail_field("run.functional", "must be midpoint-tanh, midpoint, or mass, got \"" +
                                         config.functional + "\"");
    }
    for (std::size_t i = 0; i < config.schedule.size(); ++i) {
        if (!(config.schedule[i] > 0.0)) fail_field("run.schedule", "levels must be positive");
        if (i > 0 && !(config.schedule[i] > config.schedule[i - 1])) {
            fail_field("run.schedule", "levels must be strictly increasing");
        }
    }
    const bool containment_given =
        config.containment_left != 0.0 || config.containment_right != 0.0;
    if (containment_given && !(config.containment_right > config.containment_left)) {
        fail_field("run.containment_right", "must exceed run.containment_left");
    }

    if (config.scheme == "exact") {
        if (deterministic) {
            fail_field("run.scheme", "exact updates need a power-law noise preset");
        }
        if (mode != RunMode::support_scan &&
            config.gamma != 0.5 && config.gamma != 1.0) {
            fail_field("coefficients.gamma",
                       "the exact update is implemented for gamma 0.5 and 1 only");
        }
    }

    if (mode == RunMode::transfer_check) {
        if (config.schedule.empty()) fail_field("run.schedule", "must be nonempty");
        if (config.scheme != "euler") {
            fail_field("run.scheme",
                       "transfer-check requires euler (the reweighting is a functional of the "
                       "Gaussian increments that drove the path)");
        }
        if (deterministic) {
            fail_field("coefficients.preset",
                       "transfer-check needs a stochastic preset; deterministic-heat has no "
                       "noise to reweight");
        }
        if (config.gamma == 1.0 && config.domain_kind != "rectangle") {
            fail_field("grid.domain_kind",
                       "transfer-check with gamma = 1 requires a rectangle domain (on the "
                       "truncated line the drift-to-noise ratio is not square-integrable "
                       "uniformly in the truncation)");
        }
    }

    if (mode == RunMode::support_scan) {
        if (config.gamma_list.empty()) fail_field("run.gamma_list", "must be nonempty");
        for (std::size_t i = 0; i < config.gamma_list.size(); ++i) {
            const double g = config.gamma_list[i];
            if (!(g >= 0.0 && g <= 1.0)) fail_field("run.gamma_list", "entries must lie in [0, 1]");
            if (config.scheme == "exact" && g != 0.5 && g != 1.0) {
                fail_field("run.gamma_list",
                           "the exact update is implemented for gamma 0.5 and 1 only");
            }
            if (i > 0 && !(g > config.gamma_list[i - 1])) {
                fail_field("run.gamma_list", "entries must be strictly increasing");
            }
        }
        if (deterministic) {
            fail_field("coefficients.preset", "support scans need a power-law noise preset");
        }
        if (config.initial != "bump" && config.initial != "plateau") {
            fail_field("initial.preset",
                       "support scans need compactly supported data (bump or plateau)");
        }
        // The data must start strictly inside the domain so spread is measurable.
        const InitialData data = config_initial_data(config);
        if (data.support_hint) {
            if (!(data.support_hint->left > config.x_left &&
                  data.support_hint->right < config.x_right)) {
                fail_field("initial.preset",
                           "initial support must lie strictly inside the domain");
            }
        }
    }
}

SpaceTimeGrid config_grid(const RunConfig& config) {
    return build_grid(config.t_end, config.x_left, config.x_right, config.n_t, config.n_x);
}

CoefficientSpec config_coefficients(const RunConfig& config) {
    if (config.preset == "deterministic-heat") return deterministic_heat();
    return preset(config.preset, config.C, config.gamma);
}

CoefficientSpec config_coefficients_gamma(const RunConfig& config, double gamma) {
    if (config.preset == "deterministic-heat") return deterministic_heat();
    return preset(config.preset, config.C, gamma);
}

InitialData config_initial_data(const RunConfig& config) {
    if (config.initial == "constant") return constant_data(config.height);
    if (config.initial == "gaussian") {
        return gaussian_data(config.center, config.sigma, config.amplitude);
    }
    if (config.initial == "bump") {
        return bump_data(config.center, config.radius, config.amplitude);
    }
    if (config.initial == "plateau") {
        return plateau_data(config.left, config.right, config.ramp, config.height);
    }
    fail_field("initial.preset", "unknown initial data \"" + config.initial + "\"");
}

Boundary config_boundary(const RunConfig& config) {
    return config.boundary == "dirichlet" ? Boundary::dirichlet : Boundary::neumann;
}

double max_abs_initial(const RunConfig& config) {
    const SpaceTimeGrid grid = config_grid(config);
    const InitialData data = config_initial_data(config);
    double best = 0.0;
    for (std::size_t j = 0; j < grid.n_x; ++j) {
        best = std::max(best, std::abs(data.h(grid.cell_center(j))));
    }
    return best;
}

std::string canonical_text(const RunConfig& config) {
    std::map<std::string, std::string> lines;
    lines["grid.t_end"] = format_double(config.t_end);
    lines["grid.x_left"] = format_double(config.x_left);
    lines["grid.x_right"] = format_double(config.x_right);
    lines["grid.n_t"] = std::to_string(config.n_t);
    lines["grid.n_x"] = std::to_string(config.n_x);
    lines["grid.domain_kind"] = config.domain_kind;
    lines["coefficients.preset"] = config.preset;
    lines["coefficients.C"] = format_double(config.C);
    lines["coefficients.gamma"] = format_double(config.gamma);
    lines["initial.preset"] = config.initial;
    lines["initial.height"] = format_double(config.height);
    lines["initial.center"] = format_double(config.center);
    lines["initial.sigma"] = format_double(config.sigma);
    lines["initial.amplitude"] = format_double(config.amplitude);
    lines["initial.radius"] = format_double(config.radius);
    lines["initial.left"] = format_double(config.left);
    lines["initial.right"] = format_double(config.right);
    lines["initial.ramp"] = format_double(config.ramp);
    lines["run.boundary"] = config.boundary;
    lines["run.ensemble_size"] = std::to_string(config.ensemble_size);
    lines["run.schedule"] = join_list(config.schedule);
    lines["run.epsilon_factor"] = format_double(config.epsilon_factor);
    lines["run.base_seed"] = format_seed(config.base_seed);
    // run.output_dir is deliberately absent: where outputs land is not part of the
    // experiment's identity, and rerunning into a fresh directory must reproduce
    // byte-identical files (config_hash included).
    lines["run.thin_every"] = std::to_string(config.thin_every);
    lines["run.save_fields"] = config.save_fields ? "true" : "false";
    lines["run.scheme"] = config.scheme;
    lines["run.gamma_list"] = config.gamma_list.empty() ? "" : join_list(config.gamma_list);
    lines["run.functional"] = config.functional;
    lines["run.containment_left"] = format_double(config.containment_left);
    lines["run.containment_right"] = format_double(config.containment_right);

    std::string text;
    for (const auto& [key, value] : lines) {
        text += key;
        text += '=';
        text += value;
        text += '\n';
    }
    return text;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string config_hash(const RunConfig& config) {
    const std::uint64_t digest = fnv1a64(canonical_text(config));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace spdelab
