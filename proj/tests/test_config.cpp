#include <doctest.h>

#include <cctype>
#include <sstream>
#include <string>

#include "spdelab/config.hpp"

using namespace spdelab;

namespace {

RunConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Minimal config that passes validation for every mode (compact-support initial
// data, power-law preset, stable grid).
const char* kBase = R"(
[grid]
t_end = 0.1
x_left = -5.0
x_right = 5.0
n_t = 40
n_x = 100

[coefficients]
preset = allen-cahn
C = 1.0
gamma = 0.5

[initial]
preset = plateau
left = -0.5
right = 0.5
ramp = 0.1
height = 1.0

[run]
ensemble_size = 8
base_seed = 12345
)";

std::string with_line(const std::string& base, const std::string& section,
                      const std::string& line) {
    const auto pos = base.find(section);
    REQUIRE(pos != std::string::npos);
    const auto insert_at = base.find('\n', pos) + 1;
    std::string out = base;
    out.insert(insert_at, line + "\n");
    return out;
}

void check_error_contains(const std::string& text, RunMode mode, const std::string& needle) {
    try {
        const auto config = parse_string(text);
        validate_config(config, mode);
        FAIL("expected std::invalid_argument mentioning '", needle, "'");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        INFO("message: ", what);
        CHECK(what.find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("round trip of every section") {
    const auto config = parse_string(kBase);
    CHECK(config.t_end == 0.1);
    CHECK(config.x_left == -5.0);
    CHECK(config.x_right == 5.0);
    CHECK(config.n_t == 40);
    CHECK(config.n_x == 100);
    CHECK(config.domain_kind == "truncated-line");
    CHECK(config.preset == "allen-cahn");
    CHECK(config.C == 1.0);
    CHECK(config.gamma == 0.5);
    CHECK(config.initial == "plateau");
    CHECK(config.left == -0.5);
    CHECK(config.right == 0.5);
    CHECK(config.ramp == 0.1);
    CHECK(config.height == 1.0);
    CHECK(config.ensemble_size == 8);
    CHECK(config.base_seed == 12345);
    CHECK(config.boundary == "neumann");
    CHECK(config.functional == "midpoint-tanh");
    // Unset schedule falls back to the default ladder.
    REQUIRE(config.schedule.size() == 5);
    CHECK(config.schedule[0] == 1.0);
    CHECK(config.schedule[4] == 16.0);
    CHECK_NOTHROW(validate_config(config, RunMode::simulate));
    CHECK_NOTHROW(validate_config(config, RunMode::transfer_check));
}

TEST_CASE("parser rejects malformed input with location information") {
    // Key before any section header.
    try {
        parse_string("t_end = 1.0\n");
        FAIL("expected parse error");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("line 1") != std::string::npos);
    }

    // Unknown section.
    CHECK_THROWS_AS(parse_string("[nosuch]\nkey = 1\n"), std::invalid_argument);

    // Unknown key within a valid section.
    CHECK_THROWS_AS(parse_string("[grid]\nwibble = 1\n"), std::invalid_argument);

    // Duplicate key.
    CHECK_THROWS_AS(parse_string("[grid]\nt_end = 1\nt_end = 2\n"), std::invalid_argument);

    // Malformed numeric value, with the dotted path in the message.
    try {
        parse_string("[grid]\nt_end = banana\n");
        FAIL("expected parse error");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("grid.t_end") != std::string::npos);
    }

    // Trailing garbage after a number is not tolerated.
    CHECK_THROWS_AS(parse_string("[grid]\nt_end = 1.0x\n"), std::invalid_argument);
    // Booleans are strict words.
    CHECK_THROWS_AS(parse_string("[run]\nsave_fields = 1\n"), std::invalid_argument);
    CHECK_NOTHROW(parse_string("[run]\nsave_fields = true\n"));

    // Comments and blank lines are fine.
    CHECK_NOTHROW(parse_string("# comment\n; other comment\n\n[grid]\nt_end = 1.0\n"));
}

TEST_CASE("cross-field validation catches bad geometry and enums") {
    check_error_contains(with_line(kBase, "[grid]", "domain_kind = circle"),
                         RunMode::simulate, "grid.domain_kind");
    std::string bad_extent = kBase;
    bad_extent.replace(bad_extent.find("x_right = 5.0"), 13, "x_right = -9.0");
    check_error_contains(bad_extent, RunMode::simulate, "grid");

    std::string bad_preset = kBase;
    bad_preset.replace(bad_preset.find("preset = allen-cahn"), 19, "preset = unknown-kind");
    check_error_contains(bad_preset, RunMode::simulate, "coefficients.preset");

    std::string bad_gamma = kBase;
    bad_gamma.replace(bad_gamma.find("gamma = 0.5"), 11, "gamma = 1.5");
    check_error_contains(bad_gamma, RunMode::simulate, "coefficients.gamma");

    check_error_contains(with_line(kBase, "[run]", "boundary = periodic"),
                         RunMode::simulate, "run.boundary");
    check_error_contains(with_line(kBase, "[run]", "functional = supremum"),
                         RunMode::simulate, "run.functional");
    check_error_contains(with_line(kBase, "[run]", "scheme = magic"),
                         RunMode::simulate, "run.scheme");

    // Plateau needs room for both ramps.
    std::string narrow = kBase;
    narrow.replace(narrow.find("ramp = 0.1"), 10, "ramp = 0.6");
    check_error_contains(narrow, RunMode::simulate, "initial");
}

TEST_CASE("mode-specific validation: measure transfer") {
    // The reweighting is a functional of the Gaussian increments: the exact scheme
    // carries no usable density.
    check_error_contains(with_line(kBase, "[run]", "scheme = exact"),
                         RunMode::transfer_check, "run.scheme");

    // Noise-free preset has no density either.
    std::string det = kBase;
    det.replace(det.find("preset = allen-cahn"), 19, "preset = deterministic-heat");
    check_error_contains(det, RunMode::transfer_check, "coefficients.preset");

    // gamma = 1 keeps mass near the boundary alive: the truncated-line domain is not
    // a faithful stand-in for the whole line there.
    std::string g1 = kBase;
    g1.replace(g1.find("gamma = 0.5"), 11, "gamma = 1.0");
    check_error_contains(g1, RunMode::transfer_check, "grid.domain_kind");
    const auto rectangle = parse_string(with_line(g1, "[grid]", "domain_kind = rectangle"));
    CHECK_NOTHROW(validate_config(rectangle, RunMode::transfer_check));

    // Empty schedule entries must be positive and increasing.
    check_error_contains(with_line(kBase, "[run]", "schedule = 1.0, 1.0, 2.0"),
                         RunMode::transfer_check, "run.schedule");
    check_error_contains(with_line(kBase, "[run]", "schedule = 2.0, 1.0"),
                         RunMode::transfer_check, "run.schedule");
    check_error_contains(with_line(kBase, "[run]", "schedule = -1.0"),
                         RunMode::transfer_check, "run.schedule");
}

TEST_CASE("mode-specific validation: support scans") {
    const std::string scan = with_line(
        with_line(kBase, "[run]", "scheme = exact"), "[run]", "gamma_list = 0.5, 1.0");
    CHECK_NOTHROW(validate_config(parse_string(scan), RunMode::support_scan));

    // gamma_list is required.
    check_error_contains(with_line(kBase, "[run]", "scheme = exact"),
                         RunMode::support_scan, "run.gamma_list");

    // The exact stepper only exists at gamma in {1/2, 1}.
    check_error_contains(
        with_line(with_line(kBase, "[run]", "scheme = exact"), "[run]", "gamma_list = 0.7"),
        RunMode::support_scan, "run.gamma_list");

    // Strictly increasing (duplicates would collide in output naming and pairing).
    check_error_contains(
        with_line(with_line(kBase, "[run]", "scheme = exact"), "[run]",
                  "gamma_list = 1.0, 0.5"),
        RunMode::support_scan, "run.gamma_list");

    // Compactly supported initial data is the point of the scan: gaussian is not.
    std::string gauss = kBase;
    const auto pos = gauss.find("preset = plateau");
    gauss.replace(pos, gauss.find("height = 1.0") + 12 - pos,
                  "preset = gaussian\ncenter = 0.0\nsigma = 0.5\namplitude = 1.0");
    check_error_contains(
        with_line(with_line(gauss, "[run]", "scheme = exact"), "[run]", "gamma_list = 0.5"),
        RunMode::support_scan, "initial");

    // Initial support must sit strictly inside the domain.
    std::string wide = scan;
    wide.replace(wide.find("left = -0.5"), 11, "left = -5.0");
    check_error_contains(wide, RunMode::support_scan, "initial");

    // Containment interval, when given, must be ordered.
    check_error_contains(
        with_line(with_line(scan, "[run]", "containment_left = 2.0"), "[run]",
                  "containment_right = -2.0"),
        RunMode::support_scan, "containment");
}

TEST_CASE("assembled pieces match the fields") {
    const auto config = parse_string(kBase);
    const auto grid = config_grid(config);
    CHECK(grid.t_end == 0.1);
    CHECK(grid.n_x == 100);
    CHECK(grid.dx == doctest::Approx(0.1));

    const auto spec = config_coefficients(config);
    CHECK(spec.C == 1.0);
    CHECK(spec.gamma == 0.5);
    const auto spec1 = config_coefficients_gamma(config, 1.0);
    CHECK(spec1.gamma == 1.0);
    CHECK(spec1.C == 1.0);

    const auto h = config_initial_data(config);
    CHECK(h.name == "plateau");
    CHECK(h.h(0.0) == 1.0);
    CHECK(h.h(4.0) == 0.0);
    REQUIRE(h.support_hint.has_value());
    CHECK(h.support_hint->left == -0.5);

    CHECK(config_boundary(config) == Boundary::neumann);
    const auto dirichlet =
        parse_string(with_line(kBase, "[run]", "boundary = dirichlet"));
    CHECK(config_boundary(dirichlet) == Boundary::dirichlet);

    CHECK(max_abs_initial(config) == doctest::Approx(1.0));
}

TEST_CASE("canonical text and hash are stable and sensitive") {
    const auto a = parse_string(kBase);
    const auto b = parse_string(kBase);
    CHECK(canonical_text(a) == canonical_text(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    for (const char c : config_hash(a)) {
        CHECK(std::isxdigit(static_cast<unsigned char>(c)));
    }

    // Defaults are serialized too, so hash equality means full-config equality.
    const auto text = canonical_text(a);
    CHECK(text.find("run.boundary=neumann") != std::string::npos);
    CHECK(text.find("grid.domain_kind=truncated-line") != std::string::npos);

    // Sorted by path: grid.* precedes run.*.
    CHECK(text.find("grid.") < text.find("run."));

    auto c = parse_string(kBase);
    c.base_seed = 999;
    CHECK(config_hash(a) != config_hash(c));
    auto d = parse_string(kBase);
    d.gamma = 0.75;
    CHECK(config_hash(a) != config_hash(d));

    // Where the outputs land is not part of the experiment's identity.
    auto relocated = parse_string(kBase);
    relocated.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(relocated));
    CHECK(text.find("output_dir") == std::string::npos);
}

TEST_CASE("FNV-1a published vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
