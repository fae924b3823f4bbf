#include "spdelab/csv.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace spdelab {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == value) break;
    }
    return buf;
}

std::string format_seed(std::uint64_t seed) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%" PRIu64, seed);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& comments,
                     const std::vector<std::string>& header)
    : out_(path), n_columns_(header.size()) {
    if (!out_) {
        throw std::runtime_error("cannot open output file: " + path.string());
    }
    for (const auto& line : comments) {
        out_ << "# " << line << '\n';
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    if (fields.size() != n_columns_) {
        throw std::logic_error("csv row width does not match header");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

}  // namespace spdelab
