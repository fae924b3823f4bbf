#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace spdelab {

// Shortest decimal form that round-trips a double (%.17g would always round-trip but
// prints noise digits; try increasing precision until the value survives).
std::string format_double(double value);

std::string format_seed(std::uint64_t seed);

// Minimal CSV emitter with a fixed column order and '#'-prefixed comment lines
// (config_hash, base_seed) before the header. No quoting: fields are numeric or
// simple tokens by construction.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& comments,
              const std::vector<std::string>& header);

    void write_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t n_columns_;
};

}  // namespace spdelab
