#pragma once

#include "spiral/geometry.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiral {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

struct NumericCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a headered CSV of numbers. `expected_header` is checked when non-empty.
NumericCsv read_numeric_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& expected_header = {});

/// Cells are written verbatim; use format_double for numbers.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const std::filesystem::path& path, const PointCloud& points);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace spiral
