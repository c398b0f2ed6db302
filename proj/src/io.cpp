#include "spiral/io.hpp"

#include "spiral/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace spiral {

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    return value;
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

NumericCsv read_numeric_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    NumericCsv csv;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (!have_header) {
            csv.header = std::move(cells);
            have_header = true;
            if (!expected_header.empty() && csv.header != expected_header) {
                std::string want;
                for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
                throw ValidationError(path.string() + ": expected header '" + want + "'");
            }
            continue;
        }
        if (cells.size() != csv.header.size()) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(parse_cell(cell, path, line_no));
        csv.rows.push_back(std::move(row));
    }
    if (!have_header) throw ValidationError(path.string() + ": empty file");
    return csv;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    write_text(path, out.str());
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
    const NumericCsv csv = read_numeric_csv(path, {"x", "y"});
    PointCloud points;
    points.reserve(csv.rows.size());
    for (const auto& row : csv.rows) points.push_back({row[0], row[1]});
    return points;
}

void write_point_cloud(const std::filesystem::path& path, const PointCloud& points) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(points.size());
    for (const Point2& p : points) rows.push_back({format_double(p.x), format_double(p.y)});
    write_csv(path, {"x", "y"}, rows);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace spiral
