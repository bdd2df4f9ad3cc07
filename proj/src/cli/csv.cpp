#include "concord/csv.hpp"

#include "concord/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace concord {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << source << ":" << line << ": " << what;
    throw DomainError(os.str());
}

}  // namespace

std::size_t NumericTable::column_index(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DomainError("no column named '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> NumericTable::column(std::size_t j) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(j));
    return out;
}

NumericTable read_numeric_csv(std::istream& in, HeaderMode mode, const std::string& source) {
    NumericTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        std::vector<double> row;
        row.reserve(cells.size());
        std::optional<std::size_t> bad;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto v = parse_double(cells[j]);
            if (!v) {
                bad = j;
                break;
            }
            row.push_back(*v);
        }
        if (first_record) {
            first_record = false;
            const bool treat_as_header = mode == HeaderMode::Required || (mode == HeaderMode::Optional && bad);
            if (treat_as_header) {
                table.header = std::move(cells);
                for (const auto& name : table.header)
                    if (name.empty()) fail(source, line_no, "empty column name in header");
                continue;
            }
        }
        if (bad) fail(source, line_no, "column " + std::to_string(*bad + 1) + ": '" + cells[*bad] + "' is not a number");
        for (double v : row)
            if (!std::isfinite(v)) fail(source, line_no, "non-finite value");
        const std::size_t width = table.header.empty() ? (table.rows.empty() ? row.size() : table.rows.front().size())
                                                       : table.header.size();
        if (row.size() != width)
            fail(source, line_no, "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()));
        table.rows.push_back(std::move(row));
    }
    if (mode == HeaderMode::Required && table.header.empty()) fail(source, line_no, "missing header row");
    if (table.rows.empty()) fail(source, line_no, "no data rows");
    return table;
}

NumericTable read_numeric_csv(const std::filesystem::path& path, HeaderMode mode) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path.string() + "'");
    return read_numeric_csv(in, mode, path.string());
}

}  // namespace concord
