#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace concord {

enum class HeaderMode { None, Required, Optional };

struct NumericTable {
    std::vector<std::string> header;  // empty unless a header row was read
    std::vector<std::vector<double>> rows;

    std::size_t columns() const { return rows.empty() ? header.size() : rows.front().size(); }
    // Throws DomainError when the name is not in the header.
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(std::size_t j) const;
};

// Comma-separated numbers, one record per line; blank lines are skipped.
// Rows must all have the same width. Errors are DomainError messages of the
// form "<source>:<line>: <problem>".
NumericTable read_numeric_csv(std::istream& in, HeaderMode mode, const std::string& source = "<input>");
NumericTable read_numeric_csv(const std::filesystem::path& path, HeaderMode mode);

}  // namespace concord
