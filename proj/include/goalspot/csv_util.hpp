#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace goalspot::csv {

/// Shortest representation that round-trips to the same double.
std::string num(double v);

double to_double(const std::string& text);

std::vector<std::string> split(const std::string& line, char sep = ',');

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws if absent.
    std::size_t column(const std::string& name) const;
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

}  // namespace goalspot::csv
