#pragma once

// CSV dialect: header `t,value`, comma separated, '.' decimal, LF.

#include <iosfwd>
#include <string>
#include <vector>

namespace pfar {

// Reads the value column. A missing file is an I/O (data) error, an empty
// file "empty-input", anything unparsable "malformed-csv".
std::vector<double> read_series_csv(const std::string& path);
std::vector<double> parse_series_csv(std::istream& in);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write_series_csv(std::ostream& out, const std::vector<double>& values);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pfar
