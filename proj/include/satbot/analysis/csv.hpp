#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace satbot::analysis {

using CsvRow = std::vector<std::string>;

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF. A trailing
/// newline does not produce an empty record. Throws InvalidInput on an
/// unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view content);

std::string csv_field(std::string_view value);
std::string csv_line(const CsvRow& row);

/// Shortest text that parses back to exactly `v` ("inf" for infinity).
std::string format_double(double v);
/// Throws InvalidInput unless the whole string is a number.
double parse_double(std::string_view s);

}  // namespace satbot::analysis
