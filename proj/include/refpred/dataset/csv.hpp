#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace refpred::dataset {

// RFC 4180: fields containing a comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Reads one record, which may span several physical lines when a quoted field
// contains a line break. Returns nothing at end of input. Throws IOFailure on
// an unterminated quote.
std::optional<std::vector<std::string>> read_csv_row(std::istream& in);

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);
// Throws IOFailure on malformed numbers.
double parse_double(std::string_view text);

}  // namespace refpred::dataset
