#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace brdim::csv {

// 17 significant digits: lossless for binary64, so written files round-trip
// bit-exactly.
std::string format(double x);

// Splits a line on ',' without unescaping; surrounding spaces are trimmed.
std::vector<std::string_view> split(std::string_view line);

// Strict double parse of a whole field. Throws ParseError naming `line_no`.
double parse_double(std::string_view field, long line_no);

// Reads a stream line by line, tolerating a trailing newline-less last line
// and CRLF endings. Skips nothing else.
std::vector<std::string> read_lines(std::istream& in);

}  // namespace brdim::csv
