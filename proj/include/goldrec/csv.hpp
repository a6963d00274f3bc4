#pragma once

// RFC 4180 reading and writing with a configurable delimiter.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace goldrec::csv {

using Row = std::vector<std::string>;

// Quoted fields may contain delimiters, doubled quotes and line breaks.
// Accepts \n and \r\n line ends. Throws std::runtime_error on a stray quote
// or an unterminated quoted field. When row_lines is given it receives the
// 1-based line on which each row starts.
std::vector<Row> parse(std::string_view text, char delimiter = ',', std::vector<std::size_t>* row_lines = nullptr);
std::vector<Row> read_file(const std::string& path, char delimiter = ',',
                           std::vector<std::size_t>* row_lines = nullptr);

// Quotes a field only when it holds the delimiter, a quote, CR or LF.
std::string format_field(std::string_view field, char delimiter = ',');
void write_row(std::ostream& out, const Row& row, char delimiter = ',');

}  // namespace goldrec::csv
