#include "goldrec/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace goldrec::csv {

std::vector<Row> parse(std::string_view text, char delimiter, std::vector<std::size_t>* row_lines) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;       // inside a quoted field
  bool was_quoted = false;   // current field started with a quote
  bool row_open = false;
  std::size_t line = 1;
  std::size_t row_start = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    if (row_lines) row_lines->push_back(row_start);
    row.clear();
    row_open = false;
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || was_quoted) throw std::runtime_error("csv: stray quote on line " + std::to_string(line));
      quoted = was_quoted = row_open = true;
    } else if (c == delimiter) {
      row_open = true;
      end_field();
    } else if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_row();
      row_start = line;
    } else {
      if (was_quoted) throw std::runtime_error("csv: text after closing quote on line " + std::to_string(line));
      row_open = true;
      field.push_back(c);
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (row_open || !field.empty()) end_row();
  return rows;
}

std::vector<Row> read_file(const std::string& path, char delimiter, std::vector<std::size_t>* row_lines) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);  // UTF-8 BOM
  return parse(text, delimiter, row_lines);
}

std::string format_field(std::string_view field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\r', '\n'}) == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row, char delimiter) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k > 0) out.put(delimiter);
    out << format_field(row[k], delimiter);
  }
  out << "\r\n";
}

}  // namespace goldrec::csv
