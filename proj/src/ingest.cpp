#include <stdexcept>

#include "goldrec/csv.hpp"
#include "goldrec/pipeline.hpp"

namespace goldrec {

ClusterTable ingest(const std::string& path, const std::string& key_column, char delimiter) {
  std::vector<std::size_t> lines;
  auto rows = csv::read_file(path, delimiter, &lines);
  if (rows.empty()) throw std::runtime_error(path + ": missing header row");
  const csv::Row& header = rows.front();
  std::size_t key = header.size();
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == key_column) key = k;
  }
  if (key == header.size()) throw std::runtime_error(path + ": no key column '" + key_column + "'");

  ClusterTable table(header);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    // A blank line in a multi-column file is not a record.
    if (header.size() > 1 && row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw std::runtime_error(path + ":" + std::to_string(lines[r]) + ": expected " + std::to_string(header.size()) +
                               " fields, found " + std::to_string(row.size()));
    }
    std::vector<Text> cells;
    cells.reserve(row.size());
    for (const auto& field : row) {
      try {
        cells.push_back(from_utf8(field));
      } catch (const std::exception& e) {
        throw std::runtime_error(path + ":" + std::to_string(lines[r]) + ": " + e.what());
      }
    }
    // Tagged so that an empty-key row's cluster never collides with a real key.
    std::string cluster = row[key].empty() ? "#" + std::to_string(r) : "=" + row[key];
    table.add_row(cluster, std::move(cells));
  }
  return table;
}

}  // namespace goldrec
