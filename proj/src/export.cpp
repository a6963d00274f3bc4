#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "goldrec/pipeline.hpp"

namespace goldrec {

namespace fs = std::filesystem;

std::vector<csv::Row> golden_records(const ClusterTable& table, const std::string& key_column) {
  const auto key = table.column_index(key_column);
  if (!key) throw std::invalid_argument("no key column '" + key_column + "'");
  std::vector<csv::Row> out;
  csv::Row header{key_column};
  for (std::size_t k = 0; k < table.column_count(); ++k) {
    if (k != *key) header.push_back(table.column_names()[k]);
  }
  out.push_back(std::move(header));
  for (std::uint32_t c = 0; c < table.cluster_count(); ++c) {
    csv::Row row{to_utf8(table.cell(table.cluster_rows(c).front(), *key))};
    for (std::size_t k = 0; k < table.column_count(); ++k) {
      if (k == *key) continue;
      const auto value = majority_consensus(table, k, c);
      row.push_back(value ? to_utf8(*value) : std::string{});
    }
    out.push_back(std::move(row));
  }
  return out;
}

Evaluation evaluate_session(const Session& session, const std::string& labels_path,
                            const std::optional<std::string>& column) {
  const auto& table = session.table();
  std::size_t col;
  if (column) {
    const auto k = table.column_index(*column);
    if (!k) throw std::invalid_argument("no column '" + *column + "'");
    col = *k;
  } else {
    if (session.target_columns().empty()) throw std::invalid_argument("the session has no target column");
    col = session.target_columns().front();
  }
  const auto labels = read_labels(labels_path, session.config().delimiter);
  return evaluate(labels, session.original(), table, col, session.config().normalization);
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

std::string table_text(const std::vector<csv::Row>& rows, char delimiter) {
  std::ostringstream out;
  for (const auto& row : rows) csv::write_row(out, row, delimiter);
  return out.str();
}

}  // namespace

std::vector<std::string> export_outputs(const Session& session, const ExportOptions& options) {
  const fs::path dir(options.out_dir);
  const char delim = session.config().delimiter;
  std::vector<std::pair<fs::path, std::string>> files;

  const auto& table = session.table();
  std::vector<csv::Row> rows{table.column_names()};
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    csv::Row row;
    for (std::size_t k = 0; k < table.column_count(); ++k) row.push_back(to_utf8(table.cell(r, k)));
    rows.push_back(std::move(row));
  }
  files.emplace_back(dir / "standardized.csv", table_text(rows, delim));
  files.emplace_back(dir / "golden.csv", table_text(golden_records(table, session.config().key_column), delim));
  std::string log;
  for (const auto& d : session.decisions()) log += to_json_line(d) + "\n";
  files.emplace_back(dir / "decisions.jsonl", std::move(log));
  if (options.labels) {
    files.emplace_back(dir / "metrics.txt",
                       metrics_report(evaluate_session(session, *options.labels, options.labels_column)));
  }

  if (!options.force) {
    for (const auto& [path, content] : files) {
      if (fs::exists(path)) throw std::runtime_error(path.string() + " exists; pass --force to overwrite");
    }
  }
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [path, content] : files) {
    write_file(path, content);
    written.push_back(path.string());
  }
  return written;
}

}  // namespace goldrec
