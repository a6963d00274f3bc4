#pragma once

// Candidate replacements mined from clusters of duplicate records, and the
// replacement sets that tie each candidate to the cells it was observed in.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "goldrec/grouping.hpp"
#include "goldrec/text.hpp"

namespace goldrec {

// Rows grouped into clusters, with named string columns. Row and column
// indices never change once a row is added.
class ClusterTable {
 public:
  explicit ClusterTable(std::vector<std::string> columns);

  std::size_t add_row(const std::string& cluster_key, std::vector<Text> cells);

  std::size_t row_count() const { return cells_.size(); }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<std::string>& column_names() const { return columns_; }
  std::optional<std::size_t> column_index(std::string_view name) const;

  const Text& cell(std::size_t row, std::size_t col) const { return cells_[row][col]; }
  void set_cell(std::size_t row, std::size_t col, Text value) { cells_[row][col] = std::move(value); }

  std::uint32_t cluster_of(std::size_t row) const { return cluster_of_[row]; }
  std::size_t cluster_count() const { return cluster_keys_.size(); }
  const std::string& cluster_key(std::uint32_t c) const { return cluster_keys_[c]; }
  const std::vector<std::uint32_t>& cluster_rows(std::uint32_t c) const { return cluster_rows_[c]; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Text>> cells_;
  std::vector<std::uint32_t> cluster_of_;
  std::vector<std::string> cluster_keys_;  // in order of first appearance
  std::vector<std::vector<std::uint32_t>> cluster_rows_;
  std::unordered_map<std::string, std::uint32_t> cluster_ids_;
};

// ---- token alignment -----------------------------------------------------

struct Token {
  Text text;
  std::uint32_t begin;  // character offsets into the source value
  std::uint32_t end;
};

// Splits on runs of whitespace.
std::vector<Token> tokenize(TextView value);
Text join_tokens(std::span<const Token> tokens);

// Run of unmatched tokens between two consecutive LCS anchors, as half-open
// token ranges. At least one side is non-empty.
struct AlignedGap {
  std::size_t a_begin, a_end;
  std::size_t b_begin, b_end;
  friend bool operator==(const AlignedGap&, const AlignedGap&) = default;
};

// Token LCS with leftmost traceback; returns the gaps in order.
std::vector<AlignedGap> lcs_align(std::span<const Text> a, std::span<const Text> b);

// ---- replacement store ---------------------------------------------------

// A place where a replacement's lhs was observed: characters [begin, end)
// of cell (row, column). Whole-cell occurrences span the full value.
struct Occurrence {
  std::uint32_t row;
  std::uint32_t begin;
  std::uint32_t end;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

enum class Normalization { None, Lowercase };

struct CandidateOptions {
  bool token_level = true;
  Normalization normalization = Normalization::None;
};

struct Replacement {
  std::uint64_t id;
  Text lhs;
  Text rhs;
  std::set<Occurrence> occurrences;
  bool live() const { return !occurrences.empty(); }
};

// What a recomputation changed, by replacement id (ascending).
struct StoreDelta {
  std::vector<std::uint64_t> emptied;  // were live, now have no occurrences
  std::vector<std::uint64_t> revived;  // were empty, now live again
  std::vector<std::uint64_t> gained;   // live before and after, with new occurrences
};

// Candidate replacements for one column. Ids are assigned in order of first
// discovery and stay fixed; a replacement whose set empties keeps its id.
// No replacement with a new (lhs, rhs) pair is ever created after the
// initial generation.
class ReplacementStore {
 public:
  ReplacementStore(const ClusterTable& table, std::size_t column, CandidateOptions options = {});

  std::size_t column() const { return column_; }
  const CandidateOptions& options() const { return options_; }

  std::size_t size() const { return records_.size(); }
  std::size_t live_count() const;
  const Replacement& get(std::uint64_t id) const { return records_.at(id); }
  std::optional<std::uint64_t> find(TextView lhs, TextView rhs) const;
  std::vector<ReplacementInput> live_inputs() const;

  // Re-derives every occurrence in cluster c from the table's current values.
  StoreDelta refresh_cluster(const ClusterTable& table, std::uint32_t c);

 private:
  using Contribution = std::map<std::pair<Text, Text>, std::set<Occurrence>>;
  Contribution derive(const ClusterTable& table, std::uint32_t c) const;

  std::size_t column_;
  CandidateOptions options_;
  std::vector<Replacement> records_;
  std::map<std::pair<Text, Text>, std::uint64_t> ids_;
  std::vector<std::set<std::uint64_t>> by_cluster_;  // ids with occurrences in each cluster
};

// Stand-alone generators, mostly for inspection and tests. Each returns the
// (lhs, rhs) -> occurrences map for one column.
using CandidateMap = std::map<std::pair<Text, Text>, std::set<Occurrence>>;
CandidateMap generate_pairwise(const ClusterTable& table, std::size_t column,
                               Normalization normalization = Normalization::None);
CandidateMap generate_token_level(const ClusterTable& table, std::size_t column,
                                  Normalization normalization = Normalization::None);

}  // namespace goldrec
