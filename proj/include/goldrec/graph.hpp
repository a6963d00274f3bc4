#pragma once

// Transformation graphs: a DAG over the positions of the output string t
// whose edge (i, j) carries every string function that produces t[i, j)
// from the input string s.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goldrec/dsl.hpp"
#include "goldrec/vocabulary.hpp"

namespace goldrec {

// Substring document frequencies over a set of values: count(x) is the
// number of values containing x. Only substrings of length <= max_len are
// tracked; longer ones report 0.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  FrequencyTable(std::span<const Text> values, std::size_t max_len);

  std::uint32_t count(TextView sub) const;
  std::size_t max_len() const { return max_len_; }

 private:
  std::size_t max_len_ = 0;
  std::vector<std::uint64_t> hashes_;  // sorted, unique
  std::vector<std::uint32_t> counts_;
};

// freq_struc / freq_global^exponent. Throws std::invalid_argument when
// freq_global is 0 but freq_struc is not, or freq_struc > freq_global.
double score_constant(std::uint64_t freq_struc, std::uint64_t freq_global,
                      double exponent = 0.5);

// Scores constant strings against a structure-group table and a global
// table. A disabled scorer keeps every ConstantStr label and contributes no
// constant-string terms to position indexes.
class ConstantScorer {
 public:
  static ConstantScorer keep_all() { return {}; }
  ConstantScorer(const FrequencyTable* structure, const FrequencyTable* global,
                 double exponent = 0.5)
      : structure_(structure), global_(global), exponent_(exponent) {}

  bool enabled() const { return structure_ != nullptr && global_ != nullptr; }
  double score(TextView sub) const;
  std::size_t max_len() const { return enabled() ? structure_->max_len() : 0; }

 private:
  ConstantScorer() = default;
  const FrequencyTable* structure_ = nullptr;
  const FrequencyTable* global_ = nullptr;
  double exponent_ = 0.5;
};

struct PositionIndex {
  // at[x] for x in 1 .. |s|+1; at[0] is unused.
  std::vector<std::vector<PositionFunction>> at;
};

PositionIndex build_position_index(TextView s, const ConstantScorer& scorer);
inline PositionIndex build_position_index(TextView s) {
  return build_position_index(s, ConstantScorer::keep_all());
}

struct Edge {
  std::uint16_t from;
  std::uint16_t to;
  std::vector<LabelId> labels;  // sorted by id, unique
};

class TransformationGraph {
 public:
  TransformationGraph() = default;

  const Text& source() const { return source_; }
  const Text& target() const { return target_; }
  int node_count() const { return static_cast<int>(target_.size()) + 1; }
  int sink() const { return node_count(); }

  // Every edge (i, j), 1 <= i < j <= |t|+1, ordered by (i, j).
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Edge> edges_from(int i) const;
  const Edge& edge(int i, int j) const { return edges_[edge_offset(i) + (j - i - 1)]; }
  bool has_label(int i, int j, LabelId label) const;

  // Distinct labels on the out-edges of node i, in canonical label order.
  std::span<const LabelId> out_labels(int i) const { return out_labels_[i]; }

  std::size_t label_count() const;

 private:
  friend TransformationGraph build_graph(TextView, TextView, const ConstantScorer&, Vocabulary&);
  std::size_t edge_offset(int i) const {
    const auto n = static_cast<std::size_t>(node_count());
    const auto a = static_cast<std::size_t>(i - 1);
    return a * n - a * (a + 1) / 2;
  }

  Text source_;
  Text target_;
  std::vector<Edge> edges_;
  std::vector<std::vector<LabelId>> out_labels_;
};

// Throws std::invalid_argument when t is empty.
TransformationGraph build_graph(TextView s, TextView t, const ConstantScorer& scorer,
                                Vocabulary& vocab);

// One line per edge: "i j label1 | label2 | ...".
std::string dump_graph(const TransformationGraph& g, const Vocabulary& vocab);

}  // namespace goldrec
