#pragma once

// Grouping of replacements by shared transformation programs: structure
// partitioning, the label inverted index, pivot-path search and the
// largest-group-first generator.

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "goldrec/dsl.hpp"
#include "goldrec/graph.hpp"
#include "goldrec/vocabulary.hpp"

namespace goldrec {

// ---- structures ----------------------------------------------------------

struct Structure {
  std::vector<Term> terms;
  friend bool operator==(const Structure&, const Structure&) = default;
};

Structure structure_of(TextView s);
std::string structure_text(const Structure& st);

struct ReplacementInput {
  std::uint64_t key = 0;  // caller's replacement id
  Text lhs;
  Text rhs;
};

// Indices into `items`, grouped by (Struc(lhs), Struc(rhs)). Groups are
// ordered by their smallest index, members ascending.
std::vector<std::vector<std::size_t>> structure_partition(std::span<const ReplacementInput> items);

// ---- inverted index ------------------------------------------------------

struct Entry {
  std::uint32_t graph;
  std::uint16_t i;
  std::uint16_t j;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};
using EntryList = std::vector<Entry>;

// Joins entries of the same graph where l.j == f.i into <G, l.i, f.j>.
// Inputs and output are sorted by (graph, i, j); the output is unique.
EntryList intersect(std::span<const Entry> l, std::span<const Entry> f);
// Same, writing into out (cleared first) so its capacity can be reused.
void intersect_into(std::span<const Entry> l, std::span<const Entry> f, EntryList& out);

// Number of distinct graphs in a sorted list.
std::size_t graph_count(std::span<const Entry> l);

// Label -> <graph, i, j> lists over a fixed set of graphs, stored flat.
class InvertedIndex {
 public:
  InvertedIndex() = default;
  // Indexes graphs[id] for each id; ids must be strictly increasing.
  InvertedIndex(std::span<const TransformationGraph> graphs, std::span<const std::uint32_t> ids);

  void remove(std::span<const std::uint32_t> graph_ids);

  std::span<const Entry> list(LabelId f) const;
  std::size_t graph_count(LabelId f) const { return f < counts_.size() ? counts_[f] : 0; }
  const std::vector<std::uint32_t>& graphs() const { return graphs_; }

 private:
  std::vector<Entry> entries_;
  std::vector<std::uint32_t> begin_;   // per label, into entries_
  std::vector<std::uint32_t> end_;
  std::vector<std::uint32_t> counts_;  // distinct graphs per label
  std::vector<std::uint32_t> graphs_;
};

// ---- pivot search --------------------------------------------------------

struct SearchOptions {
  int max_len = 6;  // 0 means unbounded
  bool early_termination = true;
};

struct Pivot {
  std::vector<LabelId> labels;
  std::vector<std::uint32_t> members;  // graph ids containing the program, ascending
};

struct SearchStats {
  std::uint64_t intersections = 0;
  std::uint64_t states = 0;
};

// Best transformation path of graph g shared by more than local_threshold
// graphs of the index. Among equally supported paths the first in canonical
// order wins. `lower` holds per-graph support lower bounds indexed by graph
// id; it is read for pruning and raised whenever a complete path is found.
std::optional<Pivot> search_pivot(std::uint32_t g, std::span<const TransformationGraph> graphs,
                                  const InvertedIndex& index, const Vocabulary& vocab,
                                  std::size_t local_threshold, std::vector<std::uint32_t>& lower,
                                  const SearchOptions& opts, SearchStats* stats = nullptr);

// ub[k] for k = 1 .. |t| (ub[0] unused): the largest number of graphs
// sharing any label on an edge that covers node k.
std::vector<std::uint32_t> coverage_bounds(const TransformationGraph& g, const InvertedIndex& index);
std::uint32_t initial_upper_bound(const TransformationGraph& g, const InvertedIndex& index);

// ---- groups --------------------------------------------------------------

struct GroupingConfig {
  int max_path_len = 6;  // 0 means unbounded
  bool early_termination = true;
  bool structure_refinement = true;
  bool score_constants = true;  // false keeps every ConstantStr label
  double constant_score_exponent = 0.5;
  std::size_t max_constant_len = 12;
  std::size_t max_value_len = 256;
  std::size_t min_group_size = 1;
  std::size_t sample_threshold = 0;  // 0 disables sampling
  std::size_t sample_size = 200;
  std::uint64_t seed = 0;
};

struct Group {
  std::string structure;  // signature of the structure group
  Program pivot;
  std::string pivot_text;
  std::vector<std::uint64_t> members;  // replacement keys, ascending

  std::size_t size() const { return members.size(); }
  std::string key() const { return structure + " :: " + pivot_text; }
};

// Every replacement gets the pivot of its own graph; equal pivots within a
// structure group form a group. Sorted by size descending, then key.
std::vector<Group> one_shot_grouping(std::span<const ReplacementInput> items,
                                     const GroupingConfig& config);

// Largest-group-first generator. Structure groups are materialised lazily
// the first time the generator needs them.
class GroupingState {
 public:
  GroupingState(std::span<const ReplacementInput> items, GroupingConfig config);

  // Emits the largest remaining group and removes its members. nullopt when
  // nothing is left or the next group is below min_group_size.
  std::optional<Group> next_largest_group();

  // Drops a replacement that is no longer live. Unknown keys are ignored.
  void remove(std::uint64_t key);
  // Adds (or revives) a replacement; its structure group is rebuilt lazily.
  void add(const ReplacementInput& item);

  bool contains(std::uint64_t key) const;
  std::size_t live_count() const { return live_; }

  // Introspection for tests.
  struct Bounds {
    std::uint32_t lower;
    std::uint32_t upper;
  };
  std::optional<Bounds> bounds(std::uint64_t key) const;
  void materialize_all();
  const std::vector<std::uint64_t>& last_searched() const { return last_searched_; }
  std::size_t materialized_groups() const;

 private:
  struct Slot {
    ReplacementInput item;
    std::uint32_t cluster = 0;  // structure group
    bool alive = false;
    bool built = false;  // graph present in the structure group's index
    bool oversize = false;
    std::uint32_t gen = 0;
    std::uint32_t upper = 1;
  };
  struct Cluster {
    std::string signature;
    std::vector<std::uint32_t> members;  // slot ids, ascending, may hold dead slots
    bool materialized = false;
    std::uint32_t gen = 0;
    Vocabulary vocab;  // labels of this structure group's graphs
    InvertedIndex index;
  };
  struct HeapItem {
    std::uint32_t upper;
    std::uint32_t order;  // slot id, or smallest live member for placeholders
    bool placeholder;
    std::uint32_t target;  // slot id or cluster id
    std::uint32_t gen;
    bool operator<(const HeapItem& o) const {
      if (upper != o.upper) return upper < o.upper;
      if (order != o.order) return order > o.order;
      return placeholder && !o.placeholder;
    }
  };

  std::uint32_t cluster_for(const ReplacementInput& item);
  std::uint32_t add_slot(const ReplacementInput& item);
  std::uint32_t live_size(const Cluster& c) const;
  void push_placeholder(std::uint32_t cluster);
  void materialize(std::uint32_t cluster);
  void dematerialize(std::uint32_t cluster);
  bool valid(const HeapItem& h) const;
  Group make_group(std::uint32_t cluster, const std::vector<LabelId>& labels,
                   const std::vector<std::uint32_t>& members) const;
  void emit(const std::vector<std::uint32_t>& slots);

  GroupingConfig config_;
  FrequencyTable global_;
  std::vector<Slot> slots_;
  std::vector<TransformationGraph> graphs_;  // indexed by slot id
  std::vector<std::uint32_t> lower_;        // indexed by slot id
  std::vector<Cluster> clusters_;
  std::unordered_map<std::string, std::uint32_t> cluster_ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_of_;
  std::priority_queue<HeapItem> heap_;
  std::vector<std::uint64_t> last_searched_;
  std::size_t live_ = 0;
  bool exhausted_ = false;
};

}  // namespace goldrec
