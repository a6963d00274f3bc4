#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>

#include "goldrec/grouping.hpp"

namespace goldrec {

namespace {

class PivotSearch {
 public:
  PivotSearch(std::uint32_t g, std::span<const TransformationGraph> graphs, const InvertedIndex& index,
              const Vocabulary& vocab, std::size_t threshold, std::vector<std::uint32_t>& lower,
              const SearchOptions& opts, SearchStats* stats)
      : g_(g), graphs_(graphs), index_(index), vocab_(vocab), best_(threshold), lower_(lower),
        opts_(opts), stats_(stats) {}

  std::optional<Pivot> run() {
    EntryList start;
    start.reserve(index_.graphs().size());
    for (std::uint32_t h : index_.graphs()) start.push_back({h, 1, 1});
    dfs(start, 0);
    if (best_path_.empty()) return std::nullopt;
    return Pivot{best_path_, best_members_};
  }

 private:
  bool early() const { return opts_.early_termination; }

  // Labels leaving the nodes that g currently occupies, in canonical order.
  std::vector<LabelId> candidates(const std::vector<int>& nodes) const {
    const auto& graph = graphs_[g_];
    if (nodes.size() == 1) {
      auto span = graph.out_labels(nodes.front());
      return {span.begin(), span.end()};
    }
    std::vector<LabelId> out;
    for (int n : nodes) {
      auto span = graph.out_labels(n);
      out.insert(out.end(), span.begin(), span.end());
    }
    vocab_.sort_canonical(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<int> open_nodes(const EntryList& l) const {
    std::vector<int> nodes;
    const int sink = graphs_[g_].sink();
    auto it = std::lower_bound(l.begin(), l.end(), Entry{g_, 0, 0});
    for (; it != l.end() && it->graph == g_; ++it) {
      if (it->j != sink && (nodes.empty() || nodes.back() != it->j)) nodes.push_back(it->j);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
  }

  // One scratch list per depth; a deque keeps references stable as it grows.
  EntryList& buffer(int depth) {
    while (buffers_.size() <= static_cast<std::size_t>(depth)) buffers_.emplace_back();
    return buffers_[static_cast<std::size_t>(depth)];
  }

  bool seen(const EntryList& l, int depth) {
    std::string key(reinterpret_cast<const char*>(l.data()), l.size() * sizeof(Entry));
    auto [it, inserted] = memo_.try_emplace(std::move(key), depth);
    if (inserted) return false;
    if (it->second <= depth) return true;
    it->second = depth;
    return false;
  }

  void dfs(const EntryList& l, int depth) {
    if (stats_) ++stats_->states;
    if (opts_.max_len > 0 && depth >= opts_.max_len) return;
    const auto nodes = open_nodes(l);
    if (nodes.empty()) return;
    for (LabelId f : candidates(nodes)) {
      if (early()) {
        const std::size_t bound = index_.graph_count(f);
        if (bound <= best_ || bound < lower_[g_]) continue;
      }
      EntryList& next = buffer(depth + 1);
      intersect_into(l, index_.list(f), next);
      if (stats_) ++stats_->intersections;
      const std::size_t reach = graph_count(next);
      if (early() && (reach <= best_ || reach < lower_[g_])) continue;

      path_.push_back(f);
      complete(next);
      if (!early() || reach > best_) {
        if (!seen(next, depth + 1)) dfs(next, depth + 1);
      }
      path_.pop_back();
    }
  }

  // Records the path if it reaches g's sink.
  void complete(const EntryList& l) {
    std::vector<std::uint32_t> finished;
    bool mine = false;
    for (const auto& e : l) {
      if (e.j != graphs_[e.graph].sink()) continue;
      if (finished.empty() || finished.back() != e.graph) finished.push_back(e.graph);
      if (e.graph == g_) mine = true;
    }
    if (!mine) return;
    const auto support = static_cast<std::uint32_t>(finished.size());
    for (std::uint32_t h : finished) lower_[h] = std::max(lower_[h], support);
    if (support > best_) {
      best_ = support;
      best_path_ = path_;
      best_members_ = std::move(finished);
    }
  }

  std::uint32_t g_;
  std::span<const TransformationGraph> graphs_;
  const InvertedIndex& index_;
  const Vocabulary& vocab_;
  std::size_t best_;
  std::vector<std::uint32_t>& lower_;
  const SearchOptions& opts_;
  SearchStats* stats_;
  std::vector<LabelId> path_;
  std::vector<LabelId> best_path_;
  std::vector<std::uint32_t> best_members_;
  std::unordered_map<std::string, int> memo_;
  std::deque<EntryList> buffers_;
};

}  // namespace

std::optional<Pivot> search_pivot(std::uint32_t g, std::span<const TransformationGraph> graphs,
                                  const InvertedIndex& index, const Vocabulary& vocab,
                                  std::size_t local_threshold, std::vector<std::uint32_t>& lower,
                                  const SearchOptions& opts, SearchStats* stats) {
  PivotSearch search(g, graphs, index, vocab, local_threshold, lower, opts, stats);
  return search.run();
}

std::vector<std::uint32_t> coverage_bounds(const TransformationGraph& g, const InvertedIndex& index) {
  const int n = g.node_count();
  std::vector<std::uint32_t> ub(static_cast<std::size_t>(n), 0);
  // For each start i, a running max over ends j > k gives the best edge
  // (i, j) covering k.
  std::vector<std::uint32_t> from_end(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i < n; ++i) {
    std::fill(from_end.begin(), from_end.end(), 0);
    for (const auto& e : g.edges_from(i)) {
      std::uint32_t m = 0;
      for (LabelId f : e.labels) m = std::max(m, static_cast<std::uint32_t>(index.graph_count(f)));
      from_end[e.to] = m;
    }
    std::uint32_t run = 0;
    for (int j = n; j > i; --j) {
      run = std::max(run, from_end[j]);
      // covers k = j - 1
      ub[j - 1] = std::max(ub[j - 1], run);
    }
  }
  return ub;
}

std::uint32_t initial_upper_bound(const TransformationGraph& g, const InvertedIndex& index) {
  const auto ub = coverage_bounds(g, index);
  std::uint32_t best = UINT32_MAX;
  for (std::size_t k = 1; k < ub.size(); ++k) best = std::min(best, ub[k]);
  return best == UINT32_MAX ? 1 : std::max<std::uint32_t>(best, 1);
}

}  // namespace goldrec
