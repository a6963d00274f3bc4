#include <algorithm>
#include <stdexcept>

#include "goldrec/grouping.hpp"

namespace goldrec {

namespace {

// First position at or after `from` whose graph is >= g.
std::size_t seek(std::span<const Entry> v, std::size_t from, std::uint32_t g) {
  auto it = std::lower_bound(v.begin() + static_cast<std::ptrdiff_t>(from), v.end(), g,
                             [](const Entry& e, std::uint32_t x) { return e.graph < x; });
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

EntryList intersect(std::span<const Entry> l, std::span<const Entry> f) {
  EntryList out;
  intersect_into(l, f, out);
  return out;
}

void intersect_into(std::span<const Entry> l, std::span<const Entry> f, EntryList& out) {
  out.clear();
  if (l.empty() || f.empty()) return;
  // Walk the shorter list and binary-search the longer one.
  const bool l_short = l.size() <= f.size();
  const auto lead = l_short ? l : f;
  const auto other = l_short ? f : l;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < lead.size()) {
    const std::uint32_t g = lead[a].graph;
    std::size_t a_end = a;
    while (a_end < lead.size() && lead[a_end].graph == g) ++a_end;
    b = seek(other, b, g);
    if (b == other.size()) break;
    if (other[b].graph != g) {
      a = seek(lead, a_end, other[b].graph);
      continue;
    }
    std::size_t b_end = b;
    while (b_end < other.size() && other[b_end].graph == g) ++b_end;
    const auto [lb, le] = l_short ? std::pair{a, a_end} : std::pair{b, b_end};
    const auto [fb, fe] = l_short ? std::pair{b, b_end} : std::pair{a, a_end};
    const std::size_t first = out.size();
    for (std::size_t x = lb; x < le; ++x) {
      for (std::size_t y = fb; y < fe; ++y) {
        if (f[y].i == l[x].j) out.push_back({g, l[x].i, f[y].j});
      }
    }
    if (out.size() - first > 1) {
      std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
      out.erase(std::unique(out.begin() + static_cast<std::ptrdiff_t>(first), out.end()), out.end());
    }
    a = a_end;
    b = b_end;
  }
}

std::size_t graph_count(std::span<const Entry> l) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < l.size(); ++k) {
    if (k == 0 || l[k].graph != l[k - 1].graph) ++n;
  }
  return n;
}

InvertedIndex::InvertedIndex(std::span<const TransformationGraph> graphs, std::span<const std::uint32_t> ids)
    : graphs_(ids.begin(), ids.end()) {
  for (std::size_t k = 1; k < graphs_.size(); ++k) {
    if (graphs_[k - 1] >= graphs_[k]) throw std::invalid_argument("InvertedIndex: graph ids must increase");
  }
  // Two passes: size every list, then fill. Edges come in (i, j) order so
  // each list ends up sorted by (graph, i, j).
  std::size_t labels = 0;
  std::vector<std::uint32_t> size;
  for (std::uint32_t id : graphs_) {
    for (const auto& e : graphs[id].edges()) {
      for (LabelId f : e.labels) {
        if (f >= size.size()) size.resize(std::max<std::size_t>(f + 1, size.size() * 3 / 2), 0);
        ++size[f];
        labels = std::max<std::size_t>(labels, f + 1);
      }
    }
  }
  size.resize(labels);
  begin_.resize(labels);
  std::uint32_t total = 0;
  for (std::size_t f = 0; f < labels; ++f) {
    begin_[f] = total;
    total += size[f];
  }
  entries_.resize(total);
  end_ = begin_;
  counts_.assign(labels, 0);
  for (std::uint32_t id : graphs_) {
    for (const auto& e : graphs[id].edges()) {
      for (LabelId f : e.labels) {
        if (end_[f] == begin_[f] || entries_[end_[f] - 1].graph != id) ++counts_[f];
        entries_[end_[f]++] = {id, e.from, e.to};
      }
    }
  }
}

void InvertedIndex::remove(std::span<const std::uint32_t> graph_ids) {
  if (graph_ids.empty()) return;
  std::vector<std::uint32_t> dead(graph_ids.begin(), graph_ids.end());
  std::sort(dead.begin(), dead.end());
  auto is_dead = [&](std::uint32_t g) { return std::binary_search(dead.begin(), dead.end(), g); };
  std::erase_if(graphs_, is_dead);
  for (std::size_t f = 0; f < begin_.size(); ++f) {
    if (begin_[f] == end_[f]) continue;
    auto first = entries_.begin() + begin_[f];
    auto last = entries_.begin() + end_[f];
    auto kept = std::remove_if(first, last, [&](const Entry& e) { return is_dead(e.graph); });
    if (kept == last) continue;
    end_[f] = static_cast<std::uint32_t>(kept - entries_.begin());
    counts_[f] = static_cast<std::uint32_t>(goldrec::graph_count(list(static_cast<LabelId>(f))));
  }
}

std::span<const Entry> InvertedIndex::list(LabelId f) const {
  if (f >= begin_.size()) return {};
  return std::span<const Entry>(entries_).subspan(begin_[f], end_[f] - begin_[f]);
}

}  // namespace goldrec
