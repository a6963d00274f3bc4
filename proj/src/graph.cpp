#include "goldrec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace goldrec {

namespace {

std::uint64_t hash_text(TextView t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char32_t c : t) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h ^ (static_cast<std::uint64_t>(t.size()) << 56);
}

}  // namespace

FrequencyTable::FrequencyTable(std::span<const Text> values, std::size_t max_len)
    : max_len_(max_len) {
  std::vector<std::uint64_t> all;
  std::vector<std::uint64_t> mine;
  for (const auto& v : values) {
    mine.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t limit = std::min(max_len, v.size() - i);
      for (std::size_t len = 1; len <= limit; ++len) {
        mine.push_back(hash_text(TextView(v).substr(i, len)));
      }
    }
    std::sort(mine.begin(), mine.end());
    mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    all.insert(all.end(), mine.begin(), mine.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    hashes_.push_back(all[i]);
    counts_.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
}

std::uint32_t FrequencyTable::count(TextView sub) const {
  if (sub.empty() || sub.size() > max_len_) return 0;
  const auto h = hash_text(sub);
  auto it = std::lower_bound(hashes_.begin(), hashes_.end(), h);
  if (it == hashes_.end() || *it != h) return 0;
  return counts_[static_cast<std::size_t>(it - hashes_.begin())];
}

double score_constant(std::uint64_t freq_struc, std::uint64_t freq_global, double exponent) {
  if (freq_struc == 0) return 0.0;
  if (freq_global == 0 || freq_struc > freq_global) {
    throw std::invalid_argument("constant frequency: structure-group count exceeds global count");
  }
  return static_cast<double>(freq_struc) / std::pow(static_cast<double>(freq_global), exponent);
}

double ConstantScorer::score(TextView sub) const {
  if (!enabled()) return 0.0;
  const auto local = structure_->count(sub);
  if (local == 0) return 0.0;
  // The structure group is a subset of the corpus, so a missing global count
  // only happens when the tables were built from unrelated value sets.
  const auto global = std::max(global_->count(sub), local);
  return score_constant(local, global, exponent_);
}

namespace {

void add_unique(std::vector<PositionFunction>& into, PositionFunction pf) {
  if (std::find(into.begin(), into.end(), pf) == into.end()) into.push_back(std::move(pf));
}

// Adds B/E position functions for every match of `term` that begins or ends
// at one of the requested positions.
void add_match_positions(PositionIndex& index, const Term& term, TextView s, int only_at = 0) {
  const auto matches = term_matches(term, s);
  const int m = static_cast<int>(matches.size());
  for (int k = 1; k <= m; ++k) {
    const auto& match = matches[k - 1];
    if (only_at == 0 || match.begin == only_at) {
      add_unique(index.at[match.begin], PositionFunction::match_pos(term, k, Dir::Begin));
      add_unique(index.at[match.begin], PositionFunction::match_pos(term, k - m - 1, Dir::Begin));
    }
    if (only_at == 0 || match.end == only_at) {
      add_unique(index.at[match.end], PositionFunction::match_pos(term, k, Dir::End));
      add_unique(index.at[match.end], PositionFunction::match_pos(term, k - m - 1, Dir::End));
    }
  }
}

}  // namespace

PositionIndex build_position_index(TextView s, const ConstantScorer& scorer) {
  const int n = static_cast<int>(s.size());
  PositionIndex index;
  index.at.resize(static_cast<std::size_t>(n) + 2);

  for (int k = 1; k <= n + 1; ++k) {
    index.at[k].push_back(PositionFunction::const_pos(k));
    index.at[k].push_back(PositionFunction::const_pos(k - n - 2));
  }
  for (const auto& term : regex_terms()) add_match_positions(index, term, s);

  if (!scorer.enabled()) return index;

  // At most one constant-string term per position: the best-scoring
  // substring that begins or ends there and is a match boundary.
  const int max_len = static_cast<int>(scorer.max_len());
  for (int x = 1; x <= n + 1; ++x) {
    double best_score = 0.0;
    Text best;
    auto consider = [&](int from, int len) {
      const Text cand(s.substr(from - 1, len));
      const double sc = scorer.score(cand);
      if (sc <= 0.0) return;
      if (sc < best_score) return;
      if (sc == best_score &&
          (cand.size() < best.size() || (cand.size() == best.size() && cand >= best))) {
        return;
      }
      const auto matches = term_matches(Term::constant(cand), s);
      const bool boundary = std::any_of(matches.begin(), matches.end(), [&](const Match& m) {
        return m.begin == x || m.end == x;
      });
      if (!boundary) return;
      best_score = sc;
      best = cand;
    };
    for (int len = 1; len <= max_len && x + len - 1 <= n; ++len) consider(x, len);
    for (int len = 1; len <= max_len && x - len >= 1; ++len) consider(x - len, len);
    if (!best.empty()) add_match_positions(index, Term::constant(best), s, x);
  }
  return index;
}

TransformationGraph build_graph(TextView s, TextView t, const ConstantScorer& scorer,
                                Vocabulary& vocab) {
  if (t.empty()) throw std::invalid_argument("build_graph: empty target string");
  if (t.size() >= std::numeric_limits<std::uint16_t>::max() - 1) {
    throw std::invalid_argument("build_graph: target string too long");
  }
  TransformationGraph g;
  g.source_ = Text(s);
  g.target_ = Text(t);
  const int ns = static_cast<int>(s.size());
  const int nt = static_cast<int>(t.size());
  const int nodes = nt + 1;

  g.edges_.reserve(static_cast<std::size_t>(nt) * (nt + 1) / 2);
  for (int i = 1; i < nodes; ++i) {
    for (int j = i + 1; j <= nodes; ++j) {
      g.edges_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j), {}});
    }
  }
  auto edge_at = [&](int i, int j) -> Edge& { return g.edges_[g.edge_offset(i) + (j - i - 1)]; };

  // Position functions, interned once per position.
  const auto pindex = build_position_index(s, scorer);
  std::vector<std::vector<PosId>> pos_ids(pindex.at.size());
  for (std::size_t x = 1; x < pindex.at.size(); ++x) {
    for (const auto& pf : pindex.at[x]) pos_ids[x].push_back(vocab.intern_position(pf));
  }

  // lcp[i][x]: common prefix length of t[i..] and s[x..], 0-based.
  std::vector<std::uint16_t> lcp(static_cast<std::size_t>(nt + 1) * (ns + 1), 0);
  auto lcp_at = [&](int i, int x) -> std::uint16_t& {
    return lcp[static_cast<std::size_t>(i) * (ns + 1) + x];
  };
  for (int i = nt - 1; i >= 0; --i) {
    for (int x = ns - 1; x >= 0; --x) {
      if (t[i] == s[x]) lcp_at(i, x) = static_cast<std::uint16_t>(lcp_at(i + 1, x + 1) + 1);
    }
  }

  // SubStr labels.
  for (int i = 0; i < nt; ++i) {
    for (int x = 0; x < ns; ++x) {
      const int common = lcp_at(i, x);
      for (int len = 1; len <= common; ++len) {
        auto& edge = edge_at(i + 1, i + 1 + len);
        for (PosId l : pos_ids[x + 1]) {
          for (PosId r : pos_ids[x + 1 + len]) edge.labels.push_back(vocab.intern_substr(l, r));
        }
      }
    }
  }

  // Affix labels on the longest prefix (per start) or suffix (per end) only.
  for (const auto& term : regex_terms()) {
    const auto matches = term_matches(term, s);
    const int m = static_cast<int>(matches.size());
    for (int k = 1; k <= m; ++k) {
      const TextView w = s.substr(matches[k - 1].begin - 1, matches[k - 1].end - matches[k - 1].begin);
      const LabelId pre_fwd = vocab.intern(StringFunction::prefix(term, k));
      const LabelId pre_bwd = vocab.intern(StringFunction::prefix(term, k - m - 1));
      const LabelId suf_fwd = vocab.intern(StringFunction::suffix(term, k));
      const LabelId suf_bwd = vocab.intern(StringFunction::suffix(term, k - m - 1));
      for (int i = 0; i < nt; ++i) {
        std::size_t len = 0;
        while (len < w.size() && i + len < t.size() && t[i + len] == w[len]) ++len;
        if (len == 0) continue;
        auto& edge = edge_at(i + 1, i + 1 + static_cast<int>(len));
        edge.labels.push_back(pre_fwd);
        edge.labels.push_back(pre_bwd);
      }
      for (int j = 1; j <= nt; ++j) {
        std::size_t len = 0;
        while (len < w.size() && len < static_cast<std::size_t>(j) &&
               t[j - 1 - len] == w[w.size() - 1 - len]) {
          ++len;
        }
        if (len == 0) continue;
        auto& edge = edge_at(j + 1 - static_cast<int>(len), j + 1);
        edge.labels.push_back(suf_fwd);
        edge.labels.push_back(suf_bwd);
      }
    }
  }

  // ConstantStr labels, pruned against better-scoring neighbouring constants.
  if (scorer.enabled()) {
    const double none = -1.0;
    std::vector<double> score(static_cast<std::size_t>(nodes + 1) * (nodes + 1), 0.0);
    auto sc = [&](int i, int j) -> double& { return score[static_cast<std::size_t>(i) * (nodes + 1) + j]; };
    for (int i = 1; i < nodes; ++i) {
      for (int j = i + 1; j <= nodes; ++j) sc(i, j) = scorer.score(t.substr(i - 1, j - i));
    }
    std::vector<double> best_ending(nodes + 1, none);
    std::vector<double> best_starting(nodes + 1, none);
    for (int i = 1; i < nodes; ++i) {
      for (int j = i + 1; j <= nodes; ++j) {
        best_ending[j] = std::max(best_ending[j], sc(i, j));
        best_starting[i] = std::max(best_starting[i], sc(i, j));
      }
    }
    for (int i = 1; i < nodes; ++i) {
      for (int j = i + 1; j <= nodes; ++j) {
        const double own = sc(i, j);
        if (best_ending[i] > own || best_starting[j] > own) continue;
        edge_at(i, j).labels.push_back(
            vocab.intern(StringFunction::constant(Text(t.substr(i - 1, j - i)))));
      }
    }
  } else {
    for (int i = 1; i < nodes; ++i) {
      for (int j = i + 1; j <= nodes; ++j) {
        edge_at(i, j).labels.push_back(
            vocab.intern(StringFunction::constant(Text(t.substr(i - 1, j - i)))));
      }
    }
  }

  for (auto& edge : g.edges_) {
    std::sort(edge.labels.begin(), edge.labels.end());
    edge.labels.erase(std::unique(edge.labels.begin(), edge.labels.end()), edge.labels.end());
  }

  g.out_labels_.resize(static_cast<std::size_t>(nodes) + 1);
  for (int i = 1; i < nodes; ++i) {
    auto& out = g.out_labels_[i];
    for (const auto& edge : g.edges_from(i)) out.insert(out.end(), edge.labels.begin(), edge.labels.end());
    vocab.sort_canonical(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

std::span<const Edge> TransformationGraph::edges_from(int i) const {
  if (i < 1 || i >= node_count()) return {};
  return std::span<const Edge>(edges_).subspan(edge_offset(i), static_cast<std::size_t>(node_count() - i));
}

bool TransformationGraph::has_label(int i, int j, LabelId label) const {
  const auto& labels = edge(i, j).labels;
  return std::binary_search(labels.begin(), labels.end(), label);
}

std::size_t TransformationGraph::label_count() const {
  std::size_t total = 0;
  for (const auto& e : edges_) total += e.labels.size();
  return total;
}

std::string dump_graph(const TransformationGraph& g, const Vocabulary& vocab) {
  std::ostringstream out;
  for (const auto& edge : g.edges()) {
    std::vector<LabelId> labels = edge.labels;
    vocab.sort_canonical(labels);
    out << edge.from << ' ' << edge.to << ' ';
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (k > 0) out << " | ";
      out << vocab.text(labels[k]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace goldrec
