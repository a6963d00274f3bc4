#include "goldrec/candidates.hpp"

#include <algorithm>
#include <stdexcept>

namespace goldrec {

ClusterTable::ClusterTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::size_t ClusterTable::add_row(const std::string& cluster_key, std::vector<Text> cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("row width does not match the column count");
  const auto row = static_cast<std::uint32_t>(cells_.size());
  auto [it, inserted] = cluster_ids_.try_emplace(cluster_key, static_cast<std::uint32_t>(cluster_keys_.size()));
  if (inserted) {
    cluster_keys_.push_back(cluster_key);
    cluster_rows_.emplace_back();
  }
  cells_.push_back(std::move(cells));
  cluster_of_.push_back(it->second);
  cluster_rows_[it->second].push_back(row);
  return row;
}

std::optional<std::size_t> ClusterTable::column_index(std::string_view name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (columns_[k] == name) return k;
  }
  return std::nullopt;
}

std::vector<Token> tokenize(TextView value) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < value.size()) {
    while (k < value.size() && classify(value[k]) == CharClass::Space) ++k;
    if (k == value.size()) break;
    const std::size_t begin = k;
    while (k < value.size() && classify(value[k]) != CharClass::Space) ++k;
    out.push_back({Text(value.substr(begin, k - begin)), static_cast<std::uint32_t>(begin),
                   static_cast<std::uint32_t>(k)});
  }
  return out;
}

Text join_tokens(std::span<const Token> tokens) {
  Text out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0) out.push_back(U' ');
    out += tokens[k].text;
  }
  return out;
}

std::vector<AlignedGap> lcs_align(std::span<const Text> a, std::span<const Text> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // suffix[i][j]: LCS length of a[i..] and b[j..]
  std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return suffix[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }
  std::vector<AlignedGap> gaps;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t gap_i = 0;
  std::size_t gap_j = 0;
  auto close_gap = [&] {
    if (gap_i < i || gap_j < j) gaps.push_back({gap_i, i, gap_j, j});
  };
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      close_gap();
      gap_i = ++i;
      gap_j = ++j;
    } else if (at(i + 1, j) > at(i, j + 1)) {
      ++i;
    } else {
      ++j;  // ties keep i, so earlier tokens of a stay available for matching
    }
  }
  i = n;
  j = m;
  close_gap();
  return gaps;
}

namespace {

Text fold(TextView s, Normalization mode) {
  Text out(s);
  if (mode == Normalization::Lowercase) {
    for (auto& c : out) {
      if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    }
  }
  return out;
}

// Distinct values of one cluster column, in order of first appearance.
struct ClusterValues {
  std::vector<Text> values;
  std::vector<std::vector<std::uint32_t>> rows;
};

ClusterValues cluster_values(const ClusterTable& table, std::size_t column, std::uint32_t c) {
  ClusterValues out;
  for (std::uint32_t row : table.cluster_rows(c)) {
    const Text& v = table.cell(row, column);
    auto it = std::find(out.values.begin(), out.values.end(), v);
    if (it == out.values.end()) {
      out.values.push_back(v);
      out.rows.push_back({row});
    } else {
      out.rows[static_cast<std::size_t>(it - out.values.begin())].push_back(row);
    }
  }
  return out;
}

void add_pairwise(const ClusterValues& cv, Normalization mode, CandidateMap& out) {
  std::vector<Text> folded;
  for (const auto& v : cv.values) folded.push_back(fold(v, mode));
  for (std::size_t u = 0; u < cv.values.size(); ++u) {
    for (std::size_t v = 0; v < cv.values.size(); ++v) {
      if (u == v || folded[u] == folded[v] || cv.values[v].empty() || cv.values[u].empty()) continue;
      auto& occ = out[{cv.values[u], cv.values[v]}];
      const auto len = static_cast<std::uint32_t>(cv.values[u].size());
      for (std::uint32_t row : cv.rows[u]) occ.insert({row, 0, len});
    }
  }
}

void add_token_level(const ClusterValues& cv, Normalization mode, CandidateMap& out) {
  std::vector<std::vector<Token>> tokens;
  std::vector<std::vector<Text>> keys;  // normalised token texts
  for (const auto& v : cv.values) {
    tokens.push_back(tokenize(v));
    keys.emplace_back();
    for (const auto& t : tokens.back()) keys.back().push_back(fold(t.text, mode));
  }
  // One alignment per unordered pair feeds both directions.
  for (std::size_t u = 0; u < cv.values.size(); ++u) {
    for (std::size_t v = u + 1; v < cv.values.size(); ++v) {
      if (keys[u] == keys[v]) continue;
      for (const auto& gap : lcs_align(keys[u], keys[v])) {
        if (gap.a_begin == gap.a_end || gap.b_begin == gap.b_end) continue;
        const std::span<const Token> a(tokens[u].data() + gap.a_begin, gap.a_end - gap.a_begin);
        const std::span<const Token> b(tokens[v].data() + gap.b_begin, gap.b_end - gap.b_begin);
        Text lhs = join_tokens(a);
        Text rhs = join_tokens(b);
        if (fold(lhs, mode) == fold(rhs, mode)) continue;
        auto& forward = out[{lhs, rhs}];
        for (std::uint32_t row : cv.rows[u]) forward.insert({row, a.front().begin, a.back().end});
        auto& backward = out[{std::move(rhs), std::move(lhs)}];
        for (std::uint32_t row : cv.rows[v]) backward.insert({row, b.front().begin, b.back().end});
      }
    }
  }
}

}  // namespace

CandidateMap generate_pairwise(const ClusterTable& table, std::size_t column, Normalization normalization) {
  CandidateMap out;
  for (std::uint32_t c = 0; c < table.cluster_count(); ++c) {
    add_pairwise(cluster_values(table, column, c), normalization, out);
  }
  return out;
}

CandidateMap generate_token_level(const ClusterTable& table, std::size_t column, Normalization normalization) {
  CandidateMap out;
  for (std::uint32_t c = 0; c < table.cluster_count(); ++c) {
    add_token_level(cluster_values(table, column, c), normalization, out);
  }
  return out;
}

ReplacementStore::ReplacementStore(const ClusterTable& table, std::size_t column, CandidateOptions options)
    : column_(column), options_(options), by_cluster_(table.cluster_count()) {
  if (column >= table.column_count()) throw std::out_of_range("no such column");
  for (std::uint32_t c = 0; c < table.cluster_count(); ++c) {
    for (auto& [key, occ] : derive(table, c)) {
      auto [it, inserted] = ids_.try_emplace(key, records_.size());
      if (inserted) records_.push_back({it->second, key.first, key.second, {}});
      records_[it->second].occurrences.insert(occ.begin(), occ.end());
      by_cluster_[c].insert(it->second);
    }
  }
}

ReplacementStore::Contribution ReplacementStore::derive(const ClusterTable& table, std::uint32_t c) const {
  const auto cv = cluster_values(table, column_, c);
  Contribution out;
  add_pairwise(cv, options_.normalization, out);
  if (options_.token_level) add_token_level(cv, options_.normalization, out);
  return out;
}

std::size_t ReplacementStore::live_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const Replacement& r) { return r.live(); }));
}

std::optional<std::uint64_t> ReplacementStore::find(TextView lhs, TextView rhs) const {
  auto it = ids_.find({Text(lhs), Text(rhs)});
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<ReplacementInput> ReplacementStore::live_inputs() const {
  std::vector<ReplacementInput> out;
  for (const auto& r : records_) {
    if (r.live()) out.push_back({r.id, r.lhs, r.rhs});
  }
  return out;
}

StoreDelta ReplacementStore::refresh_cluster(const ClusterTable& table, std::uint32_t c) {
  const Contribution fresh = derive(table, c);
  std::set<std::uint64_t> touched = by_cluster_[c];
  for (const auto& [key, occ] : fresh) {
    auto it = ids_.find(key);
    if (it != ids_.end()) touched.insert(it->second);
  }

  std::map<std::uint64_t, std::set<Occurrence>> before;
  for (std::uint64_t id : touched) before[id] = records_[id].occurrences;

  for (std::uint64_t id : by_cluster_[c]) {
    std::erase_if(records_[id].occurrences, [&](const Occurrence& o) { return table.cluster_of(o.row) == c; });
  }
  by_cluster_[c].clear();
  for (const auto& [key, occ] : fresh) {
    auto it = ids_.find(key);
    if (it == ids_.end()) continue;  // pairs never seen at generation stay out
    records_[it->second].occurrences.insert(occ.begin(), occ.end());
    by_cluster_[c].insert(it->second);
  }

  StoreDelta delta;
  for (const auto& [id, old] : before) {
    const auto& now = records_[id].occurrences;
    const bool was_live = !old.empty();
    if (was_live && now.empty()) {
      delta.emptied.push_back(id);
    } else if (!was_live && !now.empty()) {
      delta.revived.push_back(id);
    } else if (was_live && !std::includes(old.begin(), old.end(), now.begin(), now.end())) {
      delta.gained.push_back(id);
    }
  }
  return delta;
}

}  // namespace goldrec
