#include "goldrec/apply.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace goldrec {

std::string to_string(Verdict v) { return v == Verdict::Approved ? "approved" : "rejected"; }

std::string to_string(Direction d) { return d == Direction::LhsToRhs ? "lhs_to_rhs" : "rhs_to_lhs"; }

Verdict parse_verdict(std::string_view s) {
  if (s == "approved") return Verdict::Approved;
  if (s == "rejected") return Verdict::Rejected;
  throw std::invalid_argument("unknown verdict: " + std::string(s));
}

Direction parse_direction(std::string_view s) {
  if (s == "lhs_to_rhs") return Direction::LhsToRhs;
  if (s == "rhs_to_lhs") return Direction::RhsToLhs;
  throw std::invalid_argument("unknown direction: " + std::string(s));
}

namespace {

std::uint64_t oriented(const ReplacementStore& store, std::uint64_t id, Direction d) {
  if (d == Direction::LhsToRhs) return id;
  const auto& r = store.get(id);
  auto mirror = store.find(r.rhs, r.lhs);
  if (!mirror) throw std::logic_error("replacement without its mirror: " + to_utf8(r.lhs));
  return *mirror;
}

}  // namespace

ChangeSummary apply_group(const Group& group, Direction direction, ClusterTable& table,
                          ReplacementStore& store) {
  std::vector<std::uint64_t> ids;
  for (std::uint64_t member : group.members) {
    if (member >= store.size()) throw std::invalid_argument("unknown replacement id");
    ids.push_back(oriented(store, member, direction));
  }

  const std::size_t col = store.column();
  std::set<std::uint32_t> rewritten;
  std::map<std::uint64_t, bool> live_at_start;  // first sighting in a delta
  std::set<std::uint64_t> gained;
  auto note = [&](const StoreDelta& d) {
    for (auto id : d.emptied) live_at_start.try_emplace(id, true);
    for (auto id : d.revived) live_at_start.try_emplace(id, false);
    for (auto id : d.gained) {
      live_at_start.try_emplace(id, true);
      gained.insert(id);
    }
  };

  for (std::uint64_t id : ids) {
    const Replacement r = store.get(id);  // copy: refresh below mutates the store
    if (!r.live()) continue;              // already applied, or emptied by an earlier member
    std::map<std::uint32_t, std::vector<Occurrence>> by_row;
    for (const auto& o : r.occurrences) by_row[o.row].push_back(o);
    std::set<std::uint32_t> clusters;
    for (auto& [row, occ] : by_row) {
      Text value = table.cell(row, col);
      // Right to left so earlier offsets stay valid.
      std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) { return a.begin > b.begin; });
      std::uint32_t limit = static_cast<std::uint32_t>(value.size());
      for (const auto& o : occ) {
        if (o.end > limit) continue;  // overlaps a span already rewritten
        const TextView span = TextView(value).substr(o.begin, o.end - o.begin);
        if (join_tokens(tokenize(span)) != r.lhs && span != r.lhs) {
          throw std::logic_error("occurrence does not hold its lhs: " + to_utf8(r.lhs));
        }
        value.replace(o.begin, o.end - o.begin, r.rhs);
        limit = o.begin;
      }
      table.set_cell(row, col, std::move(value));
      rewritten.insert(row);
      clusters.insert(table.cluster_of(row));
    }
    for (std::uint32_t c : clusters) note(store.refresh_cluster(table, c));
  }

  ChangeSummary summary;
  summary.cells_rewritten = rewritten.size();
  for (const auto& [id, was_live] : live_at_start) {
    const bool now = store.get(id).live();
    if (was_live && !now) summary.removed.push_back(id);
    if (!was_live && now) summary.revived.push_back(id);
    if (was_live && now && gained.count(id)) ++summary.replacements_rerouted;
  }
  summary.replacements_removed = summary.removed.size();
  return summary;
}

}  // namespace goldrec
