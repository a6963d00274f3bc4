#pragma once

// Applying an approved group: rewriting cells and keeping the replacement
// store in step.

#include <cstdint>
#include <string>
#include <vector>

#include "goldrec/candidates.hpp"
#include "goldrec/grouping.hpp"

namespace goldrec {

enum class Verdict { Approved, Rejected };
enum class Direction { LhsToRhs, RhsToLhs };

std::string to_string(Verdict v);
std::string to_string(Direction d);
Verdict parse_verdict(std::string_view s);
Direction parse_direction(std::string_view s);

struct ChangeSummary {
  std::size_t cells_rewritten = 0;
  std::size_t replacements_removed = 0;
  std::size_t replacements_rerouted = 0;
  std::vector<std::uint64_t> removed;  // live before, empty now
  std::vector<std::uint64_t> revived;  // empty before, live now
};

// Rewrites every occurrence of the group's replacements (mirrored for
// RhsToLhs) and refreshes the touched clusters. Group members are store ids;
// members that are no longer live are skipped, so a second application is a
// no-op. Throws std::logic_error if an occurrence does not hold its lhs.
ChangeSummary apply_group(const Group& group, Direction direction, ClusterTable& table,
                          ReplacementStore& store);

}  // namespace goldrec
