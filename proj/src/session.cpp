#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "goldrec/pipeline.hpp"

namespace goldrec {

struct Session::ColumnRun {
  ColumnRun(const ClusterTable& table, std::size_t col, const SessionConfig& config)
      : column(col), store(table, col, config.candidates()), grouping(store.live_inputs(), config.grouping()) {}

  std::size_t column;
  ReplacementStore store;
  GroupingState grouping;
  std::size_t reviewed = 0;
  std::set<std::uint64_t> excluded;  // rejected members and their mirrors
};

Session::Session(ClusterTable table, SessionConfig config, Clock clock)
    : original_(table), table_(std::move(table)), config_(std::move(config)), clock_(std::move(clock)) {
  config_.validate();
  if (!table_.column_index(config_.key_column)) throw std::invalid_argument("no key column '" + config_.key_column + "'");
  if (config_.target_columns.empty()) {
    for (std::size_t k = 0; k < table_.column_count(); ++k) {
      if (table_.column_names()[k] != config_.key_column) targets_.push_back(k);
    }
  } else {
    for (const auto& name : config_.target_columns) {
      const auto k = table_.column_index(name);
      if (!k) throw std::invalid_argument("no target column '" + name + "'");
      targets_.push_back(*k);
    }
  }
}

Session::~Session() = default;

void Session::start_column() { run_ = std::make_unique<ColumnRun>(table_, targets_[position_], config_); }

bool Session::advance() {
  while (!pending_) {
    if (position_ >= targets_.size()) return false;
    if (config_.global_budget > 0 && decisions_.size() >= config_.global_budget) return false;
    if (!run_) start_column();
    std::optional<Group> group;
    if (run_->reviewed < config_.budget) group = run_->grouping.next_largest_group();
    if (!group) {
      run_.reset();
      ++position_;
      continue;
    }
    PendingGroup p{decisions_.size() + 1, run_->column, table_.column_names()[run_->column], std::move(*group), {}};
    for (std::size_t k = 0; k < p.group.members.size() && k < kMaxSamples; ++k) {
      const auto& r = run_->store.get(p.group.members[k]);
      p.samples.emplace_back(r.lhs, r.rhs);
    }
    pending_ = std::move(p);
  }
  return true;
}

const ReplacementStore* Session::store() const { return run_ ? &run_->store : nullptr; }

const PendingGroup* Session::current() { return advance() ? &*pending_ : nullptr; }

const DecisionRecord& Session::decide(Verdict verdict, std::optional<Direction> direction,
                                      std::optional<std::string> timestamp) {
  if (!advance()) throw std::logic_error("no group is awaiting a decision");
  if (verdict == Verdict::Approved && !direction) throw std::invalid_argument("an approval needs a direction");
  if (verdict == Verdict::Rejected && direction) throw std::invalid_argument("a rejection takes no direction");
  const PendingGroup& p = *pending_;

  DecisionRecord r;
  r.seq = p.seq;
  r.column = p.column_name;
  r.group_key = p.group.key();
  r.size = p.group.size();
  r.samples = p.samples;
  r.verdict = verdict;
  r.direction = direction;

  auto& store = run_->store;
  auto& grouping = run_->grouping;
  if (verdict == Verdict::Approved) {
    const ChangeSummary s = apply_group(p.group, *direction, table_, store);
    for (std::uint64_t id : s.removed) grouping.remove(id);
    for (std::uint64_t id : s.revived) {
      if (run_->excluded.count(id)) continue;
      const auto& rep = store.get(id);
      grouping.add({id, rep.lhs, rep.rhs});
    }
    r.cells_rewritten = s.cells_rewritten;
    r.replacements_removed = s.replacements_removed;
    r.replacements_rerouted = s.replacements_rerouted;
    cells_rewritten_ += s.cells_rewritten;
  } else {
    for (std::uint64_t id : p.group.members) {
      run_->excluded.insert(id);
      const auto& rep = store.get(id);
      if (const auto mirror = store.find(rep.rhs, rep.lhs)) {
        run_->excluded.insert(*mirror);
        grouping.remove(*mirror);
      }
    }
  }
  ++run_->reviewed;
  r.timestamp = timestamp ? std::move(*timestamp) : clock_();
  decisions_.push_back(std::move(r));
  pending_.reset();
  return decisions_.back();
}

SessionProgress Session::progress() {
  SessionProgress out;
  for (std::size_t k : targets_) out.columns.push_back(table_.column_names()[k]);
  out.complete = !advance();
  out.column_position = position_;
  out.decisions = decisions_.size();
  out.approved = static_cast<std::size_t>(std::count_if(decisions_.begin(), decisions_.end(), [](const auto& d) {
    return d.verdict == Verdict::Approved;
  }));
  out.cells_rewritten = cells_rewritten_;
  if (run_) {
    out.reviewed_in_column = run_->reviewed;
    out.budget_remaining = config_.budget - run_->reviewed;
    out.live_replacements = run_->store.live_count();
  }
  if (config_.global_budget > 0) {
    out.budget_remaining = std::min(out.budget_remaining, config_.global_budget - std::min(config_.global_budget, decisions_.size()));
  }
  return out;
}

std::optional<ReviewChoice> TerminalReviewer::review(const PendingGroup& p) {
  out_ << "\n#" << p.seq << "  column " << p.column_name << "  group of " << p.group.size() << "\n";
  out_ << "  structure  " << p.group.structure << "\n";
  out_ << "  program    " << p.group.pivot_text << "\n\n";
  std::size_t w = 0;
  for (const auto& [lhs, rhs] : p.samples) w = std::max(w, lhs.size());
  for (const auto& [lhs, rhs] : p.samples) {
    out_ << "    " << to_utf8(lhs) << std::string(w - lhs.size(), ' ') << "  ->  " << to_utf8(rhs) << "\n";
  }
  if (p.group.size() > p.samples.size()) out_ << "    ... " << p.group.size() - p.samples.size() << " more\n";
  for (;;) {
    out_ << "[a] approve lhs->rhs  [m] approve rhs->lhs  [r] reject  [q] quit: " << std::flush;
    std::string answer;
    if (!std::getline(in_, answer)) return std::nullopt;
    if (answer == "a") return ReviewChoice{Verdict::Approved, Direction::LhsToRhs};
    if (answer == "m") return ReviewChoice{Verdict::Approved, Direction::RhsToLhs};
    if (answer == "r") return ReviewChoice{Verdict::Rejected, std::nullopt};
    if (answer == "q") return std::nullopt;
  }
}

std::size_t run_session(Session& session, Reviewer& reviewer, DecisionLogWriter* log) {
  std::size_t n = 0;
  while (const PendingGroup* p = session.current()) {
    const auto choice = reviewer.review(*p);
    if (!choice) break;
    const auto& r = session.decide(choice->verdict, choice->direction);
    if (log) log->append(r);
    ++n;
  }
  return n;
}

void replay(Session& session, const std::vector<DecisionRecord>& records, DecisionLogWriter* log) {
  for (const auto& rec : records) {
    const PendingGroup* p = session.current();
    const std::string where = "decision log diverges at seq " + std::to_string(rec.seq) + ": ";
    if (!p) throw std::runtime_error(where + "the session has no more groups");
    if (p->seq != rec.seq) throw std::runtime_error(where + "expected seq " + std::to_string(p->seq));
    if (p->column_name != rec.column || p->group.key() != rec.group_key) {
      throw std::runtime_error(where + "the session offers group '" + p->group.key() + "' in column " + p->column_name);
    }
    const auto& r = session.decide(rec.verdict, rec.direction, rec.timestamp);
    if (log) log->append(r);
  }
}

}  // namespace goldrec
