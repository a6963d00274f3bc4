#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "acceptance.hpp"
#include "corpus.hpp"
#include "goldrec/apply.hpp"
#include "goldrec/csv.hpp"
#include "goldrec/grouping.hpp"
#include "goldrec/pipeline.hpp"
#include "oracle.hpp"
#include "planted.hpp"

using namespace goldrec;
namespace fs = std::filesystem;

namespace acceptance {

// ---- tolerances ------------------------------------------------------------

constexpr std::size_t kLatencyReplacements = 10000;
constexpr std::size_t kLatencyTemplates = 20;
constexpr int kLatencyRuns = 5;
constexpr double kLatencyMaxRatio = 0.10;
constexpr double kMetricTolerance = 1e-9;
constexpr double kMinRecall = 0.9;
constexpr double kRequiredPrecision = 1.0;
constexpr std::size_t kPlantedClusters = 150;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / ("goldrec_acceptance_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_table(const ClusterTable& t, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  csv::write_row(out, t.column_names());
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    csv::Row row;
    for (std::size_t c = 0; c < t.column_count(); ++c) row.push_back(to_utf8(t.cell(r, c)));
    csv::write_row(out, row);
  }
}

SessionConfig planted_config(const std::string& input) {
  SessionConfig c;
  c.input = input;
  c.key_column = "id";
  c.budget = 100000;  // review everything
  return c;
}

// Plays the human: approves a group only when every member, applied in the
// chosen direction, turns each occurrence into another spelling of the same
// canonical value. Prefers the direction that moves towards canonical
// spellings; rejects when neither direction is entirely correct.
class GroundTruthReviewer : public Reviewer {
 public:
  GroundTruthReviewer(const planted::Dataset& data, Session& session) : data_(data), session_(session) {}

  std::optional<ReviewChoice> review(const PendingGroup& p) override {
    const auto forward = score(p, false);
    const auto backward = score(p, true);
    if (forward && (!backward || *forward <= *backward)) return ReviewChoice{Verdict::Approved, Direction::LhsToRhs};
    if (backward) return ReviewChoice{Verdict::Approved, Direction::RhsToLhs};
    return ReviewChoice{Verdict::Rejected, std::nullopt};
  }

 private:
  // Total change in spelling rank, or nullopt if some occurrence would be
  // rewritten to a spelling of another value (or to no known spelling).
  std::optional<long> score(const PendingGroup& p, bool mirrored) const {
    const ReplacementStore& store = *session_.store();
    const ClusterTable& table = session_.table();
    long total = 0;
    for (std::uint64_t id : p.group.members) {
      const Replacement& member = store.get(id);
      const auto oriented = mirrored ? store.find(member.rhs, member.lhs) : std::optional<std::uint64_t>(id);
      if (!oriented) return std::nullopt;
      const Replacement& r = store.get(*oriented);
      for (const auto& occ : r.occurrences) {
        const Text& cell = table.cell(occ.row, p.column);
        const Text result = cell.substr(0, occ.begin) + r.rhs + cell.substr(occ.end);
        const auto cluster = table.cluster_of(occ.row);
        const auto before = data_.form(cluster, p.column, cell);
        const auto after = data_.form(cluster, p.column, result);
        if (!before || !after || before->canonical != after->canonical) return std::nullopt;
        total += after->rank - before->rank;
      }
    }
    return total;
  }

  const planted::Dataset& data_;
  Session& session_;
};

// Approves or rejects at random, in a random direction.
class RandomReviewer : public Reviewer {
 public:
  explicit RandomReviewer(std::uint64_t seed) : rng_(seed) {}
  std::optional<ReviewChoice> review(const PendingGroup&) override {
    switch (rng_() % 3) {
      case 0: return ReviewChoice{Verdict::Rejected, std::nullopt};
      case 1: return ReviewChoice{Verdict::Approved, Direction::LhsToRhs};
      default: return ReviewChoice{Verdict::Approved, Direction::RhsToLhs};
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

// ---- incremental latency ---------------------------------------------------

Outcome incremental_latency() {
  std::mt19937_64 rng(2024);
  const auto items = corpus::templated(rng, kLatencyReplacements, kLatencyTemplates);
  const GroupingConfig config;
  std::vector<double> full, first;
  bool same_first = true;
  for (int run = 0; run < kLatencyRuns; ++run) {
    auto start = Clock::now();
    const auto groups = one_shot_grouping(items, config);
    full.push_back(seconds_since(start));

    start = Clock::now();
    GroupingState state(items, config);
    const auto g = state.next_largest_group();
    first.push_back(seconds_since(start));
    same_first = same_first && g && !groups.empty() && g->members == groups.front().members;
  }
  const double ratio = median(first) / median(full);
  return {ratio <= kLatencyMaxRatio && same_first,
          std::to_string(items.size()) + " replacements, " + std::to_string(kLatencyTemplates) +
              " templates: first group " + fmt(median(first), 2) + " s vs one-shot " + fmt(median(full), 2) +
              " s (median of " + std::to_string(kLatencyRuns) + "), ratio " + fmt(ratio, 3) + " (limit " +
              fmt(kLatencyMaxRatio, 2) + ")" + (same_first ? "" : ", first group differs from one-shot")};
}

// ---- replacement maintenance -----------------------------------------------

Outcome replacement_maintenance() {
  Checks c;
  // The v1 / v2 / v3 scenario on two name clusters.
  {
    ClusterTable table({"name"});
    for (const char* v : {"Mary Lee", "Lee, Mary", "M. Lee"}) table.add_row("c1", {T(v)});
    for (const char* v : {"James Smith", "Smith, James", "J. Smith"}) table.add_row("c2", {T(v)});
    ReplacementStore store(table, 0, {false, Normalization::None});
    c.expect(store.size() == 12, "12 pairwise candidates");
    const auto v12 = *store.find(T("Mary Lee"), T("Lee, Mary"));
    const auto v13 = *store.find(T("Mary Lee"), T("M. Lee"));
    const auto v21 = *store.find(T("Lee, Mary"), T("Mary Lee"));
    const auto v23 = *store.find(T("Lee, Mary"), T("M. Lee"));
    Group g;
    g.members = {v12};
    const auto summary = apply_group(g, Direction::LhsToRhs, table, store);
    c.expect(table.cell(0, 0) == T("Lee, Mary"), "v1 replaced by v2");
    c.expect(!store.get(v13).live(), "v1 -> v3 gone");
    c.expect(store.get(v23).occurrences == std::set<Occurrence>{{0, 0, 9}, {1, 0, 9}}, "v1 -> v3 became v2 -> v3");
    c.expect(!store.get(v21).live(), "v2 -> v1 removed");
    c.expect(summary.cells_rewritten == 1 && summary.replacements_rerouted == 1, "summary counts");
    c.expect(oracle::soundness_violations(table, store).empty(), "sound after the scenario");
  }

  // Full soundness scans after every decision of reviewed sessions.
  std::size_t decisions = 0, scanned = 0, violations = 0;
  for (std::uint64_t seed : {11u, 12u}) {
    std::mt19937_64 rng(seed);
    const auto data = planted::generate(rng, 40);
    Session session(data.table, planted_config(""));
    GroundTruthReviewer truthful(data, session);
    RandomReviewer random(seed);
    Reviewer& reviewer = seed % 2 ? static_cast<Reviewer&>(truthful) : random;
    while (const PendingGroup* p = session.current()) {
      const auto choice = reviewer.review(*p);
      session.decide(choice->verdict, choice->direction);
      ++decisions;
      if (const ReplacementStore* store = session.store()) {
        scanned += store->size();
        const auto bad = oracle::soundness_violations(session.table(), *store);
        violations += bad.size();
        for (const auto& r : store->live_inputs()) {
          const auto mirror = store->find(r.rhs, r.lhs);
          violations += !mirror || !store->get(*mirror).live();
        }
      }
    }
  }
  c.expect(violations == 0, "soundness scans");
  return c.outcome("v1/v2/v3 scenario exact; " + std::to_string(decisions) + " decisions, " + std::to_string(scanned) +
                   " replacement scans, " + std::to_string(violations) + " violations");
}

// ---- metrics -----------------------------------------------------------------

Outcome metrics() {
  Checks c;
  auto near = [](const std::optional<double>& v, double want) {
    return v && std::abs(*v - want) <= kMetricTolerance;
  };
  const ConfusionCounts perfect{1, 0, 0, 1};
  c.expect(near(precision(perfect), 1) && near(recall(perfect), 1) && near(mcc(perfect), 1), "TP1 TN1");
  const ConfusionCounts inverted{0, 1, 1, 0};
  c.expect(near(mcc(inverted), -1), "FP1 FN1");
  const ConfusionCounts mixed{2, 1, 2, 5};
  c.expect(near(precision(mixed), 2.0 / 3.0) && near(recall(mixed), 0.5) &&
               near(mcc(mixed), 8.0 / std::sqrt(3.0 * 4.0 * 6.0 * 7.0)),
           "TP2 FP1 FN2 TN5");

  // End to end on planted variants, reviewed by the ground truth.
  std::mt19937_64 rng(31337);
  const auto data = planted::generate(rng, kPlantedClusters);
  Session session(data.table, planted_config(""));
  GroundTruthReviewer reviewer(data, session);
  run_session(session, reviewer);

  ConfusionCounts total;
  std::string per_column;
  for (std::size_t column = 1; column < 4; ++column) {
    const auto e = evaluate(planted::labels(data, column), session.original(), session.table(), column);
    total.tp += e.counts.tp;
    total.fp += e.counts.fp;
    total.fn += e.counts.fn;
    total.tn += e.counts.tn;
    per_column += " " + data.table.column_names()[column] + " " + fmt(e.recall.value_or(0), 3);
  }
  const auto p = precision(total);
  const auto r = recall(total);
  c.expect(p && *p == kRequiredPrecision, "precision");
  c.expect(r && *r >= kMinRecall, "recall");
  const auto approved = session.progress().approved;
  return c.outcome("hand-computed examples within " + fmt(kMetricTolerance * 1e9, 0) + "e-9; planted corpus of " +
                   std::to_string(data.table.row_count()) + " rows, " + std::to_string(session.decisions().size()) +
                   " groups reviewed (" + std::to_string(approved) + " approved): tp=" + std::to_string(total.tp) +
                   " fp=" + std::to_string(total.fp) + " fn=" + std::to_string(total.fn) +
                   " tn=" + std::to_string(total.tn) + ", precision " + fmt(p.value_or(0), 4) + ", recall " +
                   fmt(r.value_or(0), 4) + " (min " + fmt(kMinRecall, 2) + "; by column" + per_column + ")");
}

// ---- determinism -------------------------------------------------------------

Outcome determinism() {
  Checks c;
  TempDir dir("determinism");
  std::mt19937_64 rng(99);
  const auto data = planted::generate(rng, 60);
  const auto input = dir.path / "input.csv";
  write_table(data.table, input);
  const auto log_path = (dir.path / "session.jsonl").string();
  const auto config = planted_config(input.string());

  // A live session with a wall clock, logged to disk.
  {
    Session live(ingest(input.string(), "id"), config);
    RandomReviewer reviewer(5);
    DecisionLogWriter log(log_path);
    run_session(live, reviewer, &log);
    export_outputs(live, {(dir.path / "live").string(), false, {}, {}});
  }
  const auto records = read_decision_log(log_path);
  for (const char* name : {"replay1", "replay2"}) {
    Session again(ingest(input.string(), "id"), config, [] { return std::string("clock must not be used"); });
    replay(again, records);
    export_outputs(again, {(dir.path / name).string(), false, {}, {}});
  }
  std::size_t files = 0;
  for (const char* file : {"standardized.csv", "golden.csv", "decisions.jsonl"}) {
    const auto live = slurp(dir.path / "live" / file);
    c.expect(!live.empty(), std::string(file) + " written");
    c.expect(live == slurp(dir.path / "replay1" / file), std::string(file) + " replay 1");
    c.expect(live == slurp(dir.path / "replay2" / file), std::string(file) + " replay 2");
    ++files;
  }
  c.expect(slurp(log_path) == slurp(dir.path / "live" / "decisions.jsonl"), "log file equals exported log");
  return c.outcome(std::to_string(records.size()) + " decisions replayed twice; " + std::to_string(files) +
                   " export files byte-identical");
}

}  // namespace acceptance
