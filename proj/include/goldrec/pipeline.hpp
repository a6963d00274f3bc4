#pragma once

// Ingestion, review sessions over the target columns, the decision log and
// export.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "goldrec/apply.hpp"
#include "goldrec/candidates.hpp"
#include "goldrec/consolidate.hpp"
#include "goldrec/csv.hpp"
#include "goldrec/grouping.hpp"

namespace goldrec {

// ---- configuration -------------------------------------------------------

struct SessionConfig {
  std::string input;
  std::string key_column;
  std::vector<std::string> target_columns;  // empty: every column but the key
  char delimiter = ',';
  std::size_t budget = 100;        // groups reviewed per column
  std::size_t global_budget = 0;   // across all columns, 0 for no cap
  int max_path_len = 6;
  bool token_level = true;
  std::size_t min_group_size = 1;
  double constant_score_exponent = 0.5;
  std::size_t max_value_len = 256;
  std::size_t sample_threshold = 0;
  std::size_t sample_size = 200;
  Normalization normalization = Normalization::None;
  std::uint64_t seed = 0;
  int port = 8080;

  void validate() const;  // throws std::invalid_argument
  GroupingConfig grouping() const;
  CandidateOptions candidates() const;
};

// "key = value" lines; '#' starts a comment. A relative input path is taken
// relative to base_dir.
SessionConfig parse_config(std::string_view text, const std::string& base_dir = "");
SessionConfig load_config(const std::string& path);

// ---- ingestion -----------------------------------------------------------

// Header row first. Rows are clustered by exact equality of the key column;
// rows with an empty key each get a cluster of their own. Throws
// std::runtime_error naming the line of a malformed row.
ClusterTable ingest(const std::string& path, const std::string& key_column, char delimiter = ',');

// ---- decision log --------------------------------------------------------

struct DecisionRecord {
  std::uint64_t seq = 0;
  std::string column;
  std::string group_key;
  std::size_t size = 0;
  std::vector<std::pair<Text, Text>> samples;
  Verdict verdict = Verdict::Rejected;
  std::optional<Direction> direction;  // set iff approved
  std::size_t cells_rewritten = 0;
  std::size_t replacements_removed = 0;
  std::size_t replacements_rerouted = 0;
  std::string timestamp;
};

std::string to_json_line(const DecisionRecord& r);  // no trailing newline
DecisionRecord parse_decision(std::string_view line);
// Blank lines are skipped; errors name the line number.
std::vector<DecisionRecord> read_decision_log(const std::string& path);

// Appends records to a file, flushing after each one.
class DecisionLogWriter {
 public:
  explicit DecisionLogWriter(const std::string& path);
  ~DecisionLogWriter();
  void append(const DecisionRecord& r);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---- session -------------------------------------------------------------

inline constexpr std::size_t kMaxSamples = 20;

struct PendingGroup {
  std::uint64_t seq;       // sequence number the decision will receive
  std::size_t column;      // table column index
  std::string column_name;
  Group group;
  std::vector<std::pair<Text, Text>> samples;  // first kMaxSamples members
};

struct SessionProgress {
  std::vector<std::string> columns;
  std::size_t column_position = 0;  // index into columns; == size() when done
  std::size_t reviewed_in_column = 0;
  std::size_t budget_remaining = 0;
  std::size_t decisions = 0;
  std::size_t approved = 0;
  std::size_t cells_rewritten = 0;
  std::size_t live_replacements = 0;  // in the current column
  bool complete = false;
};

std::string utc_timestamp();

// Walks the target columns in order. For each column it mines candidates,
// then hands out the largest remaining group until the column's budget is
// used or no group is left. A rejected group's members and their mirrors
// are not offered again.
class Session {
 public:
  using Clock = std::function<std::string()>;

  Session(ClusterTable table, SessionConfig config, Clock clock = utc_timestamp);
  ~Session();

  // The group awaiting a decision, or nullptr when the session is complete.
  const PendingGroup* current();
  // Decides the current group. Approvals need a direction. timestamp
  // overrides the clock (used by replay).
  const DecisionRecord& decide(Verdict verdict, std::optional<Direction> direction,
                               std::optional<std::string> timestamp = std::nullopt);

  SessionProgress progress();
  const ClusterTable& table() const { return table_; }
  const ClusterTable& original() const { return original_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<DecisionRecord>& decisions() const { return decisions_; }
  const std::vector<std::size_t>& target_columns() const { return targets_; }
  // Replacement store of the column under review; nullptr between columns.
  const ReplacementStore* store() const;

 private:
  struct ColumnRun;
  bool advance();
  void start_column();

  ClusterTable original_;
  ClusterTable table_;
  SessionConfig config_;
  Clock clock_;
  std::vector<std::size_t> targets_;
  std::size_t position_ = 0;
  std::unique_ptr<ColumnRun> run_;
  std::optional<PendingGroup> pending_;
  std::vector<DecisionRecord> decisions_;
  std::size_t cells_rewritten_ = 0;
};

struct ReviewChoice {
  Verdict verdict;
  std::optional<Direction> direction;
};

class Reviewer {
 public:
  virtual ~Reviewer() = default;
  // nullopt pauses the session.
  virtual std::optional<ReviewChoice> review(const PendingGroup& group) = 0;
};

// Terminal prompt: a = approve lhs->rhs, m = approve rhs->lhs, r = reject,
// q = quit.
class TerminalReviewer : public Reviewer {
 public:
  TerminalReviewer(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::optional<ReviewChoice> review(const PendingGroup& group) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

// Presents groups until the reviewer pauses or the session completes.
// Returns the number of decisions made.
std::size_t run_session(Session& session, Reviewer& reviewer, DecisionLogWriter* log = nullptr);

// Re-applies recorded decisions in order, with their timestamps. Throws
// std::runtime_error when a record does not match the group the session
// offers at that point.
void replay(Session& session, const std::vector<DecisionRecord>& records, DecisionLogWriter* log = nullptr);

// ---- export --------------------------------------------------------------

struct ExportOptions {
  std::string out_dir;
  bool force = false;                 // overwrite existing files
  std::optional<std::string> labels;  // labels file for metrics.txt
  std::optional<std::string> labels_column;  // default: first target column
};

// One row per cluster: the key, then the majority value of every other
// column (empty on a tie).
std::vector<csv::Row> golden_records(const ClusterTable& table, const std::string& key_column);

// Evaluates the session's edits of one column against a labels file.
Evaluation evaluate_session(const Session& session, const std::string& labels_path,
                            const std::optional<std::string>& column = std::nullopt);

// Writes standardized.csv, golden.csv, decisions.jsonl and, with labels,
// metrics.txt. Refuses to overwrite existing files unless force is set.
// Returns the paths written.
std::vector<std::string> export_outputs(const Session& session, const ExportOptions& options);

}  // namespace goldrec
