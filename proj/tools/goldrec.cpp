// goldrec: standardise variant values in clusters of duplicate records.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "goldrec/pipeline.hpp"
#include "goldrec/server.hpp"

using namespace goldrec;

namespace {

struct Common {
  std::string config_path;
  std::string input;
  std::string key;
  std::vector<std::string> columns;
  std::size_t budget = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "key = value configuration file");
  cmd->add_option("-i,--input", c.input, "input table (overrides the config)");
  cmd->add_option("-k,--key", c.key, "cluster key column (overrides the config)");
  cmd->add_option("--column", c.columns, "target column, repeatable (overrides the config)");
  cmd->add_option("--budget", c.budget, "groups reviewed per column (overrides the config)");
}

SessionConfig resolve(const Common& c) {
  SessionConfig config = c.config_path.empty() ? SessionConfig{} : load_config(c.config_path);
  if (!c.input.empty()) config.input = c.input;
  if (!c.key.empty()) config.key_column = c.key;
  if (!c.columns.empty()) config.target_columns = c.columns;
  if (c.budget > 0) config.budget = c.budget;
  if (config.input.empty()) throw std::invalid_argument("no input table: pass --input or set input in the config");
  config.validate();
  return config;
}

Session open_session(const SessionConfig& config) {
  return Session(ingest(config.input, config.key_column, config.delimiter), config);
}

// Replays an existing log so that a paused session picks up where it left off.
void resume(Session& session, const std::string& log_path) {
  if (log_path.empty() || !std::filesystem::exists(log_path)) return;
  const auto records = read_decision_log(log_path);
  replay(session, records);
  if (!records.empty()) std::cerr << "resumed " << records.size() << " decisions from " << log_path << "\n";
}

void print_progress(Session& session) {
  const auto p = session.progress();
  std::cout << "decisions " << p.decisions << " (approved " << p.approved << "), cells rewritten "
            << p.cells_rewritten << (p.complete ? ", complete" : ", paused") << "\n";
}

ReviewServer* active_server = nullptr;

extern "C" void handle_signal(int) {
  if (active_server) active_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goldrec: standardise variant values in clusters of duplicate records"};
  app.require_subcommand(1);

  Common ingest_opts;
  auto* ingest_cmd = app.add_subcommand("ingest", "parse the input and report clusters and candidate counts");
  add_common(ingest_cmd, ingest_opts);

  Common review_opts;
  std::string review_log = "decisions.jsonl";
  auto* review_cmd = app.add_subcommand("review", "review groups in the terminal");
  add_common(review_cmd, review_opts);
  review_cmd->add_option("--log", review_log, "decision log, appended to and resumed from");

  Common serve_opts;
  std::string serve_log = "decisions.jsonl";
  std::string host = "127.0.0.1";
  int port = -1;
  std::string serve_labels, ui_dir;
  auto* serve_cmd = app.add_subcommand("serve", "serve the review API over HTTP");
  add_common(serve_cmd, serve_opts);
  serve_cmd->add_option("--log", serve_log, "decision log, appended to and resumed from");
  serve_cmd->add_option("--host", host, "address to bind");
  serve_cmd->add_option("--port", port, "port (default: GOLDREC_PORT, then the config)");
  serve_cmd->add_option("--labels", serve_labels, "labels file for /api/metrics");
  serve_cmd->add_option("--ui", ui_dir, "directory of static UI files served at /");

  Common replay_opts;
  std::string replay_decisions, replay_out, replay_labels;
  bool replay_force = false;
  auto* replay_cmd = app.add_subcommand("replay", "apply a recorded decision log headlessly");
  add_common(replay_cmd, replay_opts);
  replay_cmd->add_option("--decisions", replay_decisions, "decision log to replay")->required();
  replay_cmd->add_option("-o,--out", replay_out, "export directory");
  replay_cmd->add_option("--labels", replay_labels, "labels file; adds metrics.txt to the export");
  replay_cmd->add_flag("--force", replay_force, "overwrite existing export files");

  Common eval_opts;
  std::string eval_labels, eval_decisions, eval_column;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a decision log against labelled value pairs");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--labels", eval_labels, "labels file: value_a, value_b, variant|conflict")->required();
  eval_cmd->add_option("--decisions", eval_decisions, "decision log to apply first");
  eval_cmd->add_option("--label-column", eval_column, "column the labels refer to (default: first target)");

  Common export_opts;
  std::string export_decisions, export_out, export_labels;
  bool export_force = false;
  auto* export_cmd = app.add_subcommand("export", "write the standardised table, golden records and log");
  add_common(export_cmd, export_opts);
  export_cmd->add_option("--decisions", export_decisions, "decision log to apply first");
  export_cmd->add_option("-o,--out", export_out, "export directory")->required();
  export_cmd->add_option("--labels", export_labels, "labels file; adds metrics.txt");
  export_cmd->add_flag("--force", export_force, "overwrite existing files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_cmd->parsed()) {
      const auto config = resolve(ingest_opts);
      Session session = open_session(config);
      const auto& table = session.table();
      std::cout << "rows " << table.row_count() << "\nclusters " << table.cluster_count() << "\n";
      for (std::size_t k : session.target_columns()) {
        const ReplacementStore store(table, k, config.candidates());
        std::cout << "column " << table.column_names()[k] << ": " << store.size() << " candidate replacements\n";
      }
    } else if (review_cmd->parsed()) {
      Session session = open_session(resolve(review_opts));
      resume(session, review_log);
      DecisionLogWriter log(review_log);
      TerminalReviewer reviewer(std::cin, std::cout);
      run_session(session, reviewer, &log);
      print_progress(session);
    } else if (serve_cmd->parsed()) {
      auto config = resolve(serve_opts);
      if (const char* env = std::getenv("GOLDREC_PORT")) config.port = std::stoi(env);
      if (port >= 0) config.port = port;
      Session session = open_session(config);
      resume(session, serve_log);
      DecisionLogWriter log(serve_log);
      ServerOptions options{&log, {}, {}};
      if (!serve_labels.empty()) options.labels = serve_labels;
      if (!ui_dir.empty()) options.ui_dir = ui_dir;
      ReviewServer server(session, options);
      const int bound = server.bind(host, config.port);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      active_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      server.run();
      active_server = nullptr;
      print_progress(session);
    } else if (replay_cmd->parsed()) {
      Session session = open_session(resolve(replay_opts));
      replay(session, read_decision_log(replay_decisions));
      print_progress(session);
      if (!replay_out.empty()) {
        ExportOptions options{replay_out, replay_force, {}, {}};
        if (!replay_labels.empty()) options.labels = replay_labels;
        for (const auto& f : export_outputs(session, options)) std::cout << "wrote " << f << "\n";
      }
    } else if (eval_cmd->parsed()) {
      Session session = open_session(resolve(eval_opts));
      if (!eval_decisions.empty()) replay(session, read_decision_log(eval_decisions));
      std::optional<std::string> column;
      if (!eval_column.empty()) column = eval_column;
      std::cout << metrics_report(evaluate_session(session, eval_labels, column));
    } else if (export_cmd->parsed()) {
      Session session = open_session(resolve(export_opts));
      if (!export_decisions.empty()) replay(session, read_decision_log(export_decisions));
      ExportOptions options{export_out, export_force, {}, {}};
      if (!export_labels.empty()) options.labels = export_labels;
      for (const auto& f : export_outputs(session, options)) std::cout << "wrote " << f << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
