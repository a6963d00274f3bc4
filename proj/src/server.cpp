#include "goldrec/server.hpp"

#include <mutex>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace goldrec {

using json = nlohmann::ordered_json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) { reply(res, status, {{"error", message}}); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

struct ReviewServer::Impl {
  Impl(Session& s, ServerOptions o) : session(s), options(std::move(o)) {}

  Session& session;
  ServerOptions options;
  std::mutex mutex;
  httplib::Server http;

  json session_json() {
    const auto p = session.progress();
    json j;
    j["columns"] = p.columns;
    j["column"] = p.column_position < p.columns.size() ? json(p.columns[p.column_position]) : json(nullptr);
    j["column_position"] = p.column_position;
    j["reviewed_in_column"] = p.reviewed_in_column;
    j["budget"] = session.config().budget;
    j["budget_remaining"] = p.budget_remaining;
    j["decisions"] = p.decisions;
    j["approved"] = p.approved;
    j["cells_rewritten"] = p.cells_rewritten;
    j["live_replacements"] = p.live_replacements;
    j["complete"] = p.complete;
    return j;
  }

  json next_json() {
    const PendingGroup* p = session.current();
    if (!p) return {{"status", "complete"}};
    json j;
    j["status"] = "group";
    j["seq"] = p->seq;
    j["column"] = p->column_name;
    j["group_key"] = p->group.key();
    j["structure"] = p->group.structure;
    j["pivot"] = p->group.pivot_text;
    j["size"] = p->group.size();
    auto samples = json::array();
    for (const auto& [lhs, rhs] : p->samples) samples.push_back({{"lhs", to_utf8(lhs)}, {"rhs", to_utf8(rhs)}});
    j["samples"] = std::move(samples);
    return j;
  }

  void decision(const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const std::exception&) {
      return fail(res, 400, "body is not valid JSON");
    }
    if (!body.is_object() || !body.contains("verdict") || !body["verdict"].is_string()) {
      return fail(res, 400, "verdict is required");
    }
    Verdict verdict;
    std::optional<Direction> direction;
    try {
      verdict = parse_verdict(body["verdict"].get<std::string>());
      if (body.contains("direction") && !body["direction"].is_null()) {
        if (!body["direction"].is_string()) return fail(res, 400, "direction must be a string");
        direction = parse_direction(body["direction"].get<std::string>());
      }
    } catch (const std::invalid_argument& e) {
      return fail(res, 400, e.what());
    }
    if (verdict == Verdict::Approved && !direction) return fail(res, 400, "an approval needs a direction");
    if (verdict == Verdict::Rejected && direction) return fail(res, 400, "a rejection takes no direction");

    const PendingGroup* p = session.current();
    if (!p) return fail(res, 409, "the session is complete");
    if (body.contains("seq")) {
      if (!body["seq"].is_number_unsigned() || body["seq"].get<std::uint64_t>() != p->seq) {
        return fail(res, 409, "stale decision: the pending group is seq " + std::to_string(p->seq));
      }
    }
    const DecisionRecord& r = session.decide(verdict, direction);
    if (options.log) {
      try {
        options.log->append(r);
      } catch (const std::exception& e) {
        return fail(res, 500, e.what());
      }
    }
    reply(res, 200, json::parse(to_json_line(r)));
  }

  json metrics_json() {
    const auto p = session.progress();
    json j;
    j["decisions"] = p.decisions;
    j["approved"] = p.approved;
    j["rejected"] = p.decisions - p.approved;
    j["cells_rewritten"] = p.cells_rewritten;
    j["labels"] = options.labels.has_value();
    if (options.labels) {
      const Evaluation e = evaluate_session(session, *options.labels);
      j["tp"] = e.counts.tp;
      j["fp"] = e.counts.fp;
      j["fn"] = e.counts.fn;
      j["tn"] = e.counts.tn;
      j["precision"] = optional_number(e.precision);
      j["recall"] = optional_number(e.recall);
      j["mcc"] = optional_number(e.mcc);
    }
    return j;
  }

  json log_json() {
    auto out = json::array();
    for (const auto& d : session.decisions()) out.push_back(json::parse(to_json_line(d)));
    return {{"decisions", std::move(out)}};
  }

  // Runs a handler under the session lock, turning exceptions into 500s.
  template <typename F>
  httplib::Server::Handler locked(F f) {
    return [this, f](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex);
      try {
        f(req, res);
      } catch (const std::exception& e) {
        fail(res, 500, e.what());
      }
    };
  }

  void routes() {
    http.Get("/api/session", locked([this](const auto&, auto& res) { reply(res, 200, session_json()); }));
    http.Get("/api/group/next", locked([this](const auto&, auto& res) { reply(res, 200, next_json()); }));
    http.Post("/api/group/decision", locked([this](const auto& req, auto& res) { decision(req, res); }));
    http.Get("/api/metrics", locked([this](const auto&, auto& res) { reply(res, 200, metrics_json()); }));
    http.Get("/api/log", locked([this](const auto&, auto& res) { reply(res, 200, log_json()); }));
    if (options.ui_dir && !http.set_mount_point("/", *options.ui_dir)) {
      throw std::runtime_error("cannot serve " + *options.ui_dir);
    }
  }
};

ReviewServer::ReviewServer(Session& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {
  impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void ReviewServer::run() { impl_->http.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

}  // namespace goldrec
