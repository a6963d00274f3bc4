#pragma once

// JSON review API over a Session. State-changing requests are serialised
// with a single lock.

#include <memory>
#include <optional>
#include <string>

#include "goldrec/pipeline.hpp"

namespace goldrec {

struct ServerOptions {
  DecisionLogWriter* log = nullptr;     // decisions are appended here
  std::optional<std::string> labels;    // enables metrics in /api/metrics
  std::optional<std::string> ui_dir;    // static files served at /
};

class ReviewServer {
 public:
  ReviewServer(Session& session, ServerOptions options = {});
  ~ReviewServer();

  // Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace goldrec
