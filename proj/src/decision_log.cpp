#include <ctime>
#include <fstream>
#include <stdexcept>

#include "goldrec/pipeline.hpp"
#include "json.hpp"

namespace goldrec {

using nlohmann::json;

std::string to_json_line(const DecisionRecord& r) {
  // ordered_json keeps the field order fixed in the file.
  nlohmann::ordered_json j;
  j["seq"] = r.seq;
  j["column"] = r.column;
  j["group_key"] = r.group_key;
  j["size"] = r.size;
  auto samples = nlohmann::ordered_json::array();
  for (const auto& [lhs, rhs] : r.samples) samples.push_back({to_utf8(lhs), to_utf8(rhs)});
  j["samples"] = std::move(samples);
  j["verdict"] = to_string(r.verdict);
  if (r.direction) j["direction"] = to_string(*r.direction);
  j["summary"] = {{"cells_rewritten", r.cells_rewritten},
                  {"replacements_removed", r.replacements_removed},
                  {"replacements_rerouted", r.replacements_rerouted}};
  j["timestamp"] = r.timestamp;
  return j.dump();
}

DecisionRecord parse_decision(std::string_view line) {
  const json j = json::parse(line);
  DecisionRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.column = j.at("column").get<std::string>();
  r.group_key = j.at("group_key").get<std::string>();
  r.size = j.value("size", std::size_t{0});
  if (j.contains("samples")) {
    for (const auto& s : j.at("samples")) {
      r.samples.emplace_back(from_utf8(s.at(0).get<std::string>()), from_utf8(s.at(1).get<std::string>()));
    }
  }
  r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  if (j.contains("direction")) r.direction = parse_direction(j.at("direction").get<std::string>());
  if (r.verdict == Verdict::Approved && !r.direction) throw std::invalid_argument("approval without a direction");
  if (r.verdict == Verdict::Rejected && r.direction) throw std::invalid_argument("rejection with a direction");
  if (j.contains("summary")) {
    const auto& s = j.at("summary");
    r.cells_rewritten = s.value("cells_rewritten", std::size_t{0});
    r.replacements_removed = s.value("replacements_removed", std::size_t{0});
    r.replacements_rerouted = s.value("replacements_rerouted", std::size_t{0});
  }
  r.timestamp = j.value("timestamp", std::string{});
  return r;
}

std::vector<DecisionRecord> read_decision_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open decision log " + path);
  std::vector<DecisionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_decision(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (out.size() > 1 && out.back().seq <= out[out.size() - 2].seq) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": sequence numbers must increase");
    }
  }
  return out;
}

struct DecisionLogWriter::Impl {
  std::ofstream out;
};

DecisionLogWriter::DecisionLogWriter(const std::string& path) : impl_(std::make_unique<Impl>()) {
  impl_->out.open(path, std::ios::app | std::ios::binary);
  if (!impl_->out) throw std::runtime_error("cannot open decision log " + path + " for writing");
}

DecisionLogWriter::~DecisionLogWriter() = default;

void DecisionLogWriter::append(const DecisionRecord& r) {
  impl_->out << to_json_line(r) << '\n';
  impl_->out.flush();
  if (!impl_->out) throw std::runtime_error("failed to write the decision log");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace goldrec
