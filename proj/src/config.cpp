#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "goldrec/pipeline.hpp"

namespace goldrec {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("config: " + key + " expects a number, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: " + key + " expects true or false, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

char parse_delimiter(const std::string& value) {
  if (value == "tab" || value == "\\t") return '\t';
  if (value.size() != 1 || value == "\"") throw std::invalid_argument("config: delimiter must be one character");
  return value[0];
}

}  // namespace

void SessionConfig::validate() const {
  if (key_column.empty()) throw std::invalid_argument("config: key_column is required");
  if (budget < 1) throw std::invalid_argument("config: budget must be at least 1");
  if (max_path_len < 1) throw std::invalid_argument("config: max_path_len must be at least 1");
  if (min_group_size < 1) throw std::invalid_argument("config: min_group_size must be at least 1");
  if (port < 0 || port > 65535) throw std::invalid_argument("config: port out of range");
  for (const auto& t : target_columns) {
    if (t == key_column) throw std::invalid_argument("config: the key column cannot be a target");
  }
}

GroupingConfig SessionConfig::grouping() const {
  GroupingConfig g;
  g.max_path_len = max_path_len;
  g.min_group_size = min_group_size;
  g.constant_score_exponent = constant_score_exponent;
  g.max_value_len = max_value_len;
  g.sample_threshold = sample_threshold;
  g.sample_size = sample_size;
  g.seed = seed;
  return g;
}

CandidateOptions SessionConfig::candidates() const { return {token_level, normalization}; }

SessionConfig parse_config(std::string_view text, const std::string& base_dir) {
  SessionConfig c;
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "input") {
      c.input = value;
    } else if (key == "key_column") {
      c.key_column = value;
    } else if (key == "target_columns") {
      c.target_columns = parse_list(value);
    } else if (key == "delimiter") {
      c.delimiter = parse_delimiter(value);
    } else if (key == "budget") {
      c.budget = parse_number<std::size_t>(key, value);
    } else if (key == "global_budget") {
      c.global_budget = parse_number<std::size_t>(key, value);
    } else if (key == "max_path_len") {
      c.max_path_len = parse_number<int>(key, value);
    } else if (key == "token_level") {
      c.token_level = parse_bool(key, value);
    } else if (key == "min_group_size") {
      c.min_group_size = parse_number<std::size_t>(key, value);
    } else if (key == "constant_score_exponent") {
      c.constant_score_exponent = parse_number<double>(key, value);
    } else if (key == "max_value_len") {
      c.max_value_len = parse_number<std::size_t>(key, value);
    } else if (key == "sample_threshold") {
      c.sample_threshold = parse_number<std::size_t>(key, value);
    } else if (key == "sample_size") {
      c.sample_size = parse_number<std::size_t>(key, value);
    } else if (key == "normalization") {
      if (value == "none") {
        c.normalization = Normalization::None;
      } else if (value == "lowercase") {
        c.normalization = Normalization::Lowercase;
      } else {
        throw std::invalid_argument("config: normalization must be none or lowercase");
      }
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "port") {
      c.port = parse_number<int>(key, value);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!c.input.empty() && !base_dir.empty() && std::filesystem::path(c.input).is_relative()) {
    c.input = (std::filesystem::path(base_dir) / c.input).string();
  }
  return c;
}

SessionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace goldrec
