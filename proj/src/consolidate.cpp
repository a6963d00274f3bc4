#include "goldrec/consolidate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "goldrec/csv.hpp"

namespace goldrec {

std::optional<Text> majority_consensus(const ClusterTable& table, std::size_t column, std::uint32_t cluster) {
  std::map<Text, std::size_t> freq;
  for (std::uint32_t row : table.cluster_rows(cluster)) ++freq[table.cell(row, column)];
  const Text* best = nullptr;
  std::size_t top = 0;
  bool tied = false;
  for (const auto& [value, n] : freq) {
    if (n > top) {
      best = &value;
      top = n;
      tied = false;
    } else if (n == top) {
      tied = true;
    }
  }
  if (!best || tied) return std::nullopt;
  return *best;
}

std::optional<double> precision(const ConfusionCounts& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> mcc(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double tn = static_cast<double>(c.tn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0) return std::nullopt;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

namespace {

Text fold(const Text& s, Normalization mode) {
  Text out = s;
  if (mode == Normalization::Lowercase) {
    for (auto& c : out) {
      if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    }
  }
  return out;
}

}  // namespace

Evaluation evaluate(const std::vector<LabeledPair>& pairs, const ClusterTable& before, const ClusterTable& after,
                    std::size_t column, Normalization normalization) {
  if (before.row_count() != after.row_count()) throw std::invalid_argument("tables differ in shape");
  Evaluation e;
  for (const auto& p : pairs) {
    bool shared = false;
    bool identical = true;
    for (std::uint32_t c = 0; c < before.cluster_count(); ++c) {
      std::vector<std::uint32_t> rows;
      bool has_a = false;
      bool has_b = false;
      for (std::uint32_t row : before.cluster_rows(c)) {
        const Text& v = before.cell(row, column);
        if (v == p.value_a) has_a = true;
        if (v == p.value_b) has_b = true;
        if (v == p.value_a || v == p.value_b) rows.push_back(row);
      }
      if (!has_a || !has_b) continue;
      shared = true;
      const Text first = fold(after.cell(rows.front(), column), normalization);
      for (std::uint32_t row : rows) {
        if (fold(after.cell(row, column), normalization) != first) identical = false;
      }
    }
    if (!shared) throw std::invalid_argument("labelled pair never shared a cluster: " + to_utf8(p.value_a));
    if (p.label == PairLabel::Variant) {
      ++(identical ? e.counts.tp : e.counts.fn);
    } else {
      ++(identical ? e.counts.fp : e.counts.tn);
    }
  }
  e.precision = precision(e.counts);
  e.recall = recall(e.counts);
  e.mcc = mcc(e.counts);
  return e;
}

std::vector<std::pair<Text, Text>> sample_pairs(const ClusterTable& table, std::size_t column, std::size_t n,
                                                std::uint64_t seed) {
  std::set<std::pair<Text, Text>> population;
  for (std::uint32_t c = 0; c < table.cluster_count(); ++c) {
    std::set<Text> values;
    for (std::uint32_t row : table.cluster_rows(c)) values.insert(table.cell(row, column));
    for (auto a = values.begin(); a != values.end(); ++a) {
      for (auto b = std::next(a); b != values.end(); ++b) population.insert({*a, *b});
    }
  }
  if (n > population.size()) throw std::invalid_argument("sample larger than the pair population");
  std::vector<std::pair<Text, Text>> out;
  std::mt19937_64 rng(seed);
  std::sample(population.begin(), population.end(), std::back_inserter(out), n, rng);
  return out;
}

std::vector<LabeledPair> read_labels(const std::string& path, char delimiter) {
  std::vector<LabeledPair> out;
  const auto rows = csv::read_file(path, delimiter);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != 3) throw std::runtime_error("labels: expected 3 fields on record " + std::to_string(k + 1));
    if (k == 0 && r[2] == "label") continue;
    PairLabel label;
    if (r[2] == "variant") {
      label = PairLabel::Variant;
    } else if (r[2] == "conflict") {
      label = PairLabel::Conflict;
    } else {
      throw std::runtime_error("labels: unknown label '" + r[2] + "'");
    }
    out.push_back({from_utf8(r[0]), from_utf8(r[1]), label});
  }
  return out;
}

std::string metrics_report(const Evaluation& e) {
  auto fmt = [](const std::optional<double>& v) -> std::string {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
  };
  std::string out;
  out += "tp=" + std::to_string(e.counts.tp) + " fp=" + std::to_string(e.counts.fp) +
         " fn=" + std::to_string(e.counts.fn) + " tn=" + std::to_string(e.counts.tn) + "\n";
  out += "precision=" + fmt(e.precision) + "\n";
  out += "recall=" + fmt(e.recall) + "\n";
  out += "mcc=" + fmt(e.mcc) + "\n";
  return out;
}

}  // namespace goldrec
