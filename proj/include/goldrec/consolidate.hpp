#pragma once

// Golden records by majority consensus, and evaluation of a standardised
// table against labelled value pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goldrec/candidates.hpp"

namespace goldrec {

// Most frequent value of the cluster's column; nullopt on a tie for first.
std::optional<Text> majority_consensus(const ClusterTable& table, std::size_t column, std::uint32_t cluster);

enum class PairLabel { Variant, Conflict };

struct LabeledPair {
  Text value_a;
  Text value_b;
  PairLabel label;
};

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// nullopt when the denominator is zero.
std::optional<double> precision(const ConfusionCounts& c);
std::optional<double> recall(const ConfusionCounts& c);
std::optional<double> mcc(const ConfusionCounts& c);

struct Evaluation {
  ConfusionCounts counts;
  std::optional<double> precision, recall, mcc;
};

// `before` and `after` are the same table before and after standardisation.
// A pair became identical if, in every cluster where both values occurred
// originally, all cells that held either value now hold one string. Throws
// std::invalid_argument for a pair that never shared a cluster.
Evaluation evaluate(const std::vector<LabeledPair>& pairs, const ClusterTable& before, const ClusterTable& after,
                    std::size_t column, Normalization normalization = Normalization::None);

// Uniform sample without replacement of unordered, non-identical value pairs
// that share a cluster, each returned with value_a < value_b. Throws
// std::invalid_argument when n exceeds the population.
std::vector<std::pair<Text, Text>> sample_pairs(const ClusterTable& table, std::size_t column, std::size_t n,
                                                std::uint64_t seed);

// Labels file rows: value_a, value_b, label (variant | conflict). A header
// row whose third field is "label" is skipped.
std::vector<LabeledPair> read_labels(const std::string& path, char delimiter = ',');

// counts, then precision / recall / mcc to 4 decimals or "undefined".
std::string metrics_report(const Evaluation& e);

}  // namespace goldrec
