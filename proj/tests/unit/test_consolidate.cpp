#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "goldrec/consolidate.hpp"
#include "goldrec/csv.hpp"

using namespace goldrec;

namespace {

Text T(const char* s) { return from_utf8(s); }

ClusterTable one_column(const std::vector<std::pair<const char*, const char*>>& rows) {
  ClusterTable table({"v"});
  for (const auto& [cluster, value] : rows) table.add_row(cluster, {T(value)});
  return table;
}

}  // namespace

TEST_CASE("majority consensus") {
  const auto t = one_column({{"x", "a"}, {"x", "a"}, {"x", "b"}, {"y", "a"}, {"y", "b"}, {"z", "a"}});
  CHECK(majority_consensus(t, 0, 0) == T("a"));
  CHECK_FALSE(majority_consensus(t, 0, 1));
  CHECK(majority_consensus(t, 0, 2) == T("a"));
}

TEST_CASE("metrics on hand-computed confusion counts") {
  const ConfusionCounts perfect{1, 0, 0, 1};
  CHECK(*precision(perfect) == 1.0);
  CHECK(*recall(perfect) == 1.0);
  CHECK(*mcc(perfect) == 1.0);

  const ConfusionCounts inverted{0, 1, 1, 0};
  CHECK(std::abs(*mcc(inverted) - -1.0) <= 1e-9);
  CHECK_FALSE(precision(inverted).value_or(0.0) > 0.0);

  const ConfusionCounts mixed{2, 1, 2, 5};
  CHECK(std::abs(*precision(mixed) - 2.0 / 3.0) <= 1e-9);
  CHECK(std::abs(*recall(mixed) - 0.5) <= 1e-9);
  CHECK(std::abs(*mcc(mixed) - 8.0 / std::sqrt(3.0 * 4 * 6 * 7)) <= 1e-9);
  CHECK(std::abs(*mcc(mixed) - 0.3563) <= 1e-4);

  const ConfusionCounts empty{};
  CHECK_FALSE(precision(empty));
  CHECK_FALSE(recall(empty));
  CHECK_FALSE(mcc(empty));
  CHECK_FALSE(mcc(ConfusionCounts{3, 0, 0, 0}));
}

TEST_CASE("evaluate classifies pairs by final equality") {
  const auto before = one_column({{"x", "Mary Lee"}, {"x", "Lee, Mary"}, {"y", "5 St"}, {"y", "3 Ave"}, {"z", "q"}});
  auto after = before;
  after.set_cell(1, 0, T("Mary Lee"));
  const std::vector<LabeledPair> pairs = {
      {T("Mary Lee"), T("Lee, Mary"), PairLabel::Variant},
      {T("5 St"), T("3 Ave"), PairLabel::Conflict},
  };
  const auto e = evaluate(pairs, before, after, 0);
  CHECK(e.counts.tp == 1);
  CHECK(e.counts.tn == 1);
  CHECK(e.counts.fp == 0);
  CHECK(e.counts.fn == 0);
  CHECK(*e.mcc == 1.0);
  CHECK(metrics_report(e) == "tp=1 fp=0 fn=0 tn=1\nprecision=1.0000\nrecall=1.0000\nmcc=1.0000\n");
  CHECK_THROWS_AS(evaluate({{T("q"), T("5 St"), PairLabel::Variant}}, before, after, 0), std::invalid_argument);

  // Case folding makes "MARY LEE" equal to "Mary Lee".
  after.set_cell(1, 0, T("MARY LEE"));
  CHECK(evaluate(pairs, before, after, 0).counts.fn == 1);
  CHECK(evaluate(pairs, before, after, 0, Normalization::Lowercase).counts.tp == 1);
}

TEST_CASE("metrics report prints undefined") {
  Evaluation e;
  e.counts = {0, 0, 3, 0};
  e.precision = precision(e.counts);
  e.recall = recall(e.counts);
  e.mcc = mcc(e.counts);
  CHECK(metrics_report(e) == "tp=0 fp=0 fn=3 tn=0\nprecision=undefined\nrecall=0.0000\nmcc=undefined\n");
}

TEST_CASE("pair sampling") {
  ClusterTable table({"v"});
  for (int c = 0; c < 40; ++c) {
    for (int k = 0; k < 5; ++k) table.add_row(std::to_string(c), {T(("c" + std::to_string(c) + "v" + std::to_string(k)).c_str())});
  }
  // 40 clusters x C(5,2) pairs.
  const auto all = sample_pairs(table, 0, 400, 1);
  CHECK(all.size() == 400);
  CHECK(std::set<std::pair<Text, Text>>(all.begin(), all.end()).size() == 400);
  for (const auto& [a, b] : all) CHECK(a < b);
  CHECK(sample_pairs(table, 0, 50, 9) == sample_pairs(table, 0, 50, 9));
  CHECK(sample_pairs(table, 0, 50, 9) != sample_pairs(table, 0, 50, 10));
  CHECK_THROWS_AS(sample_pairs(table, 0, 401, 1), std::invalid_argument);
}

TEST_CASE("csv round trip") {
  const std::string text = "a,\"b,c\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",,x\nlast";
  const auto rows = csv::parse(text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"a", "b,c", "say \"hi\""});
  CHECK(rows[1] == csv::Row{"multi\nline", "", "x"});
  CHECK(rows[2] == csv::Row{"last"});
  std::ostringstream out;
  for (const auto& r : rows) csv::write_row(out, r);
  CHECK(csv::parse(out.str()) == rows);
  CHECK(csv::parse("a;b\n", ';') == std::vector<csv::Row>{{"a", "b"}});
  CHECK_THROWS_AS(csv::parse("a\"b\n"), std::runtime_error);
  CHECK_THROWS_AS(csv::parse("\"open\n"), std::runtime_error);
  CHECK_THROWS_AS(csv::parse("\"x\"y\n"), std::runtime_error);
}

TEST_CASE("labels file") {
  const auto path = std::filesystem::temp_directory_path() / "goldrec_labels_test.csv";
  {
    std::ofstream f(path);
    f << "value_a,value_b,label\n\"Lee, Mary\",Mary Lee,variant\n5 St,3 Ave,conflict\n";
  }
  const auto labels = read_labels(path.string());
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].value_a == T("Lee, Mary"));
  CHECK(labels[1].label == PairLabel::Conflict);
  {
    std::ofstream f(path);
    f << "a,b,maybe\n";
  }
  CHECK_THROWS(read_labels(path.string()));
  std::filesystem::remove(path);
}
