#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "goldrec/graph.hpp"

using namespace goldrec;

namespace {

Text T(const char* s) { return from_utf8(s); }

bool contains(const std::vector<PositionFunction>& v, const PositionFunction& pf) {
  return std::find(v.begin(), v.end(), pf) != v.end();
}

}  // namespace

TEST_CASE("position index") {
  const auto idx = build_position_index(T("Lee, Mary"));
  CHECK(contains(idx.at[6], PositionFunction::match_pos(Term::uppercase(), 2, Dir::Begin)));
  CHECK(contains(idx.at[6], PositionFunction::match_pos(Term::uppercase(), -1, Dir::Begin)));

  const auto empty = build_position_index(T(""));
  REQUIRE(empty.at.size() == 2);
  CHECK(empty.at[1] == std::vector<PositionFunction>{PositionFunction::const_pos(1),
                                                     PositionFunction::const_pos(-1)});

  const auto ab = build_position_index(T("ab"));
  CHECK(contains(ab.at[2], PositionFunction::const_pos(2)));
  CHECK(contains(ab.at[2], PositionFunction::const_pos(-2)));

  // Every position function lands where it is indexed.
  const Text s = T("9 St, 02141 WI");
  const auto full = build_position_index(s);
  for (std::size_t x = 1; x < full.at.size(); ++x) {
    for (const auto& pf : full.at[x]) CHECK(eval_position(pf, s) == static_cast<int>(x));
  }
}

TEST_CASE("constant scores") {
  CHECK(score_constant(4, 16) == doctest::Approx(1.0));
  CHECK(score_constant(0, 5) == 0.0);
  CHECK(score_constant(9, 9) > score_constant(9, 900));
  CHECK(score_constant(9, 9) == doctest::Approx(3.0));
  CHECK(score_constant(9, 900) == doctest::Approx(0.3));
  CHECK_THROWS_AS(score_constant(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(score_constant(3, 2), std::invalid_argument);
  CHECK(score_constant(4, 16, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("frequency table counts values, not occurrences") {
  const std::vector<Text> values{T("aaa"), T("ab"), T("b")};
  FrequencyTable ft(values, 3);
  CHECK(ft.count(T("a")) == 2);
  CHECK(ft.count(T("b")) == 2);
  CHECK(ft.count(T("aa")) == 1);
  CHECK(ft.count(T("abc")) == 0);
  CHECK(ft.count(T("aaaa")) == 0);
}

TEST_CASE("graph for Lee, Mary -> M. Lee") {
  Vocabulary vocab;
  const auto g = build_graph(T("Lee, Mary"), T("M. Lee"), ConstantScorer::keep_all(), vocab);
  CHECK(g.edges().size() == 21);
  const auto f1 = vocab.find(StringFunction::substr(
      PositionFunction::match_pos(Term::uppercase(), 1, Dir::Begin),
      PositionFunction::match_pos(Term::lowercase(), 1, Dir::End)));
  REQUIRE(f1);
  CHECK(g.has_label(4, 7, *f1));
  const auto f2 = vocab.find(StringFunction::substr(
      PositionFunction::match_pos(Term::whitespace(), 1, Dir::End),
      PositionFunction::match_pos(Term::uppercase(), -1, Dir::End)));
  REQUIRE(f2);
  CHECK(g.has_label(1, 2, *f2));
  const auto f3 = vocab.find(StringFunction::constant(T(". ")));
  REQUIRE(f3);
  CHECK(g.has_label(2, 4, *f3));
  const auto whole = vocab.find(StringFunction::constant(T("M. Lee")));
  REQUIRE(whole);
  CHECK(g.has_label(1, 7, *whole));
}

TEST_CASE("affix labels on Street -> St") {
  Vocabulary vocab;
  const auto g = build_graph(T("Street"), T("St"), ConstantScorer::keep_all(), vocab);
  const auto pre = vocab.find(StringFunction::prefix(Term::lowercase(), 1));
  REQUIRE(pre);
  CHECK(g.has_label(2, 3, *pre));

  // Only the longest prefix edge per start carries the label.
  Vocabulary v2;
  const auto g2 = build_graph(T("Avenue"), T("Ave"), ConstantScorer::keep_all(), v2);
  const auto pre2 = v2.find(StringFunction::prefix(Term::lowercase(), 1));
  REQUIRE(pre2);
  CHECK(g2.has_label(2, 4, *pre2));
  CHECK_FALSE(g2.has_label(2, 3, *pre2));
}

TEST_CASE("unrelated strings only share the constant") {
  Vocabulary vocab;
  const auto g = build_graph(T("x"), T("y"), ConstantScorer::keep_all(), vocab);
  REQUIRE(g.edges().size() == 1);
  REQUIRE(g.edge(1, 2).labels.size() == 1);
  CHECK(vocab.text(g.edge(1, 2).labels[0]) == "ConstantStr(\"y\")");
  CHECK_THROWS_AS(build_graph(T("x"), T(""), ConstantScorer::keep_all(), vocab), std::invalid_argument);
}

TEST_CASE("constant pruning keeps the whole-target edge") {
  const std::vector<Text> values{T("Main St"), T("Main Street"), T("Elm St"), T("Elm Street")};
  FrequencyTable local(values, 12);
  FrequencyTable global(values, 12);
  ConstantScorer scorer(&local, &global);
  Vocabulary vocab;
  const auto g = build_graph(T("Main Street"), T("Main St"), scorer, vocab);
  const auto whole = vocab.find(StringFunction::constant(T("Main St")));
  REQUIRE(whole);
  CHECK(g.has_label(1, g.sink(), *whole));
}

TEST_CASE("label soundness on random inputs") {
  std::mt19937 rng(11);
  const Text alphabet = T("aA1 .b");
  auto random_text = [&](int lo, int hi) {
    Text out;
    const int len = std::uniform_int_distribution<int>(lo, hi)(rng);
    for (int i = 0; i < len; ++i) out.push_back(alphabet[rng() % alphabet.size()]);
    return out;
  };
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<Text> values{random_text(0, 7), random_text(1, 7), random_text(1, 7)};
    FrequencyTable ft(values, 4);
    const bool scored = trial % 2 == 0;
    const ConstantScorer scorer = scored ? ConstantScorer(&ft, &ft) : ConstantScorer::keep_all();
    Vocabulary vocab;
    const auto g = build_graph(values[0], values[1], scorer, vocab);
    const Text& t = values[1];
    CHECK(g.edges().size() == t.size() * (t.size() + 1) / 2);
    for (const auto& e : g.edges()) {
      const Text piece = t.substr(e.from - 1, e.to - e.from);
      for (LabelId id : e.labels) {
        const auto outs = eval_string_function(vocab.function(id), values[0]);
        REQUIRE(std::binary_search(outs.begin(), outs.end(), piece));
      }
    }
    const auto whole = vocab.find(StringFunction::constant(t));
    REQUIRE(whole);
    CHECK(g.has_label(1, g.sink(), *whole));
  }
}
