#include <random>

#include "doctest.h"
#include "goldrec/dsl.hpp"

using namespace goldrec;

namespace {

Text T(const char* s) { return from_utf8(s); }

// Tries every split of t, no memoisation.
bool split_check(const Program& p, std::size_t f, TextView s, TextView rest) {
  if (f == p.functions.size()) return rest.empty();
  for (std::size_t len = 0; len <= rest.size(); ++len) {
    const Text piece(rest.substr(0, len));
    for (const auto& out : eval_string_function(p.functions[f], s)) {
      if (out == piece && split_check(p, f + 1, s, rest.substr(len))) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("position functions on Lee, Mary") {
  const Text s = T("Lee, Mary");
  CHECK(eval_position(PositionFunction::const_pos(2), s) == 2);
  CHECK(eval_position(PositionFunction::const_pos(-5), s) == 6);
  CHECK(eval_position(PositionFunction::match_pos(Term::uppercase(), 2, Dir::Begin), s) == 6);
  CHECK(eval_position(PositionFunction::match_pos(Term::uppercase(), 2, Dir::End), s) == 7);
  CHECK(eval_position(PositionFunction::match_pos(Term::uppercase(), -1, Dir::Begin), s) == 6);
  CHECK_FALSE(eval_position(PositionFunction::match_pos(Term::digits(), 1, Dir::Begin), T("abc")));
  CHECK_FALSE(eval_position(PositionFunction::const_pos(11), s));
  CHECK(eval_position(PositionFunction::const_pos(-10), s) == 1);
  CHECK_FALSE(eval_position(PositionFunction::const_pos(-11), s));
}

TEST_CASE("constant position twins agree") {
  const Text s = T("ab1 X");
  const int n = static_cast<int>(s.size());
  for (int k = 1; k <= n + 1; ++k) {
    CHECK(eval_position(PositionFunction::const_pos(k), s) ==
          eval_position(PositionFunction::const_pos(k - n - 2), s));
  }
}

TEST_CASE("string functions") {
  const Text s = T("Lee, Mary");
  CHECK(eval_string_function(StringFunction::constant(T("MIT")), s) == std::vector<Text>{T("MIT")});
  const auto f1 = StringFunction::substr(PositionFunction::match_pos(Term::uppercase(), 1, Dir::Begin),
                                         PositionFunction::match_pos(Term::lowercase(), 1, Dir::End));
  CHECK(eval_string_function(f1, s) == std::vector<Text>{T("Lee")});
  CHECK(eval_string_function(StringFunction::prefix(Term::lowercase(), 1), T("Street")) ==
        std::vector<Text>{T("t"), T("tr"), T("tre"), T("tree"), T("treet")});
  CHECK(eval_string_function(StringFunction::suffix(Term::lowercase(), -1), T("ab cd")) ==
        std::vector<Text>{T("cd"), T("d")});
  const auto backwards = StringFunction::substr(PositionFunction::const_pos(3), PositionFunction::const_pos(2));
  CHECK(eval_string_function(backwards, s).empty());
  CHECK(eval_string_function(StringFunction::prefix(Term::digits(), 1), s).empty());
}

TEST_CASE("consistency of the M. Lee program") {
  const auto f1 = StringFunction::substr(PositionFunction::match_pos(Term::uppercase(), 1, Dir::Begin),
                                         PositionFunction::match_pos(Term::lowercase(), 1, Dir::End));
  const auto f2 = StringFunction::substr(PositionFunction::match_pos(Term::whitespace(), 1, Dir::End),
                                         PositionFunction::match_pos(Term::uppercase(), -1, Dir::End));
  const auto f3 = StringFunction::constant(T(". "));
  const Program p{{f2, f3, f1}};
  CHECK(is_consistent(p, T("Lee, Mary"), T("M. Lee")));
  CHECK(evaluate_deterministic(p, T("Lee, Mary")) == T("M. Lee"));
  CHECK(is_consistent(p, T("Smith, James"), T("J. Smith")));
  CHECK_FALSE(is_consistent(p, T("Lee, Mary"), T("M. Le")));
  CHECK(is_consistent(Program{{StringFunction::constant(T("M. Lee"))}}, T("x"), T("M. Lee")));
  CHECK(is_consistent(Program{}, T("x"), T("")));
  CHECK_FALSE(is_consistent(Program{}, T("x"), T("y")));
}

TEST_CASE("affix program shared by Street and Avenue") {
  const Program p{{StringFunction::substr(PositionFunction::match_pos(Term::uppercase(), 1, Dir::Begin),
                                          PositionFunction::match_pos(Term::uppercase(), 1, Dir::End)),
                   StringFunction::prefix(Term::lowercase(), 1)}};
  CHECK(is_consistent(p, T("Street"), T("St")));
  CHECK(is_consistent(p, T("Avenue"), T("Ave")));
  CHECK_FALSE(is_consistent(p, T("Avenue"), T("Avx")));
}

TEST_CASE("dynamic-programming consistency agrees with exhaustive splitting") {
  std::mt19937 rng(7);
  const Text alphabet = T("aB1 ");
  auto random_text = [&](int max_len) {
    Text out;
    const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
    for (int i = 0; i < len; ++i) out.push_back(alphabet[rng() % alphabet.size()]);
    return out;
  };
  auto random_pos = [&]() {
    if (rng() % 2 == 0) {
      int k = std::uniform_int_distribution<int>(-9, 9)(rng);
      return PositionFunction::const_pos(k == 0 ? 1 : k);
    }
    const auto& terms = regex_terms();
    int k = std::uniform_int_distribution<int>(-2, 2)(rng);
    return PositionFunction::match_pos(terms[rng() % terms.size()], k == 0 ? 1 : k,
                                       rng() % 2 ? Dir::Begin : Dir::End);
  };
  auto random_function = [&]() {
    switch (rng() % 4) {
      case 0: return StringFunction::constant(random_text(2));
      case 1: return StringFunction::prefix(regex_terms()[rng() % 4], rng() % 2 ? 1 : -1);
      case 2: return StringFunction::suffix(regex_terms()[rng() % 4], rng() % 2 ? 1 : -1);
      default: return StringFunction::substr(random_pos(), random_pos());
    }
  };
  int agreed_true = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const Text s = random_text(8);
    const Text t = random_text(8);
    Program p;
    const int len = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < len; ++i) p.functions.push_back(random_function());
    const bool expected = split_check(p, 0, s, t);
    REQUIRE(is_consistent(p, s, t) == expected);
    agreed_true += expected;
  }
  CHECK(agreed_true > 0);
}

TEST_CASE("canonical text") {
  CHECK(canonical_text(Program{{StringFunction::constant(T("."))}}) == "ConstantStr(\".\")");
  CHECK(canonical_text(StringFunction::constant(T("a\"b\\"))) == "ConstantStr(\"a\\\"b\\\\\")");
  const auto a = StringFunction::substr(PositionFunction::match_pos(Term::uppercase(), 1, Dir::Begin),
                                        PositionFunction::const_pos(-1));
  const auto b = StringFunction::substr(PositionFunction::match_pos(Term::uppercase(), 2, Dir::Begin),
                                        PositionFunction::const_pos(-1));
  CHECK(canonical_text(a) == "SubStr(MatchPos(TC,1,B),ConstPos(-1))");
  CHECK(canonical_text(a) != canonical_text(b));
  CHECK(canonical_text(Program{{a, b}}) == canonical_text(a) + "⊕" + canonical_text(b));
  CHECK(canonical_text(PositionFunction::match_pos(Term::constant(T("St")), 1, Dir::End)) ==
        "MatchPos(Tstr(\"St\"),1,E)");
}
