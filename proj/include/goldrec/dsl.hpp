#pragma once

// String-transformation language: terms, position functions, string
// functions and programs, with evaluation and a canonical textual form.
//
// Positions are 1-based: a string s has positions 1 .. |s|+1 and the
// substring s[x, y) covers characters x .. y-1.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goldrec/text.hpp"

namespace goldrec {

enum class TermKind : std::uint8_t {
  Digits,          // [0-9]+
  Lowercase,       // [a-z]+
  Uppercase,       // [A-Z]+
  Whitespace,      // \s+
  ConstantString,  // exactly `text`
  SingleChar,      // exactly one character, structure mapping only
};

struct Term {
  TermKind kind = TermKind::Digits;
  Text text;  // literal for ConstantString, the character for SingleChar

  static Term digits() { return {TermKind::Digits, {}}; }
  static Term lowercase() { return {TermKind::Lowercase, {}}; }
  static Term uppercase() { return {TermKind::Uppercase, {}}; }
  static Term whitespace() { return {TermKind::Whitespace, {}}; }
  static Term constant(Text literal) { return {TermKind::ConstantString, std::move(literal)}; }
  static Term single(char32_t c) { return {TermKind::SingleChar, Text(1, c)}; }

  bool is_regex() const { return kind <= TermKind::Whitespace; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

// The four regex-based terms in a fixed order.
const std::vector<Term>& regex_terms();

// Regex term for a character class; nullopt for CharClass::Other.
std::optional<Term> regex_term_for(CharClass c);

struct Match {
  int begin;  // 1-based, inclusive
  int end;    // 1-based, exclusive
  friend bool operator==(const Match&, const Match&) = default;
};

// All matches of `term` in `s`, left to right. Regex terms yield maximal
// runs; constant strings yield non-overlapping occurrences.
std::vector<Match> term_matches(const Term& term, TextView s);

enum class Dir : std::uint8_t { Begin, End };

struct PositionFunction {
  enum class Kind : std::uint8_t { ConstPos, MatchPos };
  Kind kind = Kind::ConstPos;
  int k = 1;  // never 0; negative counts from the back
  Term term;  // MatchPos only
  Dir dir = Dir::Begin;

  static PositionFunction const_pos(int k) { return {Kind::ConstPos, k, {}, Dir::Begin}; }
  static PositionFunction match_pos(Term term, int k, Dir dir) {
    return {Kind::MatchPos, k, std::move(term), dir};
  }

  friend auto operator<=>(const PositionFunction&, const PositionFunction&) = default;
  friend bool operator==(const PositionFunction&, const PositionFunction&) = default;
};

struct StringFunction {
  // Declaration order doubles as the canonical label order.
  enum class Kind : std::uint8_t { SubStr, Prefix, Suffix, ConstantStr };
  Kind kind = Kind::ConstantStr;
  Text text;                // ConstantStr
  PositionFunction left;    // SubStr
  PositionFunction right;   // SubStr
  Term term;                // Prefix / Suffix (regex terms only)
  int k = 1;                // Prefix / Suffix

  static StringFunction constant(Text text) {
    StringFunction f;
    f.kind = Kind::ConstantStr;
    f.text = std::move(text);
    return f;
  }
  static StringFunction substr(PositionFunction l, PositionFunction r) {
    StringFunction f;
    f.kind = Kind::SubStr;
    f.left = std::move(l);
    f.right = std::move(r);
    return f;
  }
  static StringFunction prefix(Term term, int k) {
    StringFunction f;
    f.kind = Kind::Prefix;
    f.term = std::move(term);
    f.k = k;
    return f;
  }
  static StringFunction suffix(Term term, int k) {
    StringFunction f;
    f.kind = Kind::Suffix;
    f.term = std::move(term);
    f.k = k;
    return f;
  }

  friend auto operator<=>(const StringFunction&, const StringFunction&) = default;
  friend bool operator==(const StringFunction&, const StringFunction&) = default;
};

struct Program {
  std::vector<StringFunction> functions;

  bool empty() const { return functions.empty(); }
  std::size_t size() const { return functions.size(); }

  friend bool operator==(const Program&, const Program&) = default;
};

// Resolves the k-th match (k may be negative) among `count` matches to a
// 0-based index; nullopt when out of range.
std::optional<std::size_t> resolve_match_index(int k, std::size_t count);

std::optional<int> eval_position(const PositionFunction& pf, TextView s);

// Sorted, duplicate-free output set. Empty when the function is undefined on s.
std::vector<Text> eval_string_function(const StringFunction& f, TextView s);

// True iff t splits into |p| pieces, piece i produced by function i on s.
bool is_consistent(const Program& p, TextView s, TextView t);

// Single-valued output of a program; nullopt when any function is undefined
// or multi-valued.
std::optional<Text> evaluate_deterministic(const Program& p, TextView s);

std::string canonical_text(const Term& term);
std::string canonical_text(const PositionFunction& pf);
std::string canonical_text(const StringFunction& f);
std::string canonical_text(const Program& p);

}  // namespace goldrec
