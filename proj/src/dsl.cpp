#include "goldrec/dsl.hpp"

#include <algorithm>

namespace goldrec {

const std::vector<Term>& regex_terms() {
  static const std::vector<Term> terms = {Term::digits(), Term::lowercase(), Term::uppercase(),
                                          Term::whitespace()};
  return terms;
}

std::optional<Term> regex_term_for(CharClass c) {
  switch (c) {
    case CharClass::Digit: return Term::digits();
    case CharClass::Lower: return Term::lowercase();
    case CharClass::Upper: return Term::uppercase();
    case CharClass::Space: return Term::whitespace();
    case CharClass::Other: break;
  }
  return std::nullopt;
}

namespace {

CharClass class_of(TermKind kind) {
  switch (kind) {
    case TermKind::Digits: return CharClass::Digit;
    case TermKind::Lowercase: return CharClass::Lower;
    case TermKind::Uppercase: return CharClass::Upper;
    case TermKind::Whitespace: return CharClass::Space;
    default: return CharClass::Other;
  }
}

}  // namespace

std::vector<Match> term_matches(const Term& term, TextView s) {
  std::vector<Match> out;
  const int n = static_cast<int>(s.size());
  if (term.is_regex()) {
    const CharClass want = class_of(term.kind);
    int i = 0;
    while (i < n) {
      if (classify(s[i]) != want) {
        ++i;
        continue;
      }
      int j = i;
      while (j < n && classify(s[j]) == want) ++j;
      out.push_back({i + 1, j + 1});
      i = j;
    }
    return out;
  }
  if (term.text.empty()) return out;
  const auto len = term.text.size();
  std::size_t pos = 0;
  while ((pos = s.find(term.text, pos)) != TextView::npos) {
    out.push_back({static_cast<int>(pos) + 1, static_cast<int>(pos + len) + 1});
    pos += len;
  }
  return out;
}

std::optional<std::size_t> resolve_match_index(int k, std::size_t count) {
  const auto m = static_cast<long long>(count);
  if (k > 0 && k <= m) return static_cast<std::size_t>(k - 1);
  if (k < 0 && k >= -m) return static_cast<std::size_t>(m + k);
  return std::nullopt;
}

std::optional<int> eval_position(const PositionFunction& pf, TextView s) {
  const int n = static_cast<int>(s.size());
  if (pf.kind == PositionFunction::Kind::ConstPos) {
    if (pf.k > 0 && pf.k <= n + 1) return pf.k;
    if (pf.k < 0 && pf.k >= -(n + 1)) return n + 2 + pf.k;
    return std::nullopt;
  }
  if (pf.term.kind == TermKind::SingleChar) return std::nullopt;
  const auto matches = term_matches(pf.term, s);
  const auto idx = resolve_match_index(pf.k, matches.size());
  if (!idx) return std::nullopt;
  return pf.dir == Dir::Begin ? matches[*idx].begin : matches[*idx].end;
}

namespace {

std::optional<Text> kth_regex_match(const Term& term, int k, TextView s) {
  if (!term.is_regex()) return std::nullopt;
  const auto matches = term_matches(term, s);
  const auto idx = resolve_match_index(k, matches.size());
  if (!idx) return std::nullopt;
  const auto& m = matches[*idx];
  return Text(s.substr(m.begin - 1, m.end - m.begin));
}

}  // namespace

std::vector<Text> eval_string_function(const StringFunction& f, TextView s) {
  std::vector<Text> out;
  switch (f.kind) {
    case StringFunction::Kind::ConstantStr:
      out.push_back(f.text);
      break;
    case StringFunction::Kind::SubStr: {
      const auto l = eval_position(f.left, s);
      const auto r = eval_position(f.right, s);
      if (l && r && *l < *r) out.emplace_back(s.substr(*l - 1, *r - *l));
      break;
    }
    case StringFunction::Kind::Prefix: {
      if (const auto w = kth_regex_match(f.term, f.k, s)) {
        for (std::size_t len = 1; len <= w->size(); ++len) out.push_back(w->substr(0, len));
      }
      break;
    }
    case StringFunction::Kind::Suffix: {
      if (const auto w = kth_regex_match(f.term, f.k, s)) {
        for (std::size_t len = 1; len <= w->size(); ++len) {
          out.push_back(w->substr(w->size() - len));
        }
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_consistent(const Program& p, TextView s, TextView t) {
  const std::size_t n = t.size();
  std::vector<char> reach(n + 1, 0);
  reach[0] = 1;
  for (const auto& f : p.functions) {
    const auto outputs = eval_string_function(f, s);
    std::vector<char> next(n + 1, 0);
    bool any = false;
    for (std::size_t pos = 0; pos <= n; ++pos) {
      if (!reach[pos]) continue;
      for (const auto& o : outputs) {
        if (pos + o.size() <= n && t.compare(pos, o.size(), o) == 0) {
          next[pos + o.size()] = 1;
          any = true;
        }
      }
    }
    if (!any) return false;
    reach.swap(next);
  }
  return reach[n] != 0;
}

std::optional<Text> evaluate_deterministic(const Program& p, TextView s) {
  Text out;
  for (const auto& f : p.functions) {
    const auto outputs = eval_string_function(f, s);
    if (outputs.size() != 1) return std::nullopt;
    out += outputs.front();
  }
  return out;
}

namespace {

std::string escaped(TextView text) {
  std::string out;
  for (char c : to_utf8(text)) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string canonical_text(const Term& term) {
  switch (term.kind) {
    case TermKind::Digits: return "Td";
    case TermKind::Lowercase: return "Tl";
    case TermKind::Uppercase: return "TC";
    case TermKind::Whitespace: return "Tb";
    case TermKind::ConstantString: return "Tstr(\"" + escaped(term.text) + "\")";
    case TermKind::SingleChar: return "Tch('" + escaped(term.text) + "')";
  }
  return {};
}

std::string canonical_text(const PositionFunction& pf) {
  if (pf.kind == PositionFunction::Kind::ConstPos) {
    return "ConstPos(" + std::to_string(pf.k) + ")";
  }
  return "MatchPos(" + canonical_text(pf.term) + "," + std::to_string(pf.k) + "," +
         (pf.dir == Dir::Begin ? "B" : "E") + ")";
}

std::string canonical_text(const StringFunction& f) {
  switch (f.kind) {
    case StringFunction::Kind::ConstantStr: return "ConstantStr(\"" + escaped(f.text) + "\")";
    case StringFunction::Kind::SubStr:
      return "SubStr(" + canonical_text(f.left) + "," + canonical_text(f.right) + ")";
    case StringFunction::Kind::Prefix:
      return "Prefix(" + canonical_text(f.term) + "," + std::to_string(f.k) + ")";
    case StringFunction::Kind::Suffix:
      return "Suffix(" + canonical_text(f.term) + "," + std::to_string(f.k) + ")";
  }
  return {};
}

std::string canonical_text(const Program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    if (i > 0) out += "⊕";
    out += canonical_text(p.functions[i]);
  }
  return out;
}

}  // namespace goldrec
