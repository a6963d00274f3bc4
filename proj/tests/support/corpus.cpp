#include "corpus.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace corpus {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Text random_text(std::mt19937_64& rng, const Text& alphabet, int lo, int hi) {
  Text out;
  const int len = uniform(rng, lo, hi);
  for (int i = 0; i < len; ++i) out.push_back(alphabet[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(alphabet.size()) - 1))]);
  return out;
}

void push_unique(std::vector<ReplacementInput>& out, std::set<std::pair<Text, Text>>& seen, Text s, Text t) {
  if (s == t || t.empty()) return;
  if (!seen.insert({s, t}).second) return;
  out.push_back({out.size(), std::move(s), std::move(t)});
}

Text word(std::mt19937_64& rng, bool capital, int lo, int hi) {
  static const Text lower = U"abcdefghijklmnopqrstuvwxyz";
  Text w = random_text(rng, lower, lo, hi);
  if (capital && !w.empty()) w[0] = static_cast<char32_t>(w[0] - U'a' + U'A');
  return w;
}

Text digits(std::mt19937_64& rng, int lo, int hi) { return random_text(rng, U"0123456789", lo, hi); }

}  // namespace

std::vector<ReplacementInput> small(std::mt19937_64& rng, std::size_t n, std::size_t max_len) {
  const Text alphabet = U"aAb1 .";
  const int cap = static_cast<int>(max_len);
  std::vector<ReplacementInput> out;
  std::set<std::pair<Text, Text>> seen;
  const int flavour = uniform(rng, 0, 5);
  std::size_t guard = 0;
  while (out.size() < n && guard++ < n * 200) {
    Text s = random_text(rng, alphabet, 1, cap);
    Text t;
    const int kind = uniform(rng, 0, 6) == 0 ? 6 : (uniform(rng, 0, 2) == 0 ? uniform(rng, 0, 5) : flavour);
    switch (kind) {
      case 0:  // truncate
        t = s.substr(0, static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(s.size()))));
        break;
      case 1:  // append a constant
        t = s + U".";
        break;
      case 2: {  // swap around the first space
        const auto sp = s.find(U' ');
        if (sp == Text::npos) {
          t = U"A" + s;
        } else {
          t = s.substr(sp + 1) + U" " + s.substr(0, sp);
        }
        break;
      }
      case 3:  // drop the first character
        t = s.size() > 1 ? s.substr(1) : U"b";
        break;
      case 4:  // prefix constant
        t = U"1" + s;
        break;
      case 5:  // last character doubled
        t = s + s.substr(s.size() - 1);
        break;
      default:
        t = random_text(rng, alphabet, 1, cap);
        break;
    }
    if (t.size() > max_len) t.resize(max_len);
    push_unique(out, seen, std::move(s), std::move(t));
  }
  return out;
}

std::vector<ReplacementInput> medium(std::mt19937_64& rng, std::size_t n) {
  std::vector<ReplacementInput> out;
  std::set<std::pair<Text, Text>> seen;
  std::size_t guard = 0;
  while (out.size() < n && guard++ < n * 100) {
    const Text first = word(rng, true, 2, 6);
    const Text last = word(rng, true, 2, 7);
    const Text num = digits(rng, 1, 4);
    switch (uniform(rng, 0, 7)) {
      case 0: push_unique(out, seen, last + U", " + first, first + U" " + last); break;
      case 1: push_unique(out, seen, first + U" " + last, last + U", " + first); break;
      case 2: push_unique(out, seen, first + U" " + last, first.substr(0, 1) + U". " + last); break;
      case 3: push_unique(out, seen, num + U" " + last + U" Street", num + U" " + last + U" St"); break;
      case 4: push_unique(out, seen, num + U" " + last + U" Avenue", num + U" " + last + U" Ave"); break;
      case 5: push_unique(out, seen, U"The " + first + U" Journal", first + U" Journal"); break;
      case 6: push_unique(out, seen, last + U" Review.", last + U" Review"); break;
      default: push_unique(out, seen, word(rng, false, 1, 6), word(rng, false, 1, 6)); break;
    }
  }
  return out;
}

std::vector<ReplacementInput> templated(std::mt19937_64& rng, std::size_t n, std::size_t templates) {
  // Mildly uneven template sizes.
  std::vector<double> weights(templates);
  for (auto& w : weights) w = 1.0 + static_cast<double>(uniform(rng, 0, 2));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<ReplacementInput> out;
  std::set<std::pair<Text, Text>> seen;
  std::size_t guard = 0;
  while (out.size() < n && guard++ < n * 50) {
    const std::size_t k = pick(rng);
    // A leading punctuation mark per template keeps structures apart.
    static const Text marks = U"#$%&*+/:;=?@^_~!|<>[]{}";
    const Text tag(1, marks[k % marks.size()]);
    const Text first = word(rng, true, 3, 7);
    // Multi-word names split each template into several structure groups.
    Text last = word(rng, true, 3, 8);
    for (int extra = uniform(rng, 0, 3); extra > 0; --extra) last += U" " + word(rng, true, 3, 8);
    const Text num = digits(rng, 2, 4);
    Text s;
    Text t;
    switch ((k / 2) % 10) {
      case 0: s = last + U", " + first; t = first + U" " + last; break;
      case 1: s = first + U" " + last; t = first.substr(0, 1) + U". " + last; break;
      case 2: s = num + U" " + last + U" Street"; t = num + U" " + last + U" St"; break;
      case 3: s = num + U" " + last + U" Avenue"; t = num + U" " + last + U" Ave"; break;
      case 4: s = U"The " + last + U" Review"; t = last + U" Review"; break;
      case 5: s = last + U" Letters."; t = last + U" Letters"; break;
      case 6: {
        s = num;
        t = num;
        for (int parts = uniform(rng, 1, 4); parts > 0; --parts) {
          const Text tail = digits(rng, 3, 3);
          s += U"-" + tail;
          t += tail;
        }
        break;
      }
      case 7: s = first + U" " + last + U" Inc"; t = first + U" " + last; break;
      case 8: s = U"Dr " + first + U" " + last; t = first + U" " + last; break;
      default: s = last + U" " + num; t = num + U" " + last; break;
    }
    push_unique(out, seen, tag + s, tag + t);
  }
  return out;
}

}  // namespace corpus
