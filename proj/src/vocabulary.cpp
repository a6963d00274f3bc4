#include "goldrec/vocabulary.hpp"

#include <algorithm>
#include <stdexcept>

namespace goldrec {

namespace {

// Regex terms use codes 0..3; ConstantString terms are encoded in Key.b.
std::uint32_t regex_code(const Term& term) { return static_cast<std::uint32_t>(term.kind); }

}  // namespace

std::uint32_t Vocabulary::intern_text(const Text& t) {
  auto [it, inserted] = text_ids_.try_emplace(t, static_cast<std::uint32_t>(texts_.size()));
  if (inserted) texts_.push_back(t);
  return it->second;
}

PosId Vocabulary::intern_position(const PositionFunction& pf) {
  std::string text = canonical_text(pf);
  auto it = position_ids_.lower_bound(text);
  if (it != position_ids_.end() && it->first == text) return it->second;
  const auto id = static_cast<PosId>(positions_.size());
  positions_.push_back(pf);
  position_texts_.push_back(text);
  it = position_ids_.emplace_hint(it, std::move(text), id);
  const std::uint64_t lo = it == position_ids_.begin() ? 0 : order_key_[std::prev(it)->second];
  const std::uint64_t hi = std::next(it) == position_ids_.end() ? UINT64_MAX : order_key_[std::next(it)->second];
  order_key_.push_back(lo + (hi - lo) / 2);
  if (hi - lo < 2) renumber_positions();
  return id;
}

void Vocabulary::renumber_positions() {
  const std::uint64_t step = UINT64_MAX / (position_ids_.size() + 1);
  std::uint64_t k = 0;
  for (const auto& [text, id] : position_ids_) order_key_[id] = (k += step);
}

std::string Vocabulary::render(const Key& key) const {
  switch (key.kind) {
    case StringFunction::Kind::SubStr:
      return "SubStr(" + position_texts_[key.a] + "," +
             position_texts_[static_cast<std::size_t>(key.b)] + ")";
    case StringFunction::Kind::ConstantStr:
      return canonical_text(StringFunction::constant(texts_[key.a]));
    case StringFunction::Kind::Prefix:
    case StringFunction::Kind::Suffix:
      return canonical_text(function_from_key(key));
  }
  return {};
}

LabelId Vocabulary::intern_key(const Key& key) {
  auto [it, inserted] = label_ids_.try_emplace(key, static_cast<LabelId>(labels_.size()));
  if (inserted) labels_.push_back({key, {}});
  return it->second;
}

std::size_t Vocabulary::substr_slot(std::uint64_t packed) const {
  const std::size_t mask = substr_ids_.size() - 1;
  std::size_t at = static_cast<std::size_t>((packed * 0x9E3779B97F4A7C15ULL) >> 20) & mask;
  while (substr_ids_[at].packed != packed && substr_ids_[at].packed != UINT64_MAX) at = (at + 1) & mask;
  return at;
}

void Vocabulary::grow_substr_table() {
  std::vector<SubStrSlot> old(substr_ids_.size() * 2);
  old.swap(substr_ids_);
  for (const auto& slot : old) {
    if (slot.packed != UINT64_MAX) substr_ids_[substr_slot(slot.packed)] = slot;
  }
}

LabelId Vocabulary::intern_substr(PosId left, PosId right) {
  const std::uint64_t packed = (static_cast<std::uint64_t>(left) << 32) | right;
  auto& slot = substr_ids_[substr_slot(packed)];
  if (slot.packed == packed) return slot.id;
  const auto id = static_cast<LabelId>(labels_.size());
  slot = {packed, id};
  labels_.push_back({{StringFunction::Kind::SubStr, left, static_cast<std::int64_t>(right)}, {}});
  if (++substr_count_ * 2 > substr_ids_.size()) grow_substr_table();
  return id;
}

const std::string& Vocabulary::text(LabelId id) const {
  auto& entry = labels_[id];
  if (entry.text.empty()) entry.text = render(entry.key);
  return entry.text;
}

LabelId Vocabulary::intern(const StringFunction& f) {
  switch (f.kind) {
    case StringFunction::Kind::SubStr:
      return intern_substr(intern_position(f.left), intern_position(f.right));
    case StringFunction::Kind::ConstantStr:
      return intern_key({f.kind, intern_text(f.text), 0});
    case StringFunction::Kind::Prefix:
    case StringFunction::Kind::Suffix:
      if (!f.term.is_regex()) throw std::invalid_argument("affix functions take regex terms only");
      return intern_key({f.kind, regex_code(f.term), f.k});
  }
  throw std::logic_error("unreachable");
}

std::optional<Vocabulary::Key> Vocabulary::key_of(const StringFunction& f) const {
  switch (f.kind) {
    case StringFunction::Kind::SubStr: {
      auto l = position_ids_.find(canonical_text(f.left));
      auto r = position_ids_.find(canonical_text(f.right));
      if (l == position_ids_.end() || r == position_ids_.end()) return std::nullopt;
      return Key{f.kind, l->second, static_cast<std::int64_t>(r->second)};
    }
    case StringFunction::Kind::ConstantStr: {
      auto it = text_ids_.find(f.text);
      if (it == text_ids_.end()) return std::nullopt;
      return Key{f.kind, it->second, 0};
    }
    case StringFunction::Kind::Prefix:
    case StringFunction::Kind::Suffix:
      if (!f.term.is_regex()) return std::nullopt;
      return Key{f.kind, regex_code(f.term), f.k};
  }
  return std::nullopt;
}

std::optional<LabelId> Vocabulary::find(const StringFunction& f) const {
  const auto key = key_of(f);
  if (!key) return std::nullopt;
  if (key->kind == StringFunction::Kind::SubStr) {
    const auto packed = (static_cast<std::uint64_t>(key->a) << 32) | static_cast<std::uint64_t>(key->b);
    const auto& slot = substr_ids_[substr_slot(packed)];
    if (slot.packed != packed) return std::nullopt;
    return slot.id;
  }
  auto it = label_ids_.find(*key);
  if (it == label_ids_.end()) return std::nullopt;
  return it->second;
}

StringFunction Vocabulary::function_from_key(const Key& key) const {
  switch (key.kind) {
    case StringFunction::Kind::SubStr:
      return StringFunction::substr(positions_[key.a], positions_[static_cast<std::size_t>(key.b)]);
    case StringFunction::Kind::ConstantStr:
      return StringFunction::constant(texts_[key.a]);
    case StringFunction::Kind::Prefix:
      return StringFunction::prefix(regex_terms()[key.a], static_cast<int>(key.b));
    case StringFunction::Kind::Suffix:
      return StringFunction::suffix(regex_terms()[key.a], static_cast<int>(key.b));
  }
  throw std::logic_error("unreachable");
}

bool Vocabulary::less(LabelId a, LabelId b) const {
  if (a == b) return false;
  const auto& ka = labels_[a].key;
  const auto& kb = labels_[b].key;
  if (ka.kind != kb.kind) return ka.kind < kb.kind;
  if (ka.kind == StringFunction::Kind::SubStr) {
    // Position texts are prefix-free, so comparing the two positions in
    // turn matches comparing the rendered text.
    if (ka.a != kb.a) return order_key_[ka.a] < order_key_[kb.a];
    return order_key_[static_cast<std::size_t>(ka.b)] < order_key_[static_cast<std::size_t>(kb.b)];
  }
  return text(a) < text(b);
}

void Vocabulary::sort_canonical(std::vector<LabelId>& ids) const {
  struct SubStrKey {
    std::uint64_t left;
    std::uint64_t right;
    LabelId id;
  };
  std::vector<SubStrKey> substr;
  std::vector<LabelId> rest;
  substr.reserve(ids.size());
  for (LabelId id : ids) {
    const auto& key = labels_[id].key;
    if (key.kind == StringFunction::Kind::SubStr) {
      substr.push_back({order_key_[key.a], order_key_[static_cast<std::size_t>(key.b)], id});
    } else {
      rest.push_back(id);
    }
  }
  std::sort(substr.begin(), substr.end(), [](const SubStrKey& x, const SubStrKey& y) {
    if (x.left != y.left) return x.left < y.left;
    return x.right < y.right;
  });
  std::sort(rest.begin(), rest.end(), [&](LabelId a, LabelId b) { return less(a, b); });
  ids.clear();
  for (const auto& k : substr) ids.push_back(k.id);
  ids.insert(ids.end(), rest.begin(), rest.end());
}

StringFunction Vocabulary::function(LabelId id) const { return function_from_key(labels_[id].key); }

}  // namespace goldrec
