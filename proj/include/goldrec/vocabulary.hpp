#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "goldrec/dsl.hpp"

namespace goldrec {

using LabelId = std::uint32_t;
using PosId = std::uint32_t;

// Interns string functions so that graphs and inverted lists can refer to
// labels by a dense integer id. Not thread-safe; one writer at a time.
class Vocabulary {
 public:
  PosId intern_position(const PositionFunction& pf);
  LabelId intern_substr(PosId left, PosId right);
  LabelId intern(const StringFunction& f);

  std::optional<LabelId> find(const StringFunction& f) const;

  StringFunction function(LabelId id) const;
  // Canonical text, rendered on first use.
  const std::string& text(LabelId id) const;
  StringFunction::Kind kind(LabelId id) const { return labels_[id].key.kind; }
  std::size_t size() const { return labels_.size(); }

  // Canonical label order: SubStr < Prefix < Suffix < ConstantStr, then by
  // canonical text. Independent of interning order.
  bool less(LabelId a, LabelId b) const;
  // Sorts ids by `less`; faster than std::sort with `less` on long lists.
  void sort_canonical(std::vector<LabelId>& ids) const;

 private:
  struct Key {
    StringFunction::Kind kind;
    std::uint32_t a;
    std::int64_t b;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.kind) * 0x9E3779B97F4A7C15ULL;
      h ^= (static_cast<std::uint64_t>(k.a) + 0x7F4A7C15ULL) * 0xBF58476D1CE4E5B9ULL;
      h ^= static_cast<std::uint64_t>(k.b) * 0x94D049BB133111EBULL;
      return static_cast<std::size_t>(h ^ (h >> 31));
    }
  };
  struct Entry {
    Key key;
    mutable std::string text;  // empty until rendered
  };

  std::uint32_t intern_text(const Text& t);
  std::optional<Key> key_of(const StringFunction& f) const;
  LabelId intern_key(const Key& key);
  std::string render(const Key& key) const;
  StringFunction function_from_key(const Key& key) const;
  void renumber_positions();

  std::vector<Text> texts_;
  std::unordered_map<Text, std::uint32_t> text_ids_;
  std::vector<PositionFunction> positions_;
  std::vector<std::string> position_texts_;
  // Positions by canonical text; order_key_ follows that order with gaps so
  // new positions can be slotted in without renumbering.
  std::map<std::string, PosId> position_ids_;
  std::vector<std::uint64_t> order_key_;
  // SubStr labels only: open addressing on packed (left, right), linear
  // probing, kept at most half full.
  struct SubStrSlot {
    std::uint64_t packed = UINT64_MAX;
    LabelId id = 0;
  };
  std::vector<SubStrSlot> substr_ids_ = std::vector<SubStrSlot>(1024);
  std::size_t substr_count_ = 0;
  // Index of packed's slot, or of the empty slot where it would go.
  std::size_t substr_slot(std::uint64_t packed) const;
  void grow_substr_table();
  std::vector<Entry> labels_;
  std::unordered_map<Key, LabelId, KeyHash> label_ids_;
};

}  // namespace goldrec
