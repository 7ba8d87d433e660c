#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "paradigm/dataset.hpp"
#include "paradigm/utf8.hpp"

namespace paradigm {

// Symbol inventory: specials, then characters in code point order, then slot
// tokens SLOT_1..SLOT_N.
class CharVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kSpecials = 4;

  CharVocab() = default;
  CharVocab(std::vector<char32_t> chars, int slot_count) : chars_(std::move(chars)), slots_(slot_count) {
    std::sort(chars_.begin(), chars_.end());
    chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
    for (std::size_t i = 0; i < chars_.size(); ++i) index_.emplace(chars_[i], kSpecials + static_cast<int>(i));
  }

  // Characters of all lemmas and forms in `examples`.
  static CharVocab from_examples(const std::vector<InflectionExample>& examples, int slot_count) {
    std::set<char32_t> seen;
    for (const auto& e : examples) {
      for (char32_t c : utf8::decode(e.lemma)) seen.insert(c);
      for (char32_t c : utf8::decode(e.form)) seen.insert(c);
    }
    return CharVocab(std::vector<char32_t>(seen.begin(), seen.end()), slot_count);
  }

  int size() const { return kSpecials + static_cast<int>(chars_.size()) + slots_; }
  int slot_count() const { return slots_; }
  const std::vector<char32_t>& chars() const { return chars_; }

  int char_id(char32_t c) const {
    auto it = index_.find(c);
    return it == index_.end() ? kUnk : it->second;
  }

  bool has_char(char32_t c) const { return index_.count(c) != 0; }

  int slot_id(int slot) const {
    if (slot < 1 || slot > slots_) throw Error("unknown slot id " + std::to_string(slot));
    return kSpecials + static_cast<int>(chars_.size()) + slot - 1;
  }

  std::optional<char32_t> symbol_char(int id) const {
    const int k = id - kSpecials;
    if (k < 0 || k >= static_cast<int>(chars_.size())) return std::nullopt;
    return chars_[static_cast<std::size_t>(k)];
  }

  std::string symbol_name(int id) const {
    switch (id) {
      case kPad: return "<pad>";
      case kBos: return "<bos>";
      case kEos: return "<eos>";
      case kUnk: return "<unk>";
      default: break;
    }
    if (auto c = symbol_char(id)) return utf8::encode(std::u32string(1, *c));
    return "SLOT_" + std::to_string(id - kSpecials - static_cast<int>(chars_.size()) + 1);
  }

  friend bool operator==(const CharVocab& a, const CharVocab& b) { return a.chars_ == b.chars_ && a.slots_ == b.slots_; }

 private:
  std::vector<char32_t> chars_;
  int slots_ = 0;
  std::map<char32_t, int> index_;
};

}  // namespace paradigm
