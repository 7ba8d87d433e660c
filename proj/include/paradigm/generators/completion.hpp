#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "paradigm/dataset.hpp"
#include "paradigm/edit_tree.hpp"
#include "paradigm/slot_discovery.hpp"

namespace paradigm {

// Applies the slot's trees in descending coverage order; std::nullopt when
// none fits the lemma.
inline std::optional<std::string> fallback_generate(const SlotSystem& sys, const std::string& lemma, int slot) {
  const Slot& s = sys.slot(slot);
  const std::u32string chars = utf8::decode(lemma);
  for (const auto& key : s.trees_by_coverage()) {
    if (auto form = apply_tree(s.trees.at(key), std::u32string_view(chars))) return utf8::encode(*form);
  }
  return std::nullopt;
}

using CellGenerator = std::function<std::string(const std::string& lemma, int slot)>;

// Fills every (lemma, slot) cell: attested forms from train/dev pass through
// verbatim, every other cell comes from `generate`. Rows follow lemma input
// order, then slot id.
inline std::vector<InflectionExample> complete_paradigms(const LemmaList& lemmas, int paradigm_size,
                                                         const DataSplit& splits, const CellGenerator& generate) {
  std::map<std::pair<std::string, int>, std::string> attested;
  for (const auto* part : {&splits.train, &splits.dev}) {
    for (const auto& e : *part) {
      if (lemmas.contains(e.lemma)) attested.emplace(std::make_pair(e.lemma, e.slot), e.form);
    }
  }
  std::vector<InflectionExample> rows;
  rows.reserve(lemmas.size() * static_cast<std::size_t>(std::max(paradigm_size, 0)));
  for (const auto& lemma : lemmas) {
    for (int slot = 1; slot <= paradigm_size; ++slot) {
      auto it = attested.find({lemma, slot});
      rows.push_back({lemma, slot, it != attested.end() ? it->second : generate(lemma, slot)});
    }
  }
  return rows;
}

// Predictions: lemma \t form \t slot_id
inline void write_predictions(std::ostream& out, const std::vector<InflectionExample>& rows) {
  for (const auto& r : rows) out << r.lemma << '\t' << r.form << '\t' << r.slot << '\n';
}

}  // namespace paradigm
