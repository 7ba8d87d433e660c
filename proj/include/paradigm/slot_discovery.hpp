#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "paradigm/corpus.hpp"
#include "paradigm/edit_tree.hpp"
#include "paradigm/retrieval.hpp"

namespace paradigm {

struct SlotCell {
  std::string form;
  std::string tree_key;

  friend bool operator==(const SlotCell&, const SlotCell&) = default;
};

struct Slot {
  int id = 0;
  std::map<std::string, EditTree> trees;      // by tree key
  std::map<std::string, SlotCell> coverage;   // lemma -> the single form the slot's trees produced

  // Number of covered lemmas realized by one particular tree.
  std::size_t tree_coverage(const std::string& key) const {
    return static_cast<std::size_t>(
        std::count_if(coverage.begin(), coverage.end(), [&](const auto& kv) { return kv.second.tree_key == key; }));
  }

  // Tree keys ordered by descending coverage, ties by key.
  std::vector<std::string> trees_by_coverage() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& [key, tree] : trees) counts[key] = 0;
    for (const auto& [lemma, cell] : coverage) ++counts[cell.tree_key];
    std::vector<std::string> keys;
    for (const auto& [key, n] : counts) keys.push_back(key);
    std::stable_sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) { return counts[a] > counts[b]; });
    return keys;
  }
};

// Discovered paradigm schema. Slot ids are 1..size() in vector order once
// produced by merge_slots.
class SlotSystem {
 public:
  SlotSystem() = default;
  explicit SlotSystem(std::vector<Slot> slots) : slots_(std::move(slots)) {}

  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t paradigm_size() const noexcept { return slots_.size(); }
  bool empty() const noexcept { return slots_.empty(); }

  const Slot& slot(int id) const {
    for (const auto& s : slots_) {
      if (s.id == id) return s;
    }
    throw Error("unknown slot id " + std::to_string(id));
  }

  // Throws if any tree sits in two slots, a lemma has two forms in one slot,
  // or ids are not contiguous from 1.
  void check_invariants() const {
    std::map<std::string, int> owner;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      const auto& s = slots_[i];
      if (s.id != static_cast<int>(i) + 1) throw Error("slot ids are not contiguous");
      if (s.trees.empty()) throw Error("slot " + std::to_string(s.id) + " has no trees");
      for (const auto& [key, tree] : s.trees) {
        if (!owner.emplace(key, s.id).second) throw Error("tree " + key + " realizes two slots");
      }
      for (const auto& [lemma, cell] : s.coverage) {
        if (!s.trees.count(cell.tree_key)) throw Error("coverage of slot " + std::to_string(s.id) + " uses foreign tree");
      }
    }
  }

 private:
  std::vector<Slot> slots_;
};

struct DiscoveryConfig {
  double min_slot_coverage = 0.1;
  double similarity_floor = 0.0;

  void validate() const {
    if (!(min_slot_coverage >= 0.0 && min_slot_coverage <= 1.0)) throw Error("discovery.min_slot_coverage must be in [0, 1]");
    if (!(similarity_floor >= 0.0 && similarity_floor <= 1.0)) throw Error("discovery.similarity_floor must be in [0, 1]");
  }
};

// One slot per distinct tree, ids 1..M in tree-key order. A lemma with several
// forms under one tree keeps the most corpus-frequent form (ties: smallest).
inline SlotSystem initial_slots(const CandidateTable& table, const Corpus& corpus) {
  std::map<std::string, Slot> by_key;
  for (const auto& t : table.triples()) {
    auto& slot = by_key[t.key];
    slot.trees.emplace(t.key, t.tree);
    auto [it, inserted] = slot.coverage.try_emplace(t.lemma, SlotCell{t.form, t.key});
    if (inserted) continue;
    const auto old_count = corpus.count(it->second.form);
    const auto new_count = corpus.count(t.form);
    if (new_count > old_count || (new_count == old_count && t.form < it->second.form)) it->second.form = t.form;
  }
  std::vector<Slot> slots;
  int id = 0;
  for (auto& [key, slot] : by_key) {
    slot.id = ++id;
    slots.push_back(std::move(slot));
  }
  return SlotSystem(std::move(slots));
}

// Complementary coverage; std::nullopt when the slots share a lemma.
inline std::optional<double> slot_similarity(const Slot& a, const Slot& b, std::size_t all_lemmas) {
  for (const auto& [lemma, cell] : a.coverage) {
    if (b.coverage.count(lemma)) return std::nullopt;
  }
  if (all_lemmas == 0) return 0.0;
  return static_cast<double>(a.coverage.size() + b.coverage.size()) / static_cast<double>(all_lemmas);
}

namespace detail {

class LemmaBits {
 public:
  explicit LemmaBits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool intersects(const LemmaBits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & o.words_[w]) return true;
    }
    return false;
  }
  void merge(const LemmaBits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

// Greedy agglomeration of compatible slots by similarity, then the coverage
// filter and renumbering by descending coverage.
inline SlotSystem merge_slots(const SlotSystem& sys, const DiscoveryConfig& cfg, std::size_t all_lemmas) {
  cfg.validate();
  std::map<std::string, std::size_t> lemma_index;
  for (const auto& s : sys.slots()) {
    for (const auto& [lemma, cell] : s.coverage) lemma_index.emplace(lemma, 0);
  }
  std::size_t next = 0;
  for (auto& [lemma, idx] : lemma_index) idx = next++;
  if (all_lemmas < lemma_index.size()) all_lemmas = lemma_index.size();

  struct Active {
    Slot slot;
    detail::LemmaBits bits;
  };
  std::vector<Active> active;
  for (const auto& s : sys.slots()) {
    detail::LemmaBits bits(lemma_index.size());
    for (const auto& [lemma, cell] : s.coverage) bits.set(lemma_index.at(lemma));
    active.push_back({s, std::move(bits)});
  }
  std::sort(active.begin(), active.end(), [](const Active& a, const Active& b) { return a.slot.id < b.slot.id; });

  const auto score = [&](const Active& a, const Active& b) {
    return static_cast<double>(a.slot.coverage.size() + b.slot.coverage.size()) / static_cast<double>(all_lemmas);
  };

  while (active.size() > 1 && all_lemmas > 0) {
    // Scanning a < b in id order makes the first strict maximum the smallest id pair.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    double best_score = cfg.similarity_floor;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double s = score(active[a], active[b]);
        if (s <= best_score) continue;
        if (active[a].bits.intersects(active[b].bits)) continue;
        best = {a, b};
        best_score = s;
      }
    }
    if (!best) break;
    auto& keep = active[best->first];
    auto& gone = active[best->second];
    keep.slot.trees.merge(gone.slot.trees);
    keep.slot.coverage.merge(gone.slot.coverage);
    keep.bits.merge(gone.bits);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best->second));
  }

  std::vector<Slot> kept;
  for (auto& a : active) {
    const double frac = all_lemmas == 0 ? 0.0 : static_cast<double>(a.slot.coverage.size()) / static_cast<double>(all_lemmas);
    if (frac >= cfg.min_slot_coverage) kept.push_back(std::move(a.slot));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Slot& a, const Slot& b) {
    if (a.coverage.size() != b.coverage.size()) return a.coverage.size() > b.coverage.size();
    return a.id < b.id;
  });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<int>(i) + 1;
  return SlotSystem(std::move(kept));
}

inline std::map<std::string, int> assign_slot_ids(const SlotSystem& sys) {
  std::map<std::string, int> ids;
  for (const auto& s : sys.slots()) {
    for (const auto& [key, tree] : s.trees) ids.emplace(key, s.id);
  }
  return ids;
}

// Regroups per-tree slots (from initial_slots) under a stored tree -> slot id
// assignment. Trees absent from the assignment are dropped.
inline SlotSystem regroup_slots(const SlotSystem& per_tree, const std::map<std::string, int>& assignment) {
  int size = 0;
  for (const auto& [key, id] : assignment) size = std::max(size, id);
  std::vector<Slot> slots(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) slots[static_cast<std::size_t>(i)].id = i + 1;
  for (const auto& s : per_tree.slots()) {
    for (const auto& [key, tree] : s.trees) {
      auto it = assignment.find(key);
      if (it == assignment.end()) continue;
      auto& target = slots[static_cast<std::size_t>(it->second - 1)];
      target.trees.emplace(key, tree);
      for (const auto& [lemma, cell] : s.coverage) target.coverage.emplace(lemma, cell);
    }
  }
  return SlotSystem(std::move(slots));
}

// Diagnostic dump: slot_id \t tree_key \t coverage_count (per tree)
inline void write_slots(std::ostream& out, const SlotSystem& sys) {
  for (const auto& s : sys.slots()) {
    for (const auto& key : s.trees_by_coverage()) out << s.id << '\t' << key << '\t' << s.tree_coverage(key) << '\n';
  }
}

}  // namespace paradigm
