#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "paradigm/corpus.hpp"
#include "paradigm/edit_tree.hpp"

namespace paradigm {

struct Candidate {
  std::string lemma;
  std::string form;
  EditTree tree;
  std::string key;  // tree_key(tree)
};

// Set of (lemma, form, tree) triples with per-tree lemma support.
class CandidateTable {
 public:
  CandidateTable() = default;

  // Adds a triple unless an identical (lemma, form, tree) is already present.
  bool insert(std::string lemma, std::string form, EditTree tree) {
    std::string key = tree_key(tree);
    if (!index_.emplace(lemma, form, key).second) return false;
    triples_.push_back({std::move(lemma), std::move(form), std::move(tree), std::move(key)});
    dirty_ = true;
    return true;
  }

  // Sorts triples by (lemma, form, key) and recomputes tree_counts.
  void finalize() {
    std::sort(triples_.begin(), triples_.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.lemma, a.form, a.key) < std::tie(b.lemma, b.form, b.key);
    });
    std::map<std::string, std::set<std::string>> support;
    for (const auto& t : triples_) support[t.key].insert(t.lemma);
    tree_counts_.clear();
    for (const auto& [key, lemmas] : support) tree_counts_[key] = lemmas.size();
    dirty_ = false;
  }

  // Keeps only the triples satisfying `keep`, then re-finalizes.
  template <typename Pred>
  void retain(Pred keep) {
    std::vector<Candidate> kept;
    index_.clear();
    for (auto& t : triples_) {
      if (keep(t)) {
        index_.emplace(t.lemma, t.form, t.key);
        kept.push_back(std::move(t));
      }
    }
    triples_ = std::move(kept);
    finalize();
  }

  const std::vector<Candidate>& triples() const {
    ensure_final();
    return triples_;
  }

  const std::map<std::string, std::size_t>& tree_counts() const {
    ensure_final();
    return tree_counts_;
  }

  std::size_t tree_count(const std::string& key) const {
    ensure_final();
    auto it = tree_counts_.find(key);
    return it == tree_counts_.end() ? 0 : it->second;
  }

  // Distinct retained trees ordered by key.
  std::vector<EditTree> trees() const {
    ensure_final();
    std::map<std::string, const EditTree*> seen;
    for (const auto& t : triples_) seen.emplace(t.key, &t.tree);
    std::vector<EditTree> out;
    out.reserve(seen.size());
    for (const auto& [key, tree] : seen) out.push_back(*tree);
    return out;
  }

  std::set<std::string> lemmas() const {
    std::set<std::string> out;
    for (const auto& t : triples_) out.insert(t.lemma);
    return out;
  }

  bool empty() const noexcept { return triples_.empty(); }
  std::size_t size() const noexcept { return triples_.size(); }

 private:
  void ensure_final() const {
    if (dirty_) throw Error("CandidateTable used before finalize()");
  }

  std::vector<Candidate> triples_;
  std::set<std::tuple<std::string, std::string, std::string>> index_;
  std::map<std::string, std::size_t> tree_counts_;
  bool dirty_ = false;
};

struct RetrievalConfig {
  std::size_t min_lcs_abs = 3;
  double min_lcs_ratio = 0.5;
  std::size_t tree_min_lemmas = 2;
  std::size_t pseudo_lemma_min_hits = 2;
  long max_form_len_delta = 6;  // negative means unbounded

  void validate() const {
    if (min_lcs_abs < 1) throw Error("retrieval.min_lcs_abs must be >= 1");
    if (!(min_lcs_ratio > 0.0 && min_lcs_ratio <= 1.0)) throw Error("retrieval.min_lcs_ratio must be in (0, 1]");
    if (tree_min_lemmas < 1) throw Error("retrieval.tree_min_lemmas must be >= 1");
    if (pseudo_lemma_min_hits < 1) throw Error("retrieval.pseudo_lemma_min_hits must be >= 1");
    if (max_form_len_delta == 0) throw Error("retrieval.max_form_len_delta must be >= 1 (or negative for unbounded)");
  }
};

// Minimum LCS length for a word to count as a candidate form of a lemma of
// `lemma_len` code points.
inline std::size_t min_lcs_length(const RetrievalConfig& cfg, std::size_t lemma_len) {
  const auto by_ratio = static_cast<std::size_t>(std::ceil(cfg.min_lcs_ratio * static_cast<double>(lemma_len)));
  return std::max(cfg.min_lcs_abs, by_ratio);
}

// Step 1: harvest (lemma, word, tree) triples whose LCS clears the threshold,
// then drop trees supported by fewer than tree_min_lemmas lemmas.
inline CandidateTable retrieve_candidates(const Corpus& corpus, const LemmaList& lemmas, const RetrievalConfig& cfg) {
  cfg.validate();
  struct Word {
    const std::string* text;
    std::u32string chars;
  };
  std::map<std::size_t, std::vector<Word>> words;
  for (const auto& [len, group] : corpus.words_by_length()) {
    auto& bucket = words[len];
    for (const auto& w : group) bucket.push_back({&w, utf8::decode(w)});
  }

  CandidateTable table;
  for (const auto& lemma : lemmas) {
    const std::u32string chars = utf8::decode(lemma);
    const std::size_t need = min_lcs_length(cfg, chars.size());
    auto first = words.begin();
    auto last = words.end();
    if (cfg.max_form_len_delta >= 0) {
      const auto delta = static_cast<std::size_t>(cfg.max_form_len_delta);
      first = words.lower_bound(chars.size() > delta ? chars.size() - delta : 0);
      last = words.upper_bound(chars.size() + delta);
    }
    for (auto it = first; it != last; ++it) {
      for (const auto& word : it->second) {
        if (longest_common_substring(chars, word.chars).k < need) continue;
        table.insert(lemma, *word.text, build_tree(chars, word.chars));
      }
    }
  }
  table.finalize();
  const auto counts = table.tree_counts();
  table.retain([&](const Candidate& c) { return counts.at(c.key) >= cfg.tree_min_lemmas; });
  return table;
}

struct AdditionalLemmas {
  std::vector<std::string> pseudo_lemmas;  // sorted
  CandidateTable augmented;
};

// Step 2: a corpus word outside the lemma list becomes a pseudo-lemma when at
// least pseudo_lemma_min_hits distinct retained trees map it to attested words.
inline AdditionalLemmas retrieve_additional_lemmas(const Corpus& corpus, const CandidateTable& table,
                                                   const LemmaList& lemmas, const RetrievalConfig& cfg) {
  cfg.validate();
  AdditionalLemmas result{{}, table};
  const auto trees = table.trees();
  if (trees.size() < cfg.pseudo_lemma_min_hits) return result;

  for (const auto& [word, count] : corpus.vocab()) {
    if (lemmas.contains(word)) continue;
    const std::u32string chars = utf8::decode(word);
    std::vector<std::pair<std::string, const EditTree*>> hits;
    for (const auto& tree : trees) {
      auto form = apply_tree(tree, std::u32string_view(chars));
      if (!form) continue;
      std::string encoded = utf8::encode(*form);
      if (corpus.contains(encoded)) hits.emplace_back(std::move(encoded), &tree);
    }
    if (hits.size() < cfg.pseudo_lemma_min_hits) continue;
    result.pseudo_lemmas.push_back(word);
    for (auto& [form, tree] : hits) result.augmented.insert(word, std::move(form), *tree);
  }
  result.augmented.finalize();
  return result;
}

// Diagnostic dump: lemma \t form \t tree_key \t count
inline void write_candidates(std::ostream& out, const CandidateTable& table) {
  for (const auto& t : table.triples()) {
    out << t.lemma << '\t' << t.form << '\t' << t.key << '\t' << table.tree_count(t.key) << '\n';
  }
}

}  // namespace paradigm
