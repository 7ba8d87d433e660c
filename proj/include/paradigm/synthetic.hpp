#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "paradigm/corpus.hpp"
#include "paradigm/evaluation.hpp"
#include "paradigm/rng.hpp"

namespace paradigm {

// A toy suffixing language for end-to-end runs: CV-syllable stems, one
// suffix per slot, and running text holding a fixed fraction of all forms.
struct SyntheticOptions {
  std::size_t stems = 300;
  std::size_t input_lemmas = 100;
  double attested_fraction = 0.8;
  std::vector<std::string> suffixes = {"a", "it", "on"};
  std::vector<std::string> features = {"N;NOM", "N;ACC", "N;GEN"};
  std::uint64_t seed = 2020;
};

struct SyntheticLanguage {
  std::vector<std::string> stems;
  LemmaList lemmas;            // first input_lemmas stems
  std::string corpus_text;
  GoldTable gold;              // full paradigms of the input lemmas
  std::set<std::string> attested_forms;
};

inline SyntheticLanguage make_synthetic_language(const SyntheticOptions& opt) {
  if (opt.suffixes.size() != opt.features.size()) throw Error("synthetic: one feature bundle per suffix");
  if (opt.input_lemmas > opt.stems) throw Error("synthetic: more input lemmas than stems");
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  Rng rng(opt.seed);
  SyntheticLanguage lang;

  std::set<std::string> seen;
  while (lang.stems.size() < opt.stems) {
    std::string stem;
    const auto syllables = 2 + rng.uniform_index(2);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      stem += consonants[rng.uniform_index(consonants.size())];
      stem += vowels[rng.uniform_index(vowels.size())];
    }
    stem += consonants[rng.uniform_index(consonants.size())];
    if (seen.insert(stem).second) lang.stems.push_back(stem);
  }
  for (std::size_t i = 0; i < opt.input_lemmas; ++i) lang.lemmas.add(lang.stems[i]);
  for (const auto& lemma : lang.lemmas) {
    for (std::size_t k = 0; k < opt.suffixes.size(); ++k) lang.gold.add(lemma, opt.features[k], lemma + opt.suffixes[k]);
  }

  std::vector<std::string> forms;
  for (const auto& stem : lang.stems) {
    for (const auto& suffix : opt.suffixes) forms.push_back(stem + suffix);
  }
  rng.shuffle(forms);
  forms.resize(static_cast<std::size_t>(opt.attested_fraction * static_cast<double>(forms.size()) + 0.5));
  lang.attested_forms.insert(forms.begin(), forms.end());

  // Each attested form occurs one to three times among short function words.
  static const std::vector<std::string> function_words = {"ne", "so", "ti", "ku", "e", "lo"};
  std::vector<std::string> tokens;
  for (const auto& f : forms) {
    const auto reps = 1 + rng.uniform_index(3);
    for (std::uint64_t r = 0; r < reps; ++r) tokens.push_back(f);
  }
  const std::size_t content = tokens.size();
  for (std::size_t i = 0; i < content / 2; ++i) tokens.push_back(function_words[rng.uniform_index(function_words.size())]);
  rng.shuffle(tokens);

  std::string& text = lang.corpus_text;
  std::size_t in_sentence = 0;
  const auto sentence_len = [&] { return 5 + rng.uniform_index(6); };
  std::size_t target = sentence_len();
  for (const auto& tok : tokens) {
    std::string word = tok;
    if (in_sentence == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    text += word;
    if (++in_sentence == target) {
      text += ".\n";
      in_sentence = 0;
      target = sentence_len();
    } else {
      text += rng.bernoulli(0.1) ? ", " : " ";
    }
  }
  if (in_sentence) text += ".\n";
  return lang;
}

// Writes corpus.txt, lemmas.txt and gold.tsv into `dir`.
inline void write_synthetic_language(const std::filesystem::path& dir, const SyntheticLanguage& lang,
                                     const SyntheticOptions& opt) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  auto corpus = open("corpus.txt");
  corpus << lang.corpus_text;
  auto lemmas = open("lemmas.txt");
  auto gold = open("gold.tsv");
  for (const auto& lemma : lang.lemmas) {
    lemmas << lemma << '\n';
    for (std::size_t k = 0; k < opt.suffixes.size(); ++k) gold << lemma << '\t' << lemma + opt.suffixes[k] << '\t' << opt.features[k] << '\n';
  }
  if (!corpus || !lemmas || !gold) throw Error("cannot write synthetic language to " + dir.string());
}

}  // namespace paradigm
