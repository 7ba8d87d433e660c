#pragma once

#include <unicode/uchar.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "paradigm/utf8.hpp"

namespace paradigm {

// Word-frequency view of a raw monolingual text. Immutable once built.
class Corpus {
 public:
  using Vocab = std::map<std::string, std::uint64_t>;

  Corpus() = default;
  Corpus(Vocab vocab, std::uint64_t total_tokens) : vocab_(std::move(vocab)), total_tokens_(total_tokens) {
    for (const auto& [word, count] : vocab_) {
      by_length_[utf8::length(word)].push_back(word);
    }
  }

  const Vocab& vocab() const noexcept { return vocab_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  bool empty() const noexcept { return vocab_.empty(); }
  std::size_t size() const noexcept { return vocab_.size(); }

  // Words grouped by length in code points, each group sorted.
  const std::map<std::size_t, std::vector<std::string>>& words_by_length() const noexcept { return by_length_; }

  bool contains(std::string_view word) const { return vocab_.find(std::string(word)) != vocab_.end(); }

  std::uint64_t count(std::string_view word) const {
    auto it = vocab_.find(std::string(word));
    return it == vocab_.end() ? 0 : it->second;
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.total_tokens_ == b.total_tokens_ && a.vocab_ == b.vocab_;
  }

 private:
  Vocab vocab_;
  std::uint64_t total_tokens_ = 0;
  std::map<std::size_t, std::vector<std::string>> by_length_;
};

inline bool contains(const Corpus& corpus, std::string_view word) { return corpus.contains(word); }

struct CorpusOptions {
  bool lowercase = false;
  std::uint64_t min_count = 1;
};

namespace detail {

// Combining marks count as word characters so that scripts with
// word-final vowel signs (Kannada, Devanagari) keep them.
inline bool is_word_char(char32_t cp) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_ND_MASK)) != 0;
}

inline bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Splits on Unicode whitespace and strips non-letter, non-digit characters
// from both ends of each token. Empty tokens are discarded.
inline std::vector<std::u32string> tokenize(std::u32string_view text, bool lowercase) {
  std::vector<std::u32string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !detail::is_space(text[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && !detail::is_word_char(text[b])) ++b;
    while (e > b && !detail::is_word_char(text[e - 1])) --e;
    if (b < e) {
      std::u32string token(text.substr(b, e - b));
      if (lowercase) {
        for (auto& cp : token) cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
      }
      tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

inline Corpus corpus_from_text(std::string_view text, const CorpusOptions& options = {}) {
  const std::u32string decoded = utf8::decode(text);
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& token : tokenize(decoded, options.lowercase)) {
    ++counts[utf8::encode(token)];
    ++total;
  }
  const std::uint64_t min_count = options.min_count == 0 ? 1 : options.min_count;
  if (min_count > 1) std::erase_if(counts, [&](const auto& kv) { return kv.second < min_count; });
  return Corpus(std::move(counts), total);
}

inline Corpus load_corpus(const std::filesystem::path& path, const CorpusOptions& options = {}) {
  return corpus_from_text(detail::read_file(path), options);
}

// Ordered, duplicate-free list of input lemmas.
class LemmaList {
 public:
  LemmaList() = default;
  explicit LemmaList(const std::vector<std::string>& words) {
    for (const auto& w : words) add(w);
  }

  bool add(const std::string& lemma) {
    if (lemma.empty() || !seen_.insert(lemma).second) return false;
    lemmas_.push_back(lemma);
    return true;
  }

  const std::vector<std::string>& items() const noexcept { return lemmas_; }
  std::size_t size() const noexcept { return lemmas_.size(); }
  bool empty() const noexcept { return lemmas_.empty(); }
  bool contains(const std::string& lemma) const { return seen_.count(lemma) != 0; }
  auto begin() const { return lemmas_.begin(); }
  auto end() const { return lemmas_.end(); }

 private:
  std::vector<std::string> lemmas_;
  std::unordered_set<std::string> seen_;
};

inline LemmaList lemmas_from_text(std::string_view text) {
  utf8::decode(text);
  LemmaList lemmas;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    lemmas.add(line.substr(first, last - first + 1));
  }
  return lemmas;
}

inline LemmaList load_lemmas(const std::filesystem::path& path) { return lemmas_from_text(detail::read_file(path)); }

}  // namespace paradigm
