#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "paradigm/dataset.hpp"
#include "paradigm/rng.hpp"

namespace testing_support {

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("paradigm-test-" + tag);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::string random_string(paradigm::Rng& rng, std::size_t max_len, const std::string& alphabet) {
  const auto len = rng.uniform_index(max_len + 1);
  std::string s;
  for (std::uint64_t i = 0; i < len; ++i) s += alphabet[rng.uniform_index(alphabet.size())];
  return s;
}

// Toy suffixation data: n distinct CV stems spread over three suffix slots.
inline std::vector<paradigm::InflectionExample> toy_suffixation(std::size_t n, std::uint64_t seed) {
  static const std::string consonants = "bdgklmnprst";
  static const std::string vowels = "aeiou";
  static const std::vector<std::string> suffixes = {"a", "it", "on"};
  paradigm::Rng rng(seed);
  std::vector<paradigm::InflectionExample> out;
  std::vector<std::string> seen;
  while (out.size() < n) {
    std::string stem;
    const auto syllables = 2 + rng.uniform_index(2);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      stem += consonants[rng.uniform_index(consonants.size())];
      stem += vowels[rng.uniform_index(vowels.size())];
    }
    stem += consonants[rng.uniform_index(consonants.size())];
    if (std::find(seen.begin(), seen.end(), stem) != seen.end()) continue;
    seen.push_back(stem);
    const int slot = static_cast<int>(out.size() % suffixes.size()) + 1;
    out.push_back({stem, slot, stem + suffixes[static_cast<std::size_t>(slot - 1)]});
  }
  return out;
}

// Suffixation where dev stems are built mostly from characters that are rare
// or absent in training, so the form has to be copied from the lemma.
inline paradigm::DataSplit rare_character_split(std::size_t train_size, std::size_t dev_size, std::uint64_t seed) {
  static const std::string common_c = "bdgklmnprst";
  static const std::string vowels = "aeiou";
  static const std::string rare = "cfhjqvwxyz";
  static const std::vector<std::string> suffixes = {"a", "it"};
  paradigm::Rng rng(seed);
  paradigm::DataSplit split;
  const auto make = [&](bool rare_heavy, std::size_t index) {
    std::string stem;
    const auto syllables = 2 + rng.uniform_index(2);
    for (std::uint64_t s = 0; s < syllables; ++s) {
      const bool use_rare = rare_heavy ? rng.bernoulli(0.7) : rng.bernoulli(0.03);
      stem += use_rare ? rare[rng.uniform_index(rare.size())] : common_c[rng.uniform_index(common_c.size())];
      stem += vowels[rng.uniform_index(vowels.size())];
    }
    stem += rare_heavy ? rare[rng.uniform_index(rare.size())] : common_c[rng.uniform_index(common_c.size())];
    const int slot = static_cast<int>(index % suffixes.size()) + 1;
    return paradigm::InflectionExample{stem, slot, stem + suffixes[static_cast<std::size_t>(slot - 1)]};
  };
  for (std::size_t i = 0; i < train_size; ++i) split.train.push_back(make(false, i));
  for (std::size_t i = 0; i < dev_size; ++i) split.dev.push_back(make(true, i));
  return split;
}

}  // namespace testing_support
