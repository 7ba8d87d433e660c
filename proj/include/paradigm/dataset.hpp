#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "paradigm/corpus.hpp"
#include "paradigm/rng.hpp"
#include "paradigm/slot_discovery.hpp"

namespace paradigm {

struct InflectionExample {
  std::string lemma;
  int slot = 0;
  std::string form;  // empty for test queries

  friend bool operator==(const InflectionExample&, const InflectionExample&) = default;
  friend auto operator<=>(const InflectionExample& a, const InflectionExample& b) {
    return std::tie(a.lemma, a.slot, a.form) <=> std::tie(b.lemma, b.slot, b.form);
  }
};

struct DataSplit {
  std::vector<InflectionExample> train;
  std::vector<InflectionExample> dev;
  std::vector<InflectionExample> test;
  std::vector<std::string> warnings;
};

// Attested cells go to train/dev after a seeded shuffle (dev takes the last
// floor(dev_fraction * n)); every unattested (input lemma, slot) is a test query.
inline DataSplit build_splits(const SlotSystem& sys, const LemmaList& lemmas, double dev_fraction, std::uint64_t seed) {
  if (!(dev_fraction >= 0.0 && dev_fraction < 1.0)) throw Error("dev_fraction must be in [0, 1)");
  DataSplit split;
  std::vector<InflectionExample> attested;
  std::set<std::pair<std::string, int>> filled;
  for (const auto& s : sys.slots()) {
    for (const auto& [lemma, cell] : s.coverage) {
      attested.push_back({lemma, s.id, cell.form});
      filled.emplace(lemma, s.id);
    }
  }
  std::sort(attested.begin(), attested.end());
  attested.erase(std::unique(attested.begin(), attested.end()), attested.end());
  Rng rng(seed);
  rng.shuffle(attested);
  const auto n_dev = static_cast<std::size_t>(std::floor(dev_fraction * static_cast<double>(attested.size())));
  const auto cut = attested.size() - n_dev;
  split.train.assign(attested.begin(), attested.begin() + static_cast<std::ptrdiff_t>(cut));
  split.dev.assign(attested.begin() + static_cast<std::ptrdiff_t>(cut), attested.end());

  if (sys.paradigm_size() == 0) split.warnings.push_back("paradigm size is 0: no test queries");
  for (const auto& lemma : lemmas) {
    for (const auto& s : sys.slots()) {
      if (!filled.count({lemma, s.id})) split.test.push_back({lemma, s.id, {}});
    }
  }
  return split;
}

// Train/dev: lemma \t form \t slot_id
inline void write_examples(std::ostream& out, const std::vector<InflectionExample>& examples) {
  for (const auto& e : examples) out << e.lemma << '\t' << e.form << '\t' << e.slot << '\n';
}

// Test: lemma \t slot_id
inline void write_queries(std::ostream& out, const std::vector<InflectionExample>& queries) {
  for (const auto& e : queries) out << e.lemma << '\t' << e.slot << '\n';
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

inline int parse_slot(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw Error("line " + std::to_string(line_no) + ": bad slot id '" + text + "'");
}

// Calls fn(fields, line_no) for each non-empty line.
template <typename Fn>
void for_each_tsv_line(std::istream& in, std::size_t expected_fields, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != expected_fields) {
      throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(expected_fields) +
                  " tab-separated fields, got " + std::to_string(fields.size()));
    }
    fn(fields, line_no);
  }
}

}  // namespace detail

inline std::vector<InflectionExample> read_examples(std::istream& in) {
  std::vector<InflectionExample> out;
  detail::for_each_tsv_line(in, 3, [&](const auto& f, std::size_t n) { out.push_back({f[0], detail::parse_slot(f[2], n), f[1]}); });
  return out;
}

inline std::vector<InflectionExample> read_queries(std::istream& in) {
  std::vector<InflectionExample> out;
  detail::for_each_tsv_line(in, 2, [&](const auto& f, std::size_t n) { out.push_back({f[0], detail::parse_slot(f[1], n), {}}); });
  return out;
}

}  // namespace paradigm
