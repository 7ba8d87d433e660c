#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "paradigm/dataset.hpp"

namespace paradigm {

// Exact-match accuracy of predictions (form field holds the prediction)
// against gold examples, keyed by (lemma, slot).
inline double accuracy(const std::vector<InflectionExample>& predictions, const std::vector<InflectionExample>& gold) {
  if (gold.empty()) return 0.0;
  std::map<std::pair<std::string, int>, const std::string*> predicted;
  for (const auto& p : predictions) predicted[{p.lemma, p.slot}] = &p.form;
  std::size_t correct = 0;
  for (const auto& g : gold) {
    auto it = predicted.find({g.lemma, g.slot});
    if (it == predicted.end()) {
      throw Error("no prediction for (" + g.lemma + ", " + std::to_string(g.slot) + ")");
    }
    if (*it->second == g.form) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

struct Assignment {
  std::vector<std::optional<std::size_t>> row_to_col;  // size R
  double total = 0.0;
};

// Maximum-weight injective row -> column matching with min(R, C) pairs
// (Kuhn-Munkres on the square padding, O(n^3)).
inline Assignment assignment_max(const std::vector<std::vector<double>>& scores) {
  Assignment result;
  const std::size_t rows = scores.size();
  result.row_to_col.assign(rows, std::nullopt);
  if (rows == 0) return result;
  const std::size_t cols = scores.front().size();
  for (const auto& r : scores) {
    if (r.size() != cols) throw Error("assignment_max: ragged score matrix");
    for (double v : r) {
      if (!std::isfinite(v)) throw Error("assignment_max: non-finite score");
    }
  }
  if (cols == 0) return result;

  const std::size_t n = std::max(rows, cols);
  double top = 0.0;
  for (const auto& r : scores) {
    for (double v : r) top = std::max(top, v);
  }
  // cost[i][j] = top - score, padding cells cost top (score 0)
  const auto cost = [&](std::size_t i, std::size_t j) { return (i < rows && j < cols) ? top - scores[i][j] : top; };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j] - 1;
    if (i < rows && j - 1 < cols) {
      result.row_to_col[i] = j - 1;
      result.total += scores[i][j - 1];
    }
  }
  return result;
}

namespace detail {

// Sum of hits/size over a {size: hits} map, rounded once from the exact
// rational when the common denominator fits in 64 bits.
inline double exact_fraction_sum(const std::map<std::size_t, std::size_t>& hits_by_size) {
  using u64 = std::uint64_t;
  u64 denominator = 1;
  bool exact = true;
  for (const auto& [size, hits] : hits_by_size) {
    const u64 step = static_cast<u64>(size) / std::gcd(denominator, static_cast<u64>(size));
    if (denominator > std::numeric_limits<u64>::max() / step) {
      exact = false;
      break;
    }
    denominator *= step;
  }
  u64 numerator = 0;
  for (const auto& [size, hits] : hits_by_size) {
    if (!exact) break;
    const u64 scale = denominator / size;
    if (hits != 0 && (scale > std::numeric_limits<u64>::max() / hits ||
                      numerator > std::numeric_limits<u64>::max() - hits * scale)) {
      exact = false;
      break;
    }
    numerator += hits * scale;
  }
  if (exact) return static_cast<double>(static_cast<long double>(numerator) / static_cast<long double>(denominator));
  long double sum = 0.0L;
  for (const auto& [size, hits] : hits_by_size) sum += static_cast<long double>(hits) / static_cast<long double>(size);
  return static_cast<double>(sum);
}

}  // namespace detail

// lemma x slot -> acceptable forms. Predicted tables hold one form per cell;
// gold tables may list several variants and may be partial.
template <typename SlotKey>
struct ParadigmTable {
  std::vector<std::string> lemmas;
  std::map<std::pair<std::string, SlotKey>, std::vector<std::string>> cells;

  void add(const std::string& lemma, const SlotKey& slot, const std::string& form) {
    auto& forms = cells[{lemma, slot}];
    if (forms.empty() && std::find(lemmas.begin(), lemmas.end(), lemma) == lemmas.end()) lemmas.push_back(lemma);
    if (std::find(forms.begin(), forms.end(), form) == forms.end()) forms.push_back(form);
  }

  std::set<SlotKey> slots() const {
    std::set<SlotKey> out;
    for (const auto& [key, forms] : cells) out.insert(key.second);
    return out;
  }
};

using PredictedTable = ParadigmTable<int>;
using GoldTable = ParadigmTable<std::string>;

struct BMAccReport {
  double macro = 0.0;
  double micro = 0.0;
  std::map<int, std::string> matching;          // predicted slot -> gold slot
  std::map<std::string, double> gold_accuracy;  // gold slot -> matched accuracy (0 when unmatched)
  std::size_t gold_cells = 0;
};

// Best-match accuracy: optimal injective matching of predicted slots to gold
// slots maximizing the summed per-gold-slot accuracy over lemmas in both tables.
inline BMAccReport bmacc(const PredictedTable& predicted, const GoldTable& gold) {
  if (gold.cells.empty()) throw Error("bmacc: empty gold table");
  std::set<std::string> scored(predicted.lemmas.begin(), predicted.lemmas.end());

  std::map<std::string, std::vector<std::pair<std::string, const std::vector<std::string>*>>> gold_by_slot;
  for (const auto& [key, forms] : gold.cells) {
    if (scored.count(key.first)) gold_by_slot[key.second].emplace_back(key.first, &forms);
  }
  BMAccReport report;
  if (gold_by_slot.empty()) return report;

  std::vector<std::string> gold_slots;
  for (const auto& [slot, cells] : gold_by_slot) {
    gold_slots.push_back(slot);
    report.gold_cells += cells.size();
    report.gold_accuracy[slot] = 0.0;
  }
  const auto pred_set = predicted.slots();
  const std::vector<int> pred_slots(pred_set.begin(), pred_set.end());

  std::vector<std::vector<std::size_t>> correct(pred_slots.size(), std::vector<std::size_t>(gold_slots.size(), 0));
  std::vector<std::vector<double>> fraction(pred_slots.size(), std::vector<double>(gold_slots.size(), 0.0));
  for (std::size_t p = 0; p < pred_slots.size(); ++p) {
    for (std::size_t g = 0; g < gold_slots.size(); ++g) {
      const auto& cells = gold_by_slot[gold_slots[g]];
      std::size_t hit = 0;
      for (const auto& [lemma, forms] : cells) {
        auto it = predicted.cells.find({lemma, pred_slots[p]});
        if (it == predicted.cells.end() || it->second.empty()) continue;
        if (std::find(forms->begin(), forms->end(), it->second.front()) != forms->end()) ++hit;
      }
      correct[p][g] = hit;
      fraction[p][g] = static_cast<double>(hit) / static_cast<double>(cells.size());
    }
  }

  const auto match = assignment_max(fraction);
  std::size_t micro_hits = 0;
  for (std::size_t p = 0; p < pred_slots.size(); ++p) {
    if (!match.row_to_col[p]) continue;
    const std::size_t g = *match.row_to_col[p];
    report.matching[pred_slots[p]] = gold_slots[g];
    report.gold_accuracy[gold_slots[g]] = fraction[p][g];
    micro_hits += correct[p][g];
  }
  // The macro sum is formed exactly, so tied matchings (6/9 + 0 versus
  // 5/9 + 1/9) and renamed predicted slots give bit-identical scores.
  std::map<std::size_t, std::size_t> hits_by_size;  // gold slot size -> matched hits
  for (std::size_t p = 0; p < pred_slots.size(); ++p) {
    if (!match.row_to_col[p]) continue;
    const std::size_t g = *match.row_to_col[p];
    hits_by_size[gold_by_slot[gold_slots[g]].size()] += correct[p][g];
  }
  report.macro = detail::exact_fraction_sum(hits_by_size) / static_cast<double>(gold_slots.size());
  report.micro = static_cast<double>(micro_hits) / static_cast<double>(report.gold_cells);
  return report;
}

// Gold: lemma \t form \t feature_bundle
inline GoldTable read_gold(std::istream& in) {
  GoldTable gold;
  detail::for_each_tsv_line(in, 3, [&](const auto& f, std::size_t) { gold.add(f[0], f[2], f[1]); });
  return gold;
}

// Predictions: lemma \t form \t slot_id
inline PredictedTable read_predictions(std::istream& in) {
  PredictedTable table;
  detail::for_each_tsv_line(in, 3, [&](const auto& f, std::size_t n) { table.add(f[0], detail::parse_slot(f[2], n), f[1]); });
  return table;
}

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

// Report: macro and micro BMAcc as percentages, then one line per gold slot.
inline void write_report(std::ostream& out, const BMAccReport& report) {
  out << "macro_bmacc\t" << percent(report.macro) << '\n';
  out << "micro_bmacc\t" << percent(report.micro) << '\n';
  std::map<std::string, int> matched;
  for (const auto& [pred, gold] : report.matching) matched[gold] = pred;
  for (const auto& [gold, acc] : report.gold_accuracy) {
    auto it = matched.find(gold);
    out << "slot\t" << gold << '\t' << (it == matched.end() ? std::string("-") : std::to_string(it->second)) << '\t'
        << percent(acc) << '\n';
  }
}

}  // namespace paradigm
