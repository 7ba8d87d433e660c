// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "paradigm/evaluation.hpp"
#include "paradigm/generators/hyperparams.hpp"
#include "paradigm/generators/training.hpp"
#include "paradigm/nn/layers.hpp"
#include "paradigm/nn/optim.hpp"
#include "paradigm/pipeline.hpp"
#include "paradigm/synthetic.hpp"
#include "support.hpp"

using namespace paradigm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::u32string random_word(Rng& rng, std::size_t max_len, std::size_t alphabet) {
  std::u32string s(rng.uniform_index(max_len + 1), U'a');
  for (auto& c : s) c = U'a' + static_cast<char32_t>(rng.uniform_index(alphabet));
  return s;
}

// 1. Edit-tree round trip on random pairs.
Outcome edit_tree_round_trip() {
  const auto start = Clock::now();
  Rng rng(1);
  std::size_t failures = 0;
  for (int n = 0; n < 10000; ++n) {
    const std::u32string lemma = random_word(rng, 12, 5), form = random_word(rng, 12, 5);
    const auto out = apply_tree(build_tree(lemma, form), lemma);
    if (!out || *out != form) ++failures;
  }
  const double s = seconds_since(start);
  return {failures == 0 && s < 5.0, fmt("%.0f failures in 10000 pairs, %.2f s (limit 5 s)", double(failures), s)};
}

// 2. LCS against brute force on every pair up to length 6 over {a,b,c}.
Outcome lcs_exhaustive() {
  const auto start = Clock::now();
  std::vector<std::u32string> words = {U""};
  for (std::size_t len = 1, from = 0; len <= 6; ++len) {
    const std::size_t to = words.size();
    for (std::size_t w = from; w < to; ++w) {
      for (char32_t c : {U'a', U'b', U'c'}) words.push_back(words[w] + c);
    }
    from = to;
  }
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& a : words) {
    for (const auto& b : words) {
      ++pairs;
      if (!(longest_common_substring(a, b) == oracle::brute_lcs(a, b))) ++mismatches;
    }
  }
  const double s = seconds_since(start);
  return {mismatches == 0 && s < 30.0,
          fmt("%.0f mismatches in %.0f pairs, %.2f s (limit 30 s)", double(mismatches), double(pairs), s)};
}

// 3. Assignment against permutation brute force.
Outcome assignment_oracle() {
  Rng rng(3);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const auto rows = 1 + rng.uniform_index(6), cols = 1 + rng.uniform_index(6);
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (auto& r : m) {
      for (auto& v : r) v = rng.uniform();
    }
    worst = std::max(worst, std::abs(assignment_max(m).total - oracle::brute_assignment(m)));
  }
  return {worst <= 1e-9, fmt("max |difference| %.3g over 200 matrices (tolerance 1e-9)", worst)};
}

// 4. BMAcc: renaming invariance, perfect prediction, worked example.
Outcome bmacc_properties() {
  Rng rng(4);
  std::size_t violations = 0;
  for (int n = 0; n < 100; ++n) {
    const int gold_slots = 2 + static_cast<int>(rng.uniform_index(4));
    const int pred_slots = 1 + static_cast<int>(rng.uniform_index(6));
    const std::size_t lemmas = 2 + rng.uniform_index(8);
    GoldTable gold;
    PredictedTable pred, renamed, perfect;
    std::vector<int> ids(static_cast<std::size_t>(pred_slots));
    std::iota(ids.begin(), ids.end(), 1);
    rng.shuffle(ids);
    for (std::size_t l = 0; l < lemmas; ++l) {
      const std::string lemma = "l" + std::to_string(l);
      for (int g = 0; g < gold_slots; ++g) {
        const std::string form = lemma + "g" + std::to_string(g);
        gold.add(lemma, "F" + std::to_string(g), form);
        perfect.add(lemma, 10 + g, form);
      }
      for (int p = 1; p <= pred_slots; ++p) {
        const int g = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(gold_slots) + 1));
        const std::string form = lemma + "g" + std::to_string(g);  // g == gold_slots is never correct
        pred.add(lemma, p, form);
        renamed.add(lemma, 100 + ids[static_cast<std::size_t>(p - 1)], form);
      }
    }
    const auto a = bmacc(pred, gold), b = bmacc(renamed, gold), c = bmacc(perfect, gold);
    if (a.macro != b.macro || a.micro != b.micro) ++violations;
    if (c.macro != 1.0 || c.micro != 1.0) ++violations;
  }
  PredictedTable p;
  p.add("walk", 1, "walked");
  p.add("sing", 1, "singed");
  p.add("walk", 2, "walking");
  p.add("sing", 2, "singing");
  GoldTable g;
  g.add("walk", "PST", "walked");
  g.add("sing", "PST", "sang");
  g.add("walk", "PRS", "walking");
  g.add("sing", "PRS", "singing");
  const double worked = bmacc(p, g).macro;
  return {violations == 0 && worked == 0.75,
          fmt("%.0f violations over 100 random tables, worked example macro %.4f", double(violations), worked)};
}

// 5. Finite-difference gradient checks at epsilon 1e-5.
Outcome gradient_checks() {
  using namespace nn;
  constexpr double eps = 1e-5, tol = 1e-4;
  Rng rng(5);
  const auto random = [&](Index r, Index c) {
    Matrix m(r, c);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
    return m;
  };
  std::vector<std::pair<std::string, double>> errors;

  {
    ParamStore store;
    Dense dense(store, "dense", 5, 3, rng);
    Param& x = store.add("x", 5, 1, Init::Uniform, rng, 1.0);
    const Vector r = random(3, 1);
    const auto loss = [&] {
      const Vector y = dense.forward(x.value.col(0));
      x.grad.col(0) += dense.backward(x.value.col(0), r);
      return r.dot(y);
    };
    errors.emplace_back("dense", grad_check(loss, store.all(), eps, tol).max_relative_error);
  }
  {
    ParamStore store;
    LstmCell cell(store, "lstm", 3, 4, rng);
    Param& xs = store.add("xs", 3, 3, Init::Uniform, rng, 1.0);
    const Matrix r = random(4, 3);
    const auto loss = [&] {
      SequenceCache cache;
      LstmState final_state;
      const Matrix out = lstm_forward(cell, xs.value, {Vector::Zero(4), Vector::Zero(4)}, false, &cache, &final_state);
      xs.grad += lstm_backward(cell, cache, r, {Vector::Zero(4), Vector::Zero(4)}, nullptr);
      return (r.array() * out.array()).sum();
    };
    errors.emplace_back("lstm", grad_check(loss, store.all(), eps, tol).max_relative_error);
  }
  {
    ParamStore store;
    AdditiveAttention att(store, "att", 4, 3, 5, rng);
    Param& keys = store.add("keys", 4, 3, Init::Uniform, rng, 1.0);
    Param& query = store.add("query", 3, 1, Init::Uniform, rng, 1.0);
    const Vector rc = random(4, 1), rw = random(3, 1);
    const auto loss = [&] {
      AttentionCache cache;
      Vector w;
      const Matrix projected = att.project_keys(keys.value);
      const Vector ctx = att.attend(query.value.col(0), keys.value, projected, w, &cache);
      Matrix d_keys = Matrix::Zero(4, 3), d_projected = Matrix::Zero(5, 3);
      query.grad.col(0) += att.backward(cache, keys.value, rc, rw, d_keys, d_projected);
      att.backward_keys(keys.value, d_projected, d_keys);
      keys.grad += d_keys;
      return rc.dot(ctx) + rw.dot(w);
    };
    errors.emplace_back("attention", grad_check(loss, store.all(), eps, tol).max_relative_error);
  }
  {
    ParamStore store;
    Param& logits = store.add("logits", 6, 1, Init::Uniform, rng, 1.0);
    const auto loss = [&] {
      Vector d;
      const double l = cross_entropy(logits.value.col(0), 2, &d);
      logits.grad.col(0) += d;
      return l;
    };
    errors.emplace_back("cross-entropy", grad_check(loss, store.all(), eps, tol).max_relative_error);
  }
  {
    // Whole pointer-generator (encoders, one copied out-of-vocabulary
    // character, then eos) at dims E=4, H=3, A=3.
    const std::vector<InflectionExample> toy = {{"walk", 1, "walked"}, {"sing", 2, "singing"}};
    InflectionModel m(ModelKind::PointerGenerator, CharVocab::from_examples(toy, 2), ModelDims{4, 3, 3}, 5);
    for (Param* p : m.params().all()) {
      for (Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = rng.uniform(-0.5, 0.5);
    }
    const auto loss = [&] { return m.loss(U"wøk", 2, U"ø", true); };
    errors.emplace_back("pointer-generator step", grad_check(loss, m.params().all(), eps, tol).max_relative_error);
  }

  bool pass = true;
  std::ostringstream detail;
  for (const auto& [name, err] : errors) {
    pass = pass && err < tol;
    detail << name << " " << fmt("%.2g", err) << ", ";
  }
  detail << "tolerance 1e-4";
  return {pass, detail.str()};
}

// 6. Every decode step yields a distribution summing to one.
Outcome distribution_sanity() {
  Rng rng(6);
  const std::vector<InflectionExample> toy = {{"walk", 1, "walked"}, {"sing", 2, "singing"}, {"jump", 3, "jumps"}};
  const std::u32string alphabet = U"walkingsøx";
  double worst = 0.0;
  std::size_t steps = 0;
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    for (int model_seed = 0; model_seed < 5; ++model_seed) {
      InflectionModel m(kind, CharVocab::from_examples(toy, 3), ModelDims{8, 8, 8}, 60 + model_seed);
      for (nn::Param* p : m.params().all()) {
        for (nn::Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = rng.uniform(-1.0, 1.0);
      }
      for (int n = 0; n < 20; ++n) {
        std::u32string lemma;
        const auto len = rng.uniform_index(9);
        for (std::uint64_t i = 0; i < len; ++i) lemma += alphabet[rng.uniform_index(alphabet.size())];
        const auto enc = m.encode(lemma, 1 + static_cast<int>(rng.uniform_index(3)));
        auto state = m.start(enc);
        for (int s = 0; s < 5; ++s) {
          const auto out = m.decode_step(enc, state);
          worst = std::max(worst, std::abs(out.distribution.sum() - 1.0));
          if (out.distribution.minCoeff() < 0.0) worst = std::max(worst, 1.0);
          ++steps;
          state = out.next;
          state.prev = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(out.distribution.size())));
        }
      }
    }
  }
  return {steps >= 1000 && worst <= 1e-9, fmt("%.0f steps, max |sum - 1| %.3g (tolerance 1e-9)", double(steps), worst)};
}

// 7. Hyperparameter policy.
Outcome hyperparameter_policy() {
  std::vector<std::string> wrong;
  const auto expect = [&](const std::string& what, bool ok) {
    if (!ok) wrong.push_back(what);
  };
  for (auto mode : {PolicyMode::S, PolicyMode::V}) {
    for (std::size_t T : {1u, 100u, 101u, 500u, 501u, 10000u}) {
      const auto c = resolve_hyperparams(mode, ModelKind::Seq2Seq, T);
      expect("seq2seq T=" + std::to_string(T),
             c.embedding == 300 && c.hidden == 100 && c.batch == 20 && c.optimizer == nn::OptimizerKind::Adadelta &&
                 c.learning_rate == 1.0 && c.epochs == 100 && c.patience == 10);
    }
  }
  const auto s = resolve_hyperparams(PolicyMode::S, ModelKind::PointerGenerator, 50);
  expect("pgen S", s.embedding == 300 && s.hidden == 100 && s.dropout == 0.3 && s.epochs == 60 && s.patience == 10 &&
                       s.optimizer == nn::OptimizerKind::Adam && s.learning_rate == 0.001);
  const auto small = [](const TrainConfig& c) {
    return c.embedding == 100 && c.hidden == 100 && c.dropout == 0.5 && c.epochs == 300 && c.patience == 100 &&
           c.optimizer == nn::OptimizerKind::Adam && c.learning_rate == 0.001;
  };
  const auto medium = [](const TrainConfig& c) {
    return c.embedding == 100 && c.hidden == 100 && c.dropout == 0.5 && c.epochs == 80 && c.patience == 20 &&
           c.optimizer == nn::OptimizerKind::Adam && c.learning_rate == 0.001;
  };
  const auto v = [](std::size_t T) { return resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, T); };
  expect("pgen V T=100", small(v(100)));
  expect("pgen V T=101", medium(v(101)));
  expect("pgen V T=500", medium(v(500)));
  expect("pgen V T=501", v(501) == s);
  std::string detail = wrong.empty() ? "all configurations match" : "mismatch:";
  for (const auto& w : wrong) detail += " " + w;
  return {wrong.empty(), detail};
}

// 8. pgen with the S configuration memorizes 50 toy examples.
Outcome overfit_check() {
  const auto start = Clock::now();
  DataSplit split;
  split.train = testing_support::toy_suffixation(50, 8);
  const TrainConfig cfg = pgen_s_config();
  const auto result = train(ModelKind::PointerGenerator, split, cfg, 1);
  const double acc = decode_accuracy(*result.model, split.train);
  const double s = seconds_since(start);
  return {acc == 1.0 && s < 300.0,
          fmt("training accuracy %.4f after best epoch %.0f of %.0f, ", acc, result.best_epoch, double(result.log.size())) +
              fmt("%.1f s (limit 300 s)", s)};
}

// 9. End to end on the synthetic suffixing language, run twice.
Outcome end_to_end() {
  testing_support::ScratchDir dir("acceptance-e2e");
  const SyntheticOptions opt;
  write_synthetic_language(dir.path(), make_synthetic_language(opt), opt);
  PipelineConfig cfg;
  cfg.corpus = dir / "corpus.txt";
  cfg.lemmas = dir / "lemmas.txt";
  cfg.gold = dir / "gold.tsv";
  cfg.lowercase = true;
  cfg.seed = 1;

  double slowest = 0.0;
  std::vector<std::string> predictions;
  std::vector<BMAccReport> reports;
  int size = 0;
  for (const char* work : {"run1", "run2"}) {
    cfg.workdir = dir / work;
    const auto start = Clock::now();
    const auto report = cmd_pipeline(cfg);
    slowest = std::max(slowest, seconds_since(start));
    reports.push_back(report.value());
    predictions.push_back(testing_support::slurp(cfg.workdir / files::predictions));
    size = 0;
    std::istringstream slots(testing_support::slurp(cfg.workdir / files::slots));
    for (std::string line; std::getline(slots, line);) size = std::max(size, std::stoi(line));
  }
  const bool same = predictions[0] == predictions[1] && !predictions[0].empty();
  const double macro = reports[0].macro;
  return {size == 3 && macro >= 0.95 && same && slowest < 600.0,
          fmt("paradigm size %.0f, macro BMAcc %.4f, ", size, macro) +
              (same ? "predictions identical" : "predictions differ") + fmt(", %.1f s per run (limit 600 s)", slowest)};
}

// 10. Copying helps when dev stems use characters rare in training.
Outcome copy_advantage() {
  std::vector<double> pgen, s2s;
  for (std::uint64_t seed : {1, 2, 3}) {
    const DataSplit split = testing_support::rare_character_split(40, 40, 100 + seed);
    const auto p = train_selected(ModelKind::PointerGenerator, split, std::nullopt, seed);
    const auto s = train(ModelKind::Seq2Seq, split, seq2seq_config(), seed);
    pgen.push_back(decode_accuracy(*p.chosen.model, split.dev));
    s2s.push_back(decode_accuracy(*s.model, split.dev));
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[1];
  };
  const double mp = median(pgen), ms = median(s2s);
  std::ostringstream detail;
  detail << "dev accuracy pgen";
  for (double a : pgen) detail << ' ' << fmt("%.3f", a);
  detail << ", seq2seq";
  for (double a : s2s) detail << ' ' << fmt("%.3f", a);
  detail << fmt(", medians %.3f vs %.3f", mp, ms);
  return {mp >= ms, detail.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"edit-tree round trip", edit_tree_round_trip},
      {"LCS oracle", lcs_exhaustive},
      {"assignment oracle", assignment_oracle},
      {"BMAcc properties", bmacc_properties},
      {"gradient checks", gradient_checks},
      {"distribution sanity", distribution_sanity},
      {"hyperparameter policy", hyperparameter_policy},
      {"overfit check", overfit_check},
      {"end-to-end synthetic language", end_to_end},
      {"copy advantage", copy_advantage},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
