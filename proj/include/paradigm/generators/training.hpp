#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "paradigm/dataset.hpp"
#include "paradigm/generators/hyperparams.hpp"
#include "paradigm/generators/model.hpp"
#include "paradigm/nn/optim.hpp"

namespace paradigm {

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;      // mean per target symbol
  double accuracy = 0.0;  // dev accuracy, or training accuracy when dev is empty
};

struct TrainingResult {
  std::unique_ptr<InflectionModel> model;  // best checkpoint
  std::vector<EpochRecord> log;
  TrainConfig config;
  int best_epoch = 0;
  double best_accuracy = 0.0;
  bool scored_on_dev = false;
};

// Exact-match accuracy of greedy decoding.
inline double decode_accuracy(const InflectionModel& model, const std::vector<InflectionExample>& examples, int beam = 1) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& e : examples) {
    if (model.generate(e.lemma, e.slot, beam) == e.form) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

inline int max_slot(const DataSplit& splits) {
  int n = 0;
  for (const auto* part : {&splits.train, &splits.dev, &splits.test}) {
    for (const auto& e : *part) n = std::max(n, e.slot);
  }
  return n;
}

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch training with teacher forcing. After every epoch the model is
// scored (dev accuracy, or training accuracy without a dev set); training
// stops once the best score is `patience` epochs old and the best checkpoint
// is returned.
inline TrainingResult train(ModelKind kind, const DataSplit& splits, const TrainConfig& config, std::uint64_t seed,
                            const EpochCallback& on_epoch = {}) {
  if (splits.train.empty()) throw Error("train: the training set is empty");
  if (config.batch < 1 || config.epochs < 1 || config.patience < 1) throw Error("train: batch, epochs and patience must be >= 1");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw Error("train: dropout must be in [0, 1)");

  TrainingResult result;
  result.config = config;
  const int slots = std::max(1, max_slot(splits));
  auto vocab = CharVocab::from_examples(splits.train, slots);
  const ModelDims dims{config.embedding, config.hidden, config.hidden};
  result.model = std::make_unique<InflectionModel>(kind, std::move(vocab), dims, seed);
  InflectionModel& model = *result.model;

  struct Prepared {
    std::u32string lemma;
    int slot;
    std::u32string form;
  };
  std::vector<Prepared> data;
  std::size_t symbols = 0;
  for (const auto& e : splits.train) {
    data.push_back({utf8::decode(e.lemma), e.slot, utf8::decode(e.form)});
    symbols += data.back().form.size() + 1;
  }

  auto optimizer = nn::make_optimizer(config.optimizer, config.learning_rate);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  nn::EarlyStopping stopper(config.patience);
  std::vector<nn::Matrix> best = model.params().snapshot();
  result.scored_on_dev = !splits.dev.empty();
  const auto& scoring = result.scored_on_dev ? splits.dev : splits.train;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch));
      model.params().zero_grad();
      for (std::size_t k = start; k < stop; ++k) {
        const auto& ex = data[order[k]];
        const double l = model.loss(ex.lemma, ex.slot, ex.form, true, config.dropout, &rng);
        if (!std::isfinite(l)) {
          throw Error("train: non-finite loss at epoch " + std::to_string(epoch) + " on " + utf8::encode(ex.lemma) +
                      " -> " + utf8::encode(ex.form));
        }
        total += l;
      }
      model.params().scale_grad(1.0 / static_cast<double>(stop - start));
      if (config.clip_norm > 0.0) model.params().clip_grad_norm(config.clip_norm);
      optimizer->step(model.params());
    }
    EpochRecord record{epoch, total / static_cast<double>(symbols), decode_accuracy(model, scoring)};
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);
    if (stopper.update(epoch, record.accuracy)) best = model.params().snapshot();
    if (stopper.should_stop(epoch)) break;
  }
  model.params().restore(best);
  result.best_epoch = stopper.best_epoch();
  result.best_accuracy = stopper.best();
  return result;
}

struct SelectionResult {
  TrainingResult chosen;
  std::string chosen_label;                 // "seq2seq", "S" or "V"
  std::vector<std::pair<std::string, double>> candidates;  // label -> best accuracy
};

// Trains the requested variants and keeps the one with the higher best
// accuracy (ties go to S). For seq2seq there is a single configuration. When
// S and V resolve to the same configuration it is trained once.
inline SelectionResult train_selected(ModelKind kind, const DataSplit& splits, std::optional<PolicyMode> mode,
                                      std::uint64_t seed, const std::function<void(TrainConfig&)>& adjust = {},
                                      const std::function<void(const std::string&, const EpochRecord&)>& on_epoch = {}) {
  const std::size_t T = splits.train.size();
  std::vector<std::pair<std::string, TrainConfig>> variants;
  if (kind == ModelKind::Seq2Seq) {
    variants.emplace_back("seq2seq", resolve_hyperparams(PolicyMode::S, kind, T));
  } else if (mode) {
    variants.emplace_back(to_string(*mode), resolve_hyperparams(*mode, kind, T));
  } else {
    variants.emplace_back("S", resolve_hyperparams(PolicyMode::S, kind, T));
    variants.emplace_back("V", resolve_hyperparams(PolicyMode::V, kind, T));
  }
  if (adjust) {
    for (auto& [label, cfg] : variants) adjust(cfg);
  }
  if (variants.size() == 2 && variants[0].second == variants[1].second) variants.pop_back();

  SelectionResult out;
  bool have = false;
  for (auto& [label, cfg] : variants) {
    const std::string name = label;
    auto trained = train(kind, splits, cfg, seed, [&](const EpochRecord& r) {
      if (on_epoch) on_epoch(name, r);
    });
    out.candidates.emplace_back(label, trained.best_accuracy);
    if (!have || trained.best_accuracy > out.chosen.best_accuracy) {
      out.chosen = std::move(trained);
      out.chosen_label = label;
      have = true;
    }
  }
  return out;
}

// Training log: epoch \t loss \t dev_accuracy
inline void write_training_log(std::ostream& out, const std::vector<EpochRecord>& log) {
  for (const auto& r : log) out << r.epoch << '\t' << r.loss << '\t' << r.accuracy << '\n';
}

}  // namespace paradigm
