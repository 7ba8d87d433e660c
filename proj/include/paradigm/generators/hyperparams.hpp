#pragma once

#include <cstddef>
#include <string>

#include "paradigm/nn/optim.hpp"

namespace paradigm {

enum class ModelKind { Seq2Seq, PointerGenerator };
enum class PolicyMode { S, V };

inline std::string to_string(ModelKind kind) { return kind == ModelKind::Seq2Seq ? "seq2seq" : "pgen"; }
inline std::string to_string(PolicyMode mode) { return mode == PolicyMode::S ? "S" : "V"; }

struct TrainConfig {
  int embedding = 300;
  int hidden = 100;
  int batch = 20;
  int epochs = 60;
  int patience = 10;
  double dropout = 0.0;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double clip_norm = 0.0;  // 0 disables clipping

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Attention seq2seq: one configuration for every language.
inline TrainConfig seq2seq_config() {
  TrainConfig c;
  c.embedding = 300;
  c.hidden = 100;
  c.batch = 20;
  c.epochs = 100;
  c.patience = 10;
  c.dropout = 0.0;
  c.optimizer = nn::OptimizerKind::Adadelta;
  c.learning_rate = 1.0;
  return c;
}

// Pointer-generator, single configuration. Updates after every example.
inline TrainConfig pgen_s_config() {
  TrainConfig c;
  c.embedding = 300;
  c.hidden = 100;
  c.batch = 1;
  c.epochs = 60;
  c.patience = 10;
  c.dropout = 0.3;
  c.optimizer = nn::OptimizerKind::Adam;
  c.learning_rate = 1e-3;
  return c;
}

// Pointer-generator, sized by the number of training examples T.
inline TrainConfig pgen_v_config(std::size_t train_size) {
  TrainConfig c = pgen_s_config();
  if (train_size <= 100) {
    c.embedding = 100;
    c.dropout = 0.5;
    c.epochs = 300;
    c.patience = 100;
  } else if (train_size <= 500) {
    c.embedding = 100;
    c.dropout = 0.5;
    c.epochs = 80;
    c.patience = 20;
  }
  return c;
}

inline TrainConfig resolve_hyperparams(PolicyMode mode, ModelKind kind, std::size_t train_size) {
  if (kind == ModelKind::Seq2Seq) return seq2seq_config();
  return mode == PolicyMode::S ? pgen_s_config() : pgen_v_config(train_size);
}

}  // namespace paradigm
