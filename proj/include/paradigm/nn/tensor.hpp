#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "paradigm/rng.hpp"
#include "paradigm/utf8.hpp"

namespace paradigm::nn {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A trainable matrix (vectors are n x 1) with its gradient accumulator.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  Index size() const { return value.size(); }
};

enum class Init { Uniform, Zero };

// Owns all parameters of a model in registration order; addresses are stable.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  Param& add(std::string name, Index rows, Index cols, Init init, Rng& rng, double scale = 0.1) {
    for (const auto& p : params_) {
      if (p.name == name) throw Error("duplicate parameter name " + name);
    }
    Param& p = params_.emplace_back();
    p.name = std::move(name);
    p.value = Matrix::Zero(rows, cols);
    p.grad = Matrix::Zero(rows, cols);
    if (init == Init::Uniform) {
      for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) p.value(i, j) = rng.uniform(-scale, scale);
      }
    }
    return p;
  }

  Param* find(const std::string& name) {
    for (auto& p : params_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  std::vector<Param*> all() {
    std::vector<Param*> out;
    for (auto& p : params_) out.push_back(&p);
    return out;
  }

  std::vector<const Param*> all() const {
    std::vector<const Param*> out;
    for (const auto& p : params_) out.push_back(&p);
    return out;
  }

  std::size_t count() const { return params_.size(); }

  Index total_size() const {
    Index n = 0;
    for (const auto& p : params_) n += p.size();
    return n;
  }

  void zero_grad() {
    for (auto& p : params_) p.grad.setZero();
  }

  void scale_grad(double s) {
    for (auto& p : params_) p.grad *= s;
  }

  double grad_norm() const {
    double sq = 0.0;
    for (const auto& p : params_) sq += p.grad.squaredNorm();
    return std::sqrt(sq);
  }

  // Rescales gradients so their global L2 norm is at most max_norm.
  void clip_grad_norm(double max_norm) {
    const double norm = grad_norm();
    if (max_norm > 0.0 && norm > max_norm) scale_grad(max_norm / norm);
  }

  std::vector<Matrix> snapshot() const {
    std::vector<Matrix> out;
    for (const auto& p : params_) out.push_back(p.value);
    return out;
  }

  void restore(const std::vector<Matrix>& values) {
    if (values.size() != params_.size()) throw Error("snapshot does not match parameter store");
    std::size_t i = 0;
    for (auto& p : params_) p.value = values[i++];
  }

 private:
  std::deque<Param> params_;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vector sigmoid(const Vector& x) {
  return x.unaryExpr([](double v) { return sigmoid(v); });
}

inline Vector softmax(const Vector& logits) {
  const double top = logits.maxCoeff();
  Vector e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

inline Vector log_softmax(const Vector& logits) {
  const double top = logits.maxCoeff();
  const double lse = top + std::log((logits.array() - top).exp().sum());
  return (logits.array() - lse).matrix();
}

// -log softmax(logits)[target]; writes d loss / d logits when requested.
inline double cross_entropy(const Vector& logits, Index target, Vector* dlogits = nullptr) {
  const Vector logp = log_softmax(logits);
  if (dlogits) {
    *dlogits = logp.array().exp().matrix();
    (*dlogits)(target) -= 1.0;
  }
  return -logp(target);
}

// Inverted-dropout mask: entries are 0 or 1/(1-rate).
inline Vector dropout_mask(Index n, double rate, Rng& rng) {
  if (rate <= 0.0) return Vector::Ones(n);
  Vector mask(n);
  const double keep = 1.0 / (1.0 - rate);
  for (Index i = 0; i < n; ++i) mask(i) = rng.bernoulli(rate) ? 0.0 : keep;
  return mask;
}

inline Vector concat(std::initializer_list<const Vector*> parts) {
  Index n = 0;
  for (const auto* p : parts) n += p->size();
  Vector out(n);
  Index at = 0;
  for (const auto* p : parts) {
    out.segment(at, p->size()) = *p;
    at += p->size();
  }
  return out;
}

}  // namespace paradigm::nn
