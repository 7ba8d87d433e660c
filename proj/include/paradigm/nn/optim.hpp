#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "paradigm/nn/tensor.hpp"

namespace paradigm::nn {

enum class OptimizerKind { Adadelta, Adam };

inline std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::Adam ? "adam" : "adadelta"; }

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual OptimizerKind kind() const = 0;
  virtual void step(ParamStore& params) = 0;
  std::size_t steps() const { return steps_; }

 protected:
  void bind(ParamStore& params, std::vector<Matrix>& slot) {
    if (!slot.empty()) {
      if (slot.size() != params.count()) throw Error("optimizer state does not match parameters");
      return;
    }
    for (const Param* p : params.all()) slot.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }

  std::size_t steps_ = 0;
};

// theta -= lr * sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
class Adadelta final : public Optimizer {
 public:
  explicit Adadelta(double lr = 1.0, double rho = 0.95, double eps = 1e-6) : lr_(lr), rho_(rho), eps_(eps) {}

  OptimizerKind kind() const override { return OptimizerKind::Adadelta; }

  void step(ParamStore& params) override {
    bind(params, square_avg_);
    bind(params, delta_avg_);
    std::size_t k = 0;
    for (Param* p : params.all()) {
      auto& sq = square_avg_[k];
      auto& acc = delta_avg_[k];
      sq = rho_ * sq.array() + (1.0 - rho_) * p->grad.array().square();
      const Matrix delta = ((acc.array() + eps_).sqrt() / (sq.array() + eps_).sqrt() * p->grad.array()).matrix();
      acc = rho_ * acc.array() + (1.0 - rho_) * delta.array().square();
      p->value -= lr_ * delta;
      ++k;
    }
    ++steps_;
  }

 private:
  double lr_, rho_, eps_;
  std::vector<Matrix> square_avg_;
  std::vector<Matrix> delta_avg_;
};

// Bias-corrected Adam.
class Adam final : public Optimizer {
 public:
  explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  OptimizerKind kind() const override { return OptimizerKind::Adam; }

  void step(ParamStore& params) override {
    bind(params, m_);
    bind(params, v_);
    ++steps_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
    std::size_t k = 0;
    for (Param* p : params.all()) {
      auto& m = m_[k];
      auto& v = v_[k];
      m = beta1_ * m + (1.0 - beta1_) * p->grad;
      v = beta2_ * v.array() + (1.0 - beta2_) * p->grad.array().square();
      p->value.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
      ++k;
    }
  }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

inline std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr) {
  if (kind == OptimizerKind::Adam) return std::make_unique<Adam>(lr);
  return std::make_unique<Adadelta>(lr);
}

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Index worst_index = -1;
  std::size_t checked = 0;
  bool passed = false;
};

// Relative error |a - n| / max(|a|, |n|, floor); the floor keeps entries whose
// true gradient is ~0 from being judged on round-off alone.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Compares analytic gradients (accumulated into Param::grad by `loss`) with
// central finite differences over every entry of `params`.
inline GradCheckReport grad_check(const std::function<double()>& loss, const std::vector<Param*>& params,
                                  double epsilon, double tolerance) {
  for (Param* p : params) p->grad.setZero();
  const double base = loss();
  if (!std::isfinite(base)) throw Error("grad_check: non-finite loss");
  std::vector<Matrix> analytic;
  for (Param* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param* p = params[k];
    for (Index i = 0; i < p->value.size(); ++i) {
      double& x = p->value.data()[i];
      const double saved = x;
      x = saved + epsilon;
      const double up = loss();
      x = saved - epsilon;
      const double down = loss();
      x = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) throw Error("grad_check: non-finite loss");
      const double numeric = (up - down) / (2.0 * epsilon);
      const double err = relative_error(analytic[k].data()[i], numeric);
      ++report.checked;
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_parameter = p->name;
        report.worst_index = i;
      }
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) params[k]->grad = analytic[k];
  report.passed = report.max_relative_error < tolerance;
  return report;
}

// Patience-based stopping on a score to maximize; improvement must be strict.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Records the epoch's score; true when it is a new best.
  bool update(int epoch, double score) {
    if (score > best_) {
      best_ = score;
      best_epoch_ = epoch;
      return true;
    }
    return false;
  }

  bool should_stop(int epoch) const { return best_epoch_ >= 0 && epoch - best_epoch_ >= patience_; }
  double best() const { return best_; }
  int best_epoch() const { return best_epoch_; }

 private:
  int patience_;
  double best_ = -std::numeric_limits<double>::infinity();
  int best_epoch_ = -1;
};

}  // namespace paradigm::nn
