#pragma once

#include <string>
#include <vector>

#include "paradigm/nn/tensor.hpp"

namespace paradigm::nn {

// y = W x + b
class Dense {
 public:
  Dense() = default;
  Dense(ParamStore& store, const std::string& name, Index in, Index out, Rng& rng)
      : w_(&store.add(name + ".w", out, in, Init::Uniform, rng)), b_(&store.add(name + ".b", out, 1, Init::Zero, rng)) {}

  Index in_dim() const { return w_->value.cols(); }
  Index out_dim() const { return w_->value.rows(); }

  Vector forward(const Vector& x) const { return w_->value * x + b_->value.col(0); }

  // Accumulates parameter gradients and returns d loss / d x.
  Vector backward(const Vector& x, const Vector& dy) {
    w_->grad.noalias() += dy * x.transpose();
    b_->grad.col(0) += dy;
    return w_->value.transpose() * dy;
  }

  // Column-batched form: X is in x T, DY is out x T.
  Matrix backward(const Matrix& X, const Matrix& DY) {
    w_->grad.noalias() += DY * X.transpose();
    b_->grad.col(0) += DY.rowwise().sum();
    return w_->value.transpose() * DY;
  }

  Param& weight() { return *w_; }
  Param& bias() { return *b_; }

 private:
  Param* w_ = nullptr;
  Param* b_ = nullptr;
};

// One column per symbol.
class Embedding {
 public:
  Embedding() = default;
  Embedding(ParamStore& store, const std::string& name, Index symbols, Index dim, Rng& rng)
      : table_(&store.add(name, dim, symbols, Init::Uniform, rng)) {}

  Index dim() const { return table_->value.rows(); }
  Index symbols() const { return table_->value.cols(); }

  Vector lookup(Index id) const { return table_->value.col(id); }
  void backward(Index id, const Vector& dy) { table_->grad.col(id) += dy; }

 private:
  Param* table_ = nullptr;
};

struct LstmState {
  Vector h;
  Vector c;
};

struct LstmStepCache {
  Vector input;  // [x; h_prev]
  Vector i, f, g, o;
  Vector c_prev;
  Vector tanh_c;
};

// Gates stacked as [input; forget; candidate; output] over the concatenated
// input [x; h_prev]. Forget-gate bias starts at 1.
class LstmCell {
 public:
  LstmCell() = default;
  LstmCell(ParamStore& store, const std::string& name, Index input_dim, Index hidden_dim, Rng& rng)
      : input_dim_(input_dim),
        hidden_(hidden_dim),
        w_(&store.add(name + ".w", 4 * hidden_dim, input_dim + hidden_dim, Init::Uniform, rng)),
        b_(&store.add(name + ".b", 4 * hidden_dim, 1, Init::Zero, rng)) {
    b_->value.block(hidden_dim, 0, hidden_dim, 1).setOnes();
  }

  Index input_dim() const { return input_dim_; }
  Index hidden_dim() const { return hidden_; }

  LstmState zero_state() const { return {Vector::Zero(hidden_), Vector::Zero(hidden_)}; }

  LstmState step(const Vector& x, const LstmState& prev, LstmStepCache* cache = nullptr) const {
    if (x.size() != input_dim_) {
      throw Error("lstm input has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(input_dim_));
    }
    Vector input(input_dim_ + hidden_);
    input << x, prev.h;
    const Vector z = w_->value * input + b_->value.col(0);
    const Index H = hidden_;
    Vector i = sigmoid(z.segment(0, H));
    Vector f = sigmoid(z.segment(H, H));
    Vector g = z.segment(2 * H, H).array().tanh().matrix();
    Vector o = sigmoid(z.segment(3 * H, H));
    LstmState next;
    next.c = f.cwiseProduct(prev.c) + i.cwiseProduct(g);
    Vector tanh_c = next.c.array().tanh().matrix();
    next.h = o.cwiseProduct(tanh_c);
    if (cache) {
      cache->input = std::move(input);
      cache->i = std::move(i);
      cache->f = std::move(f);
      cache->g = std::move(g);
      cache->o = std::move(o);
      cache->c_prev = prev.c;
      cache->tanh_c = std::move(tanh_c);
    }
    return next;
  }

  // Backpropagates one step. Returns the pre-activation gradient dz (4H) for
  // accumulate(); writes d input and d previous state.
  Vector backward_step(const LstmStepCache& s, const Vector& dh, const Vector& dc, Vector& dx, LstmState& dprev) const {
    const Index H = hidden_;
    const Vector dc_total = dc + dh.cwiseProduct(s.o).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix());
    Vector dz(4 * H);
    dz.segment(0, H) = dc_total.cwiseProduct(s.g).cwiseProduct((s.i.array() * (1.0 - s.i.array())).matrix());
    dz.segment(H, H) = dc_total.cwiseProduct(s.c_prev).cwiseProduct((s.f.array() * (1.0 - s.f.array())).matrix());
    dz.segment(2 * H, H) = dc_total.cwiseProduct(s.i).cwiseProduct((1.0 - s.g.array().square()).matrix());
    dz.segment(3 * H, H) = dh.cwiseProduct(s.tanh_c).cwiseProduct((s.o.array() * (1.0 - s.o.array())).matrix());
    const Vector dinput = w_->value.transpose() * dz;
    dx = dinput.segment(0, input_dim_);
    dprev.h = dinput.segment(input_dim_, H);
    dprev.c = dc_total.cwiseProduct(s.f);
    return dz;
  }

  // Weight gradients for a batch of steps: inputs columns [x; h_prev], dz columns.
  void accumulate(const Matrix& inputs, const Matrix& dz) {
    w_->grad.noalias() += dz * inputs.transpose();
    b_->grad.col(0) += dz.rowwise().sum();
  }

  Param& weight() { return *w_; }
  Param& bias() { return *b_; }

 private:
  Index input_dim_ = 0;
  Index hidden_ = 0;
  Param* w_ = nullptr;
  Param* b_ = nullptr;
};

struct SequenceCache {
  std::vector<LstmStepCache> steps;  // in processing order
  bool reverse = false;
};

// Runs the cell over the columns of xs (right to left when reverse); output
// column t is the hidden state after reading column t.
inline Matrix lstm_forward(const LstmCell& cell, const Matrix& xs, const LstmState& init, bool reverse,
                           SequenceCache* cache = nullptr, LstmState* final_state = nullptr) {
  const Index T = xs.cols();
  Matrix out(cell.hidden_dim(), T);
  if (cache) {
    cache->steps.assign(static_cast<std::size_t>(T), {});
    cache->reverse = reverse;
  }
  LstmState state = init;
  for (Index n = 0; n < T; ++n) {
    const Index t = reverse ? T - 1 - n : n;
    state = cell.step(xs.col(t), state, cache ? &cache->steps[static_cast<std::size_t>(n)] : nullptr);
    out.col(t) = state.h;
  }
  if (final_state) *final_state = state;
  return out;
}

// Backward pass of lstm_forward. d_outputs holds gradients of the output
// columns, d_final those of the final state. Returns d xs.
inline Matrix lstm_backward(LstmCell& cell, const SequenceCache& cache, const Matrix& d_outputs,
                            const LstmState& d_final, LstmState* d_init = nullptr) {
  const Index T = static_cast<Index>(cache.steps.size());
  const Index H = cell.hidden_dim();
  Matrix dxs(cell.input_dim(), T);
  Matrix inputs(cell.input_dim() + H, T);
  Matrix dzs(4 * H, T);
  Vector dh = d_final.h.size() ? d_final.h : Vector::Zero(H);
  Vector dc = d_final.c.size() ? d_final.c : Vector::Zero(H);
  for (Index n = T - 1; n >= 0; --n) {
    const Index t = cache.reverse ? T - 1 - n : n;
    const auto& step = cache.steps[static_cast<std::size_t>(n)];
    dh += d_outputs.col(t);
    Vector dx;
    LstmState dprev;
    dzs.col(n) = cell.backward_step(step, dh, dc, dx, dprev);
    inputs.col(n) = step.input;
    dxs.col(t) = dx;
    dh = std::move(dprev.h);
    dc = std::move(dprev.c);
  }
  if (T > 0) cell.accumulate(inputs, dzs);
  if (d_init) *d_init = {dh, dc};
  return dxs;
}

struct BiLstmCache {
  SequenceCache fwd;
  SequenceCache bwd;
};

// Bidirectional encoder: output column t = [forward h_t; backward h_t].
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParamStore& store, const std::string& name, Index input_dim, Index hidden_dim, Rng& rng)
      : fwd_(store, name + ".fwd", input_dim, hidden_dim, rng), bwd_(store, name + ".bwd", input_dim, hidden_dim, rng) {}

  Index hidden_dim() const { return fwd_.hidden_dim(); }
  Index output_dim() const { return 2 * fwd_.hidden_dim(); }

  Matrix forward(const Matrix& xs, BiLstmCache* cache = nullptr) const {
    const Index H = hidden_dim();
    Matrix out(2 * H, xs.cols());
    out.topRows(H) = lstm_forward(fwd_, xs, fwd_.zero_state(), false, cache ? &cache->fwd : nullptr);
    out.bottomRows(H) = lstm_forward(bwd_, xs, bwd_.zero_state(), true, cache ? &cache->bwd : nullptr);
    return out;
  }

  // Summary vector [forward h at last position; backward h at first position].
  static Vector summary(const Matrix& outputs) {
    const Index H = outputs.rows() / 2;
    Vector s(2 * H);
    s << outputs.col(outputs.cols() - 1).head(H), outputs.col(0).tail(H);
    return s;
  }

  // Adds the gradient of summary() into the output gradients.
  static void add_summary_grad(Matrix& d_outputs, const Vector& d_summary) {
    const Index H = d_outputs.rows() / 2;
    d_outputs.col(d_outputs.cols() - 1).head(H) += d_summary.head(H);
    d_outputs.col(0).tail(H) += d_summary.tail(H);
  }

  Matrix backward(const BiLstmCache& cache, const Matrix& d_outputs) {
    const Index H = hidden_dim();
    Matrix dxs = lstm_backward(fwd_, cache.fwd, d_outputs.topRows(H), {});
    dxs += lstm_backward(bwd_, cache.bwd, d_outputs.bottomRows(H), {});
    return dxs;
  }

 private:
  LstmCell fwd_;
  LstmCell bwd_;
};

struct AttentionCache {
  Vector query;
  Matrix hidden;   // tanh pre-scores, A x T
  Vector weights;  // T
};

// Additive attention: score_t = v . tanh(W_k key_t + W_q query + b).
// Keys are projected once per sequence with project_keys().
class AdditiveAttention {
 public:
  AdditiveAttention() = default;
  AdditiveAttention(ParamStore& store, const std::string& name, Index key_dim, Index query_dim, Index attn_dim, Rng& rng)
      : wk_(&store.add(name + ".wk", attn_dim, key_dim, Init::Uniform, rng)),
        wq_(&store.add(name + ".wq", attn_dim, query_dim, Init::Uniform, rng)),
        b_(&store.add(name + ".b", attn_dim, 1, Init::Zero, rng)),
        v_(&store.add(name + ".v", attn_dim, 1, Init::Uniform, rng)) {}

  Matrix project_keys(const Matrix& keys) const { return wk_->value * keys; }

  // Returns the context vector; weights are written to `weights`.
  Vector attend(const Vector& query, const Matrix& keys, const Matrix& projected, Vector& weights,
                AttentionCache* cache = nullptr) const {
    if (keys.cols() == 0) throw Error("attention over an empty key sequence");
    const Vector q = wq_->value * query + b_->value.col(0);
    Matrix hidden = (projected.colwise() + q).array().tanh().matrix();
    const Vector scores = hidden.transpose() * v_->value.col(0);
    weights = softmax(scores);
    Vector context = keys * weights;
    if (cache) {
      cache->query = query;
      cache->hidden = std::move(hidden);
      cache->weights = weights;
    }
    return context;
  }

  // Gradients for one attend() call. d_weights may be empty (no direct use of
  // the weights). Accumulates into d_keys and d_projected; returns d query.
  Vector backward(const AttentionCache& cache, const Matrix& keys, const Vector& d_context, const Vector& d_weights,
                  Matrix& d_keys, Matrix& d_projected) {
    const Vector& a = cache.weights;
    Vector da = keys.transpose() * d_context;
    if (d_weights.size()) da += d_weights;
    d_keys.noalias() += d_context * a.transpose();
    const Vector dscores = a.cwiseProduct((da.array() - a.dot(da)).matrix());
    v_->grad.col(0).noalias() += cache.hidden * dscores;
    const Matrix dpre =
        ((v_->value.col(0) * dscores.transpose()).array() * (1.0 - cache.hidden.array().square())).matrix();
    d_projected += dpre;
    const Vector dq = dpre.rowwise().sum();
    b_->grad.col(0) += dq;
    wq_->grad.noalias() += dq * cache.query.transpose();
    return wq_->value.transpose() * dq;
  }

  // Backward of project_keys(); adds into d_keys.
  void backward_keys(const Matrix& keys, const Matrix& d_projected, Matrix& d_keys) {
    wk_->grad.noalias() += d_projected * keys.transpose();
    d_keys.noalias() += wk_->value.transpose() * d_projected;
  }

 private:
  Param* wk_ = nullptr;
  Param* wq_ = nullptr;
  Param* b_ = nullptr;
  Param* v_ = nullptr;
};

struct CopyMixture {
  Vector distribution;  // over the extended vocabulary
  double loss = 0.0;
  Vector d_logits;
  double d_gate = 0.0;  // d loss / d gate pre-activation
  Vector d_attention;
};

// Final distribution p_gen * softmax(logits) + (1 - p_gen) * copy, where the
// copy mass of symbol c is the attention summed over source positions holding
// c. Source ids may exceed the generation vocabulary (extended vocabulary).
// With target >= 0 also returns -log P(target) and its gradients.
inline CopyMixture copy_mixture(const Vector& logits, double gate_logit, const Vector& attention,
                                const std::vector<int>& source_ids, Index extended_size, Index target = -1,
                                const double* forced_p_gen = nullptr) {
  const Index V = logits.size();
  const Vector p_vocab = softmax(logits);
  const double p_gen = forced_p_gen ? *forced_p_gen : sigmoid(gate_logit);
  CopyMixture m;
  m.distribution = Vector::Zero(std::max(extended_size, V));
  m.distribution.head(V) = p_gen * p_vocab;
  Vector copy = Vector::Zero(m.distribution.size());
  for (std::size_t t = 0; t < source_ids.size(); ++t) copy(source_ids[t]) += attention(static_cast<Index>(t));
  m.distribution += (1.0 - p_gen) * copy;
  if (target < 0) return m;

  const double p = m.distribution(target);
  m.loss = -std::log(p);
  const double dp = -1.0 / p;
  const double vocab_target = target < V ? p_vocab(target) : 0.0;
  m.d_logits = Vector::Zero(V);
  if (target < V) {
    m.d_logits = -p_gen * vocab_target * p_vocab;
    m.d_logits(target) += p_gen * vocab_target;
    m.d_logits *= dp;
  }
  m.d_gate = forced_p_gen ? 0.0 : dp * (vocab_target - copy(target)) * p_gen * (1.0 - p_gen);
  m.d_attention = Vector::Zero(attention.size());
  for (std::size_t t = 0; t < source_ids.size(); ++t) {
    if (source_ids[t] == target) m.d_attention(static_cast<Index>(t)) = dp * (1.0 - p_gen);
  }
  return m;
}

}  // namespace paradigm::nn
