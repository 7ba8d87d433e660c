#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "paradigm/generators/hyperparams.hpp"
#include "paradigm/generators/vocab.hpp"
#include "paradigm/nn/layers.hpp"
#include "paradigm/nn/optim.hpp"

namespace paradigm {

// Symbol sequences fed to the encoders.
struct EncodedInput {
  std::vector<int> source;  // seq2seq: [bos, SLOT_k, chars, eos]; pgen: [bos, chars, eos]
  std::vector<int> tags;    // pgen only: [SLOT_k]
};

inline EncodedInput encode_input(ModelKind kind, std::u32string_view lemma, int slot, const CharVocab& vocab) {
  EncodedInput in;
  const int slot_symbol = vocab.slot_id(slot);
  in.source.push_back(CharVocab::kBos);
  if (kind == ModelKind::Seq2Seq) in.source.push_back(slot_symbol);
  for (char32_t c : lemma) in.source.push_back(vocab.char_id(c));
  in.source.push_back(CharVocab::kEos);
  if (kind == ModelKind::PointerGenerator) in.tags.push_back(slot_symbol);
  return in;
}

struct ModelDims {
  nn::Index embedding = 0;
  nn::Index hidden = 0;
  nn::Index attention = 0;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

struct EncodeCache;

struct DecodeResult {
  std::string form;
  double log_prob = 0.0;
  bool finished = false;  // ended with eos rather than the length cap
};

// Character-level encoder-decoder with additive attention. The seq2seq
// variant reads the slot token inline with the lemma; the pointer-generator
// variant has a separate tag encoder and mixes generation with copying from
// the lemma through a learned gate.
class InflectionModel {
 public:
  // Encoder-side activations for one input, reused by every decoder step.
  struct Encoding {
    std::vector<int> embed_ids;  // vocabulary ids of source symbols
    std::vector<int> copy_ids;   // extended ids (pgen): OOV characters get ids >= vocab size
    std::vector<char32_t> oov;   // characters behind the extended ids
    nn::Matrix keys;             // encoder outputs, 2H x T
    nn::Matrix projected;        // attention key projections, A x T
    nn::Vector tag;              // tag encoder summary (pgen)
    nn::Vector bridge_input;
    nn::LstmState init;
    std::vector<int> tag_ids;

    nn::Index extended_size(nn::Index vocab) const { return vocab + static_cast<nn::Index>(oov.size()); }
  };

  struct DecoderState {
    nn::LstmState lstm;
    nn::Vector context;
    int prev = CharVocab::kBos;
  };

  struct StepOutput {
    nn::Vector distribution;  // over the (extended) vocabulary
    double p_gen = 1.0;
    nn::Vector attention;
    DecoderState next;
  };

  InflectionModel(ModelKind kind, CharVocab vocab, ModelDims dims, std::uint64_t seed)
      : kind_(kind), vocab_(std::move(vocab)), dims_(dims) {
    if (dims.embedding < 1 || dims.hidden < 1 || dims.attention < 1) throw Error("model dimensions must be positive");
    Rng rng(seed);
    const auto E = dims.embedding, H = dims.hidden, A = dims.attention;
    const nn::Index V = vocab_.size();
    const nn::Index tag_dim = is_pgen() ? 2 * H : 0;
    const nn::Index features = H + 2 * H + tag_dim;
    embedding_ = nn::Embedding(params_, "embedding", V, E, rng);
    encoder_ = nn::BiLstm(params_, "encoder", E, H, rng);
    if (is_pgen()) tag_encoder_ = nn::BiLstm(params_, "tag_encoder", E, H, rng);
    bridge_ = nn::Dense(params_, "bridge", 2 * H + tag_dim, H, rng);
    decoder_ = nn::LstmCell(params_, "decoder", E + 2 * H + tag_dim, H, rng);
    attention_ = nn::AdditiveAttention(params_, "attention", 2 * H, H, A, rng);
    output_ = nn::Dense(params_, "output", features, V, rng);
    if (is_pgen()) gate_ = nn::Dense(params_, "gate", features, 1, rng);
  }

  InflectionModel(const InflectionModel&) = delete;
  InflectionModel& operator=(const InflectionModel&) = delete;

  ModelKind kind() const { return kind_; }
  bool is_pgen() const { return kind_ == ModelKind::PointerGenerator; }
  const CharVocab& vocab() const { return vocab_; }
  const ModelDims& dims() const { return dims_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // Runs the encoders. With a cache (training) dropout masks are drawn from rng.
  Encoding encode(std::u32string_view lemma, int slot, double dropout = 0.0, Rng* rng = nullptr,
                  EncodeCache* cache = nullptr) const;

  DecoderState start(const Encoding& enc) const {
    return {enc.init, nn::Vector::Zero(2 * dims_.hidden), CharVocab::kBos};
  }

  // One decoder step from `state`; the returned next state has prev unset
  // (the caller chooses the emitted symbol). forced_p_gen overrides the gate.
  StepOutput decode_step(const Encoding& enc, const DecoderState& state,
                         std::optional<double> forced_p_gen = std::nullopt) const {
    return step(enc, state, 0.0, nullptr, nullptr, forced_p_gen ? &*forced_p_gen : nullptr);
  }

  // Teacher-forced negative log-likelihood of `form` (including eos); with
  // backprop, gradients are accumulated into the parameter store.
  double loss(std::u32string_view lemma, int slot, std::u32string_view form, bool backprop, double dropout = 0.0,
              Rng* rng = nullptr);

  double loss(const InflectionExample& e, bool backprop, double dropout = 0.0, Rng* rng = nullptr) {
    return loss(utf8::decode(e.lemma), e.slot, utf8::decode(e.form), backprop, dropout, rng);
  }

  // log P(form + eos | lemma, slot)
  double log_probability(const std::string& lemma, int slot, const std::string& form) {
    return -loss(utf8::decode(lemma), slot, utf8::decode(form), false);
  }

  // Greedy (beam 1) or beam decoding, capped at 2 * |lemma| + 10 characters.
  DecodeResult decode(const std::string& lemma, int slot, int beam = 1) const;

  std::string generate(const std::string& lemma, int slot, int beam = 1) const { return decode(lemma, slot, beam).form; }

  void save(std::ostream& out) const;
  static std::unique_ptr<InflectionModel> load(std::istream& in);

 private:
  struct StepCache;

  StepOutput step(const Encoding& enc, const DecoderState& state, double dropout, Rng* rng, StepCache* cache,
                  const double* forced_p_gen) const;

  std::vector<int> target_ids(const Encoding& enc, std::u32string_view form) const {
    std::vector<int> ids;
    for (char32_t c : form) {
      int id = vocab_.char_id(c);
      if (id == CharVocab::kUnk && is_pgen()) {
        auto it = std::find(enc.oov.begin(), enc.oov.end(), c);
        if (it != enc.oov.end()) id = vocab_.size() + static_cast<int>(it - enc.oov.begin());
      }
      ids.push_back(id);
    }
    ids.push_back(CharVocab::kEos);
    return ids;
  }

  std::optional<char32_t> symbol_char(const Encoding& enc, int id) const {
    if (id >= vocab_.size()) return enc.oov[static_cast<std::size_t>(id - vocab_.size())];
    return vocab_.symbol_char(id);
  }

  int embed_id(int id) const { return id >= vocab_.size() ? CharVocab::kUnk : id; }

  ModelKind kind_;
  CharVocab vocab_;
  ModelDims dims_;
  nn::ParamStore params_;
  nn::Embedding embedding_;
  nn::BiLstm encoder_;
  nn::BiLstm tag_encoder_;
  nn::Dense bridge_;
  nn::LstmCell decoder_;
  nn::AdditiveAttention attention_;
  nn::Dense output_;
  nn::Dense gate_;
};

struct EncodeCache {
  nn::Matrix embed_masks;  // E x T
  nn::BiLstmCache encoder;
  nn::Matrix source_outputs;  // encoder outputs before dropout
  nn::Matrix key_masks;       // 2H x T
  nn::Matrix tag_masks;       // E x T_tag
  nn::BiLstmCache tag_encoder;
  nn::Matrix tag_outputs;
  nn::Vector tag_mask;  // 2H
};

struct InflectionModel::StepCache {
  int prev = 0;
  nn::Vector embed_mask;
  nn::LstmStepCache lstm;
  nn::AttentionCache attention;
  nn::Vector features;
  nn::Vector d_logits;
  double d_gate = 0.0;
  nn::Vector d_attention;
};

inline InflectionModel::Encoding InflectionModel::encode(std::u32string_view lemma, int slot, double dropout, Rng* rng,
                                                         EncodeCache* cache) const {
  const auto E = dims_.embedding, H = dims_.hidden;
  const EncodedInput input = encode_input(kind_, lemma, slot, vocab_);
  Encoding enc;
  enc.embed_ids = input.source;
  enc.tag_ids = input.tags;
  enc.copy_ids = input.source;
  if (is_pgen()) {
    // Position 0 is bos, then one position per lemma character.
    for (std::size_t k = 0; k < lemma.size(); ++k) {
      if (vocab_.has_char(lemma[k])) continue;
      auto it = std::find(enc.oov.begin(), enc.oov.end(), lemma[k]);
      if (it == enc.oov.end()) it = enc.oov.insert(enc.oov.end(), lemma[k]);
      enc.copy_ids[k + 1] = vocab_.size() + static_cast<int>(it - enc.oov.begin());
    }
  }
  const bool drop = cache && dropout > 0.0 && rng;
  const auto T = static_cast<nn::Index>(enc.embed_ids.size());
  nn::Matrix xs(E, T);
  if (cache) cache->embed_masks = nn::Matrix::Ones(E, T);
  for (nn::Index t = 0; t < T; ++t) {
    xs.col(t) = embedding_.lookup(enc.embed_ids[static_cast<std::size_t>(t)]);
    if (drop) {
      cache->embed_masks.col(t) = nn::dropout_mask(E, dropout, *rng);
      xs.col(t) = xs.col(t).cwiseProduct(cache->embed_masks.col(t));
    }
  }
  nn::Matrix outputs = encoder_.forward(xs, cache ? &cache->encoder : nullptr);
  enc.bridge_input = nn::BiLstm::summary(outputs);
  enc.keys = outputs;
  if (cache) {
    cache->source_outputs = outputs;
    cache->key_masks = nn::Matrix::Ones(2 * H, T);
    if (drop) {
      for (nn::Index t = 0; t < T; ++t) cache->key_masks.col(t) = nn::dropout_mask(2 * H, dropout, *rng);
      enc.keys = enc.keys.cwiseProduct(cache->key_masks);
    }
  }
  if (is_pgen()) {
    const auto Tt = static_cast<nn::Index>(enc.tag_ids.size());
    nn::Matrix tx(E, Tt);
    if (cache) cache->tag_masks = nn::Matrix::Ones(E, Tt);
    for (nn::Index t = 0; t < Tt; ++t) {
      tx.col(t) = embedding_.lookup(enc.tag_ids[static_cast<std::size_t>(t)]);
      if (drop) {
        cache->tag_masks.col(t) = nn::dropout_mask(E, dropout, *rng);
        tx.col(t) = tx.col(t).cwiseProduct(cache->tag_masks.col(t));
      }
    }
    nn::Matrix tag_out = tag_encoder_.forward(tx, cache ? &cache->tag_encoder : nullptr);
    enc.tag = nn::BiLstm::summary(tag_out);
    if (cache) {
      cache->tag_outputs = tag_out;
      cache->tag_mask = drop ? nn::dropout_mask(2 * H, dropout, *rng) : nn::Vector::Ones(2 * H);
      enc.tag = enc.tag.cwiseProduct(cache->tag_mask);
    }
    nn::Vector joined(enc.bridge_input.size() + enc.tag.size());
    joined << enc.bridge_input, enc.tag;
    enc.bridge_input = std::move(joined);
  }
  enc.projected = attention_.project_keys(enc.keys);
  enc.init = {bridge_.forward(enc.bridge_input).array().tanh().matrix(), nn::Vector::Zero(H)};
  return enc;
}

inline InflectionModel::StepOutput InflectionModel::step(const Encoding& enc, const DecoderState& state, double dropout,
                                                         Rng* rng, StepCache* cache, const double* forced_p_gen) const {
  const auto E = dims_.embedding;
  nn::Vector emb = embedding_.lookup(embed_id(state.prev));
  if (cache) {
    cache->prev = embed_id(state.prev);
    cache->embed_mask = (dropout > 0.0 && rng) ? nn::dropout_mask(E, dropout, *rng) : nn::Vector::Ones(E);
    emb = emb.cwiseProduct(cache->embed_mask);
  }
  const nn::Vector x = is_pgen() ? nn::concat({&emb, &state.context, &enc.tag}) : nn::concat({&emb, &state.context});
  StepOutput out;
  out.next.lstm = decoder_.step(x, state.lstm, cache ? &cache->lstm : nullptr);
  out.next.context = attention_.attend(out.next.lstm.h, enc.keys, enc.projected, out.attention,
                                       cache ? &cache->attention : nullptr);
  out.next.prev = -1;
  nn::Vector features = is_pgen() ? nn::concat({&out.next.lstm.h, &out.next.context, &enc.tag})
                                   : nn::concat({&out.next.lstm.h, &out.next.context});
  const nn::Vector logits = output_.forward(features);
  if (is_pgen()) {
    const double gate_logit = gate_.forward(features)(0);
    auto mix = nn::copy_mixture(logits, gate_logit, out.attention, enc.copy_ids, enc.extended_size(vocab_.size()), -1,
                                forced_p_gen);
    out.distribution = std::move(mix.distribution);
    out.p_gen = forced_p_gen ? *forced_p_gen : nn::sigmoid(gate_logit);
  } else {
    out.distribution = nn::softmax(logits);
    out.p_gen = 1.0;
  }
  if (cache) cache->features = std::move(features);
  return out;
}

inline double InflectionModel::loss(std::u32string_view lemma, int slot, std::u32string_view form, bool backprop,
                                    double dropout, Rng* rng) {
  const auto H = dims_.hidden, E = dims_.embedding;
  const nn::Index V = vocab_.size();
  const nn::Index tag_dim = is_pgen() ? 2 * H : 0;
  EncodeCache ecache;
  const Encoding enc = encode(lemma, slot, dropout, rng, backprop ? &ecache : nullptr);
  const std::vector<int> targets = target_ids(enc, form);
  const auto steps = static_cast<nn::Index>(targets.size());

  std::vector<StepCache> caches(backprop ? targets.size() : 0);
  DecoderState state = start(enc);
  double total = 0.0;
  for (nn::Index t = 0; t < steps; ++t) {
    const int target = targets[static_cast<std::size_t>(t)];
    StepCache* cache = backprop ? &caches[static_cast<std::size_t>(t)] : nullptr;
    if (!backprop) {
      StepOutput out = step(enc, state, 0.0, nullptr, nullptr, nullptr);
      total -= std::log(out.distribution(target));
      state = std::move(out.next);
      state.prev = target;
      continue;
    }
    StepCache& c = *cache;
    StepOutput out = step(enc, state, dropout, rng, cache, nullptr);
    const nn::Vector logits = output_.forward(c.features);
    if (is_pgen()) {
      const double gate_logit = gate_.forward(c.features)(0);
      auto mix = nn::copy_mixture(logits, gate_logit, out.attention, enc.copy_ids, enc.extended_size(V), target);
      total += mix.loss;
      c.d_logits = std::move(mix.d_logits);
      c.d_gate = mix.d_gate;
      c.d_attention = std::move(mix.d_attention);
    } else {
      total += nn::cross_entropy(logits, target, &c.d_logits);
    }
    state = std::move(out.next);
    state.prev = target;
  }
  if (!backprop) return total;

  // Output layers, batched over steps.
  const nn::Index F = output_.in_dim();
  nn::Matrix feats(F, steps), dlogits(V, steps);
  for (nn::Index t = 0; t < steps; ++t) {
    feats.col(t) = caches[static_cast<std::size_t>(t)].features;
    dlogits.col(t) = caches[static_cast<std::size_t>(t)].d_logits;
  }
  nn::Matrix dfeats = output_.backward(feats, dlogits);
  if (is_pgen()) {
    nn::Matrix dgate(1, steps);
    for (nn::Index t = 0; t < steps; ++t) dgate(0, t) = caches[static_cast<std::size_t>(t)].d_gate;
    dfeats += gate_.backward(feats, dgate);
  }

  const auto T = enc.keys.cols();
  nn::Matrix d_keys = nn::Matrix::Zero(2 * H, T);
  nn::Matrix d_projected = nn::Matrix::Zero(dims_.attention, T);
  nn::Vector d_tag = nn::Vector::Zero(tag_dim);
  nn::Vector dh_next = nn::Vector::Zero(H), dc_next = nn::Vector::Zero(H), dctx_next = nn::Vector::Zero(2 * H);
  nn::Matrix dec_inputs(decoder_.input_dim() + H, steps), dec_dz(4 * H, steps);
  for (nn::Index t = steps - 1; t >= 0; --t) {
    const StepCache& c = caches[static_cast<std::size_t>(t)];
    const nn::Vector& df = dfeats.col(t);
    nn::Vector dh = df.head(H) + dh_next;
    const nn::Vector dctx = df.segment(H, 2 * H) + dctx_next;
    if (is_pgen()) d_tag += df.tail(tag_dim);
    dh += attention_.backward(c.attention, enc.keys, dctx, is_pgen() ? c.d_attention : nn::Vector(), d_keys,
                              d_projected);
    nn::Vector dx;
    nn::LstmState dprev;
    dec_dz.col(t) = decoder_.backward_step(c.lstm, dh, dc_next, dx, dprev);
    dec_inputs.col(t) = c.lstm.input;
    embedding_.backward(c.prev, dx.head(E).cwiseProduct(c.embed_mask));
    dctx_next = dx.segment(E, 2 * H);
    if (is_pgen()) d_tag += dx.tail(tag_dim);
    dh_next = std::move(dprev.h);
    dc_next = std::move(dprev.c);
  }
  decoder_.accumulate(dec_inputs, dec_dz);

  // Bridge: h0 = tanh(W [summary; tag] + b), c0 = 0.
  const nn::Vector dpre = dh_next.cwiseProduct((1.0 - enc.init.h.array().square()).matrix());
  const nn::Vector d_bridge = bridge_.backward(enc.bridge_input, dpre);
  if (is_pgen()) d_tag += d_bridge.tail(tag_dim);

  attention_.backward_keys(enc.keys, d_projected, d_keys);
  nn::Matrix d_outputs = d_keys.cwiseProduct(ecache.key_masks);
  nn::BiLstm::add_summary_grad(d_outputs, d_bridge.head(2 * H));
  const nn::Matrix dxs = encoder_.backward(ecache.encoder, d_outputs);
  for (nn::Index t = 0; t < T; ++t) {
    embedding_.backward(enc.embed_ids[static_cast<std::size_t>(t)], dxs.col(t).cwiseProduct(ecache.embed_masks.col(t)));
  }

  if (is_pgen()) {
    nn::Matrix d_tag_out = nn::Matrix::Zero(2 * H, ecache.tag_outputs.cols());
    nn::BiLstm::add_summary_grad(d_tag_out, d_tag.cwiseProduct(ecache.tag_mask));
    const nn::Matrix dtx = tag_encoder_.backward(ecache.tag_encoder, d_tag_out);
    for (nn::Index t = 0; t < dtx.cols(); ++t) {
      embedding_.backward(enc.tag_ids[static_cast<std::size_t>(t)], dtx.col(t).cwiseProduct(ecache.tag_masks.col(t)));
    }
  }
  return total;
}

inline DecodeResult InflectionModel::decode(const std::string& lemma_utf8, int slot, int beam) const {
  const std::u32string lemma = utf8::decode(lemma_utf8);
  const std::size_t cap = 2 * lemma.size() + 10;
  const Encoding enc = encode(lemma, slot);

  struct Hypothesis {
    DecoderState state;
    std::vector<int> symbols;
    double log_prob = 0.0;
    bool finished = false;
  };
  const auto to_result = [&](const Hypothesis& h) {
    DecodeResult r;
    r.log_prob = h.log_prob;
    r.finished = h.finished;
    std::u32string chars;
    for (int id : h.symbols) {
      if (auto c = symbol_char(enc, id)) chars.push_back(*c);
    }
    r.form = utf8::encode(chars);
    return r;
  };

  // Greedy path; ties go to the smallest symbol id.
  Hypothesis greedy{start(enc), {}, 0.0, false};
  while (greedy.symbols.size() < cap) {
    StepOutput out = step(enc, greedy.state, 0.0, nullptr, nullptr, nullptr);
    nn::Index best = 0;
    out.distribution.maxCoeff(&best);
    greedy.log_prob += std::log(out.distribution(best));
    greedy.state = std::move(out.next);
    greedy.state.prev = static_cast<int>(best);
    if (best == CharVocab::kEos) {
      greedy.finished = true;
      break;
    }
    greedy.symbols.push_back(static_cast<int>(best));
  }
  if (beam <= 1) return to_result(greedy);

  std::vector<Hypothesis> alive{{start(enc), {}, 0.0, false}};
  std::vector<Hypothesis> done;
  const auto better = [](const Hypothesis& a, const Hypothesis& b) { return a.log_prob > b.log_prob; };
  while (!alive.empty()) {
    std::vector<Hypothesis> expanded;
    for (const auto& h : alive) {
      StepOutput out = step(enc, h.state, 0.0, nullptr, nullptr, nullptr);
      std::vector<nn::Index> order(static_cast<std::size_t>(out.distribution.size()));
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<nn::Index>(k);
      const auto keep = std::min<std::size_t>(order.size(), static_cast<std::size_t>(beam));
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                        [&](nn::Index a, nn::Index b) {
                          return out.distribution(a) > out.distribution(b) ||
                                 (out.distribution(a) == out.distribution(b) && a < b);
                        });
      for (std::size_t k = 0; k < keep; ++k) {
        const nn::Index id = order[k];
        if (out.distribution(id) <= 0.0) continue;
        Hypothesis next{out.next, h.symbols, h.log_prob + std::log(out.distribution(id)), false};
        next.state.prev = static_cast<int>(id);
        if (id == CharVocab::kEos) {
          next.finished = true;
          done.push_back(std::move(next));
        } else {
          next.symbols.push_back(static_cast<int>(id));
          expanded.push_back(std::move(next));
        }
      }
    }
    std::stable_sort(expanded.begin(), expanded.end(), better);
    if (expanded.size() > static_cast<std::size_t>(beam)) expanded.resize(static_cast<std::size_t>(beam));
    alive.clear();
    for (auto& h : expanded) {
      if (h.symbols.size() >= cap) {
        done.push_back(std::move(h));
      } else {
        alive.push_back(std::move(h));
      }
    }
    // Extending a hypothesis never raises its probability.
    if (!done.empty() && !alive.empty()) {
      const double best_done = std::max_element(done.begin(), done.end(), [&](const auto& a, const auto& b) {
                                 return better(b, a);
                               })->log_prob;
      if (std::all_of(alive.begin(), alive.end(), [&](const auto& h) { return h.log_prob <= best_done; })) break;
    }
  }
  done.push_back(greedy);
  std::stable_sort(done.begin(), done.end(), better);
  return to_result(done.front());
}

namespace detail {

inline void write_double(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

inline double parse_double(const std::string& token) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) throw Error("model file: bad number '" + token + "'");
  return v;
}

}  // namespace detail

// Text format: header line, dims/slots/chars lines, then one block per
// parameter: "name rows cols" followed by the values row by row.
inline void InflectionModel::save(std::ostream& out) const {
  out << (is_pgen() ? "pgen-model v1" : "seq2seq-model v1") << '\n';
  out << "dims " << dims_.embedding << ' ' << dims_.hidden << ' ' << dims_.attention << '\n';
  out << "slots " << vocab_.slot_count() << '\n';
  out << "chars " << vocab_.chars().size();
  for (char32_t c : vocab_.chars()) out << ' ' << static_cast<std::uint32_t>(c);
  out << '\n';
  for (const nn::Param* p : params_.all()) {
    out << p->name << ' ' << p->value.rows() << ' ' << p->value.cols() << '\n';
    for (nn::Index i = 0; i < p->value.rows(); ++i) {
      for (nn::Index j = 0; j < p->value.cols(); ++j) {
        if (j) out << ' ';
        detail::write_double(out, p->value(i, j));
      }
      out << '\n';
    }
  }
}

inline std::unique_ptr<InflectionModel> InflectionModel::load(std::istream& in) {
  std::string header;
  std::getline(in, header);
  ModelKind kind;
  if (header == "pgen-model v1") {
    kind = ModelKind::PointerGenerator;
  } else if (header == "seq2seq-model v1") {
    kind = ModelKind::Seq2Seq;
  } else {
    throw Error("model file: unknown header '" + header + "'");
  }
  const auto expect = [&](const char* word) {
    std::string token;
    if (!(in >> token) || token != word) throw Error(std::string("model file: expected '") + word + "'");
  };
  ModelDims dims;
  int slots = 0;
  std::size_t n_chars = 0;
  expect("dims");
  in >> dims.embedding >> dims.hidden >> dims.attention;
  expect("slots");
  in >> slots;
  expect("chars");
  in >> n_chars;
  std::vector<char32_t> chars(n_chars);
  for (auto& c : chars) {
    std::uint32_t v = 0;
    in >> v;
    c = static_cast<char32_t>(v);
  }
  if (!in) throw Error("model file: truncated header");
  auto model = std::make_unique<InflectionModel>(kind, CharVocab(std::move(chars), slots), dims, 0);
  for (nn::Param* p : model->params_.all()) {
    std::string name;
    nn::Index rows = 0, cols = 0;
    in >> name >> rows >> cols;
    if (!in || name != p->name || rows != p->value.rows() || cols != p->value.cols()) {
      throw Error("model file: parameter block mismatch at '" + p->name + "'");
    }
    for (nn::Index i = 0; i < rows; ++i) {
      for (nn::Index j = 0; j < cols; ++j) {
        std::string token;
        if (!(in >> token)) throw Error("model file: truncated values for " + name);
        p->value(i, j) = detail::parse_double(token);
      }
    }
  }
  return model;
}

}  // namespace paradigm
