#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "paradigm/generators/completion.hpp"
#include "paradigm/generators/hyperparams.hpp"
#include "paradigm/generators/model.hpp"
#include "paradigm/generators/training.hpp"
#include "support.hpp"

using namespace paradigm;

namespace {

const std::vector<InflectionExample> kToy = {
    {"walk", 1, "walked"}, {"jump", 1, "jumped"}, {"walk", 2, "walking"}, {"sing", 2, "singing"}};

std::unique_ptr<InflectionModel> tiny_model(ModelKind kind, std::uint64_t seed, int e = 4, int h = 3) {
  return std::make_unique<InflectionModel>(kind, CharVocab::from_examples(kToy, 2), ModelDims{e, h, h}, seed);
}

// Spreads parameters beyond the small default init so gradients are not tiny.
void randomize(InflectionModel& m, std::uint64_t seed, double scale = 0.5) {
  Rng rng(seed);
  for (nn::Param* p : m.params().all()) {
    for (nn::Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = rng.uniform(-scale, scale);
  }
}

TrainConfig tiny_config(int epochs) {
  TrainConfig c = pgen_s_config();
  c.embedding = 8;
  c.hidden = 8;
  c.epochs = epochs;
  c.patience = epochs;
  c.dropout = 0.0;
  return c;
}

}  // namespace

TEST(Hyperparams, Seq2SeqConfiguration) {
  for (auto mode : {PolicyMode::S, PolicyMode::V}) {
    for (std::size_t T : {10u, 343u, 5000u}) {
      const TrainConfig c = resolve_hyperparams(mode, ModelKind::Seq2Seq, T);
      EXPECT_EQ(c.embedding, 300);
      EXPECT_EQ(c.hidden, 100);
      EXPECT_EQ(c.batch, 20);
      EXPECT_EQ(c.optimizer, nn::OptimizerKind::Adadelta);
      EXPECT_EQ(c.learning_rate, 1.0);
      EXPECT_EQ(c.epochs, 100);
      EXPECT_EQ(c.patience, 10);
    }
  }
}

TEST(Hyperparams, PointerGeneratorFixed) {
  const TrainConfig c = resolve_hyperparams(PolicyMode::S, ModelKind::PointerGenerator, 85);
  EXPECT_EQ(c.embedding, 300);
  EXPECT_EQ(c.hidden, 100);
  EXPECT_EQ(c.dropout, 0.3);
  EXPECT_EQ(c.epochs, 60);
  EXPECT_EQ(c.patience, 10);
  EXPECT_EQ(c.optimizer, nn::OptimizerKind::Adam);
  EXPECT_EQ(c.learning_rate, 0.001);
}

TEST(Hyperparams, PointerGeneratorBySize) {
  const TrainConfig basque = resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 85);
  EXPECT_EQ(basque.embedding, 100);
  EXPECT_EQ(basque.dropout, 0.5);
  EXPECT_EQ(basque.epochs, 300);
  EXPECT_EQ(basque.patience, 100);
  EXPECT_EQ(basque.hidden, 100);
  EXPECT_EQ(basque.optimizer, nn::OptimizerKind::Adam);

  const TrainConfig english = resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 343);
  EXPECT_EQ(english.embedding, 100);
  EXPECT_EQ(english.dropout, 0.5);
  EXPECT_EQ(english.epochs, 80);
  EXPECT_EQ(english.patience, 20);

  const TrainConfig s = pgen_s_config();
  EXPECT_EQ(resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 100), basque);
  EXPECT_EQ(resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 101), english);
  EXPECT_EQ(resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 500), english);
  EXPECT_EQ(resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 501), s);
  EXPECT_EQ(resolve_hyperparams(PolicyMode::V, ModelKind::PointerGenerator, 0), basque);
}

TEST(CharVocab, LayoutAndLookup) {
  const CharVocab v = CharVocab::from_examples(kToy, 3);
  // specials, then a d e g i j k l m n p s u w, then 3 slots
  EXPECT_EQ(v.size(), 4 + 14 + 3);
  EXPECT_EQ(v.char_id(U'a'), 4);
  EXPECT_EQ(v.char_id(U'ø'), CharVocab::kUnk);
  EXPECT_EQ(v.slot_id(1), 18);
  EXPECT_EQ(v.symbol_name(v.slot_id(3)), "SLOT_3");
  EXPECT_EQ(v.symbol_name(v.char_id(U'w')), "w");
  EXPECT_EQ(v.symbol_name(CharVocab::kEos), "<eos>");
  EXPECT_THROW(v.slot_id(4), Error);
  EXPECT_THROW(v.slot_id(0), Error);
}

TEST(EncodeInput, Formats) {
  const CharVocab v = CharVocab::from_examples(kToy, 2);
  const auto id = [&](char32_t c) { return v.char_id(c); };
  const EncodedInput s = encode_input(ModelKind::Seq2Seq, U"walk", 2, v);
  EXPECT_EQ(s.source, (std::vector<int>{CharVocab::kBos, v.slot_id(2), id('w'), id('a'), id('l'), id('k'), CharVocab::kEos}));
  EXPECT_TRUE(s.tags.empty());
  const EncodedInput p = encode_input(ModelKind::PointerGenerator, U"walk", 2, v);
  EXPECT_EQ(p.source, (std::vector<int>{CharVocab::kBos, id('w'), id('a'), id('l'), id('k'), CharVocab::kEos}));
  EXPECT_EQ(p.tags, (std::vector<int>{v.slot_id(2)}));
  const EncodedInput unseen = encode_input(ModelKind::PointerGenerator, U"ø", 1, v);
  EXPECT_EQ(unseen.source[1], CharVocab::kUnk);
  EXPECT_THROW(encode_input(ModelKind::Seq2Seq, U"walk", 3, v), Error);
}

TEST(Model, DecoderStepGradientCheck) {
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    auto m = tiny_model(kind, 1);
    randomize(*m, 2);
    // One emitted character plus eos. "ø" is outside the vocabulary, so the
    // pointer-generator can only produce it by copying.
    const std::u32string lemma = kind == ModelKind::PointerGenerator ? U"wøk" : U"wak";
    const std::u32string form = kind == ModelKind::PointerGenerator ? U"ø" : U"a";
    const auto loss = [&] { return m->loss(lemma, 2, form, true); };
    const auto report = nn::grad_check(loss, m->params().all(), 1e-5, 1e-4);
    EXPECT_TRUE(report.passed) << to_string(kind) << " worst " << report.worst_parameter << "[" << report.worst_index
                               << "] " << report.max_relative_error;
  }
}

TEST(Model, FullSequenceGradientCheck) {
  // A six-step loss is ~18 nats; at epsilon 1e-5 its round-off (~1e-10) is
  // comparable to the 1e-6 floor, so the longer sequence uses 1e-4.
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    auto m = tiny_model(kind, 1);
    randomize(*m, 2);
    const std::u32string lemma = kind == ModelKind::PointerGenerator ? U"wøk" : U"wak";
    const std::u32string form = kind == ModelKind::PointerGenerator ? U"wøked" : U"waked";
    const auto loss = [&] { return m->loss(lemma, 2, form, true); };
    const auto report = nn::grad_check(loss, m->params().all(), 1e-4, 1e-4);
    EXPECT_TRUE(report.passed) << to_string(kind) << " worst " << report.worst_parameter << "[" << report.worst_index
                               << "] " << report.max_relative_error;
  }
}

TEST(Model, LossWithoutBackpropMatches) {
  auto m = tiny_model(ModelKind::PointerGenerator, 3);
  randomize(*m, 4);
  const double a = m->loss(U"jump", 1, U"jumped", false);
  const double b = m->loss(U"jump", 1, U"jumped", true);
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(m->log_probability("jump", 1, "jumped"), -a, 1e-12);
}

TEST(DecodeStep, ForcedGateExtremes) {
  auto m = tiny_model(ModelKind::PointerGenerator, 5);
  randomize(*m, 6);
  const auto enc = m->encode(U"walk", 1);
  const auto state = m->start(enc);
  const auto gen = m->decode_step(enc, state, 1.0);
  const auto free = m->decode_step(enc, state);
  // With p_gen = 1 the result is the generation softmax; recover it from the
  // free-running mixture by removing the copy part.
  nn::Vector copy = nn::Vector::Zero(free.distribution.size());
  for (std::size_t t = 0; t < enc.copy_ids.size(); ++t) copy(enc.copy_ids[t]) += free.attention(static_cast<nn::Index>(t));
  const nn::Vector p_vocab = (free.distribution - (1.0 - free.p_gen) * copy) / free.p_gen;
  EXPECT_EQ(gen.p_gen, 1.0);
  for (nn::Index i = 0; i < p_vocab.size(); ++i) EXPECT_NEAR(gen.distribution(i), p_vocab(i), 1e-12);
}

TEST(DecodeStep, AllCopyMassOnRepeatedCharacter) {
  auto m = tiny_model(ModelKind::PointerGenerator, 7);
  // Zero attention parameters give uniform attention over [bos, a, a, eos].
  for (const char* name : {"attention.wk", "attention.wq", "attention.b", "attention.v"}) m->params().find(name)->value.setZero();
  const auto enc = m->encode(U"aa", 1);
  const auto out = m->decode_step(enc, m->start(enc), 0.0);
  for (nn::Index t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(out.attention(t), 0.25);
  const int a = m->vocab().char_id(U'a');
  EXPECT_DOUBLE_EQ(out.distribution(a), 0.5);
  EXPECT_DOUBLE_EQ(out.distribution(CharVocab::kBos), 0.25);
  EXPECT_DOUBLE_EQ(out.distribution(CharVocab::kEos), 0.25);
  EXPECT_DOUBLE_EQ(out.distribution.sum(), 1.0);
}

TEST(DecodeStep, MixtureMatchesScalarRecomputation) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = tiny_model(ModelKind::PointerGenerator, 9 + trial, 6, 5);
    randomize(*m, 100 + trial);
    const auto enc = m->encode(U"sølk", 1 + static_cast<int>(rng.uniform_index(2)));
    auto state = m->start(enc);
    for (int step = 0; step < 4; ++step) {
      const auto out = m->decode_step(enc, state);
      const auto& h = out.next.lstm.h;
      const auto& ctx = out.next.context;
      std::vector<double> feats(h.data(), h.data() + h.size());
      feats.insert(feats.end(), ctx.data(), ctx.data() + ctx.size());
      feats.insert(feats.end(), enc.tag.data(), enc.tag.data() + enc.tag.size());

      const auto& W = m->params().find("output.w")->value;
      const auto& b = m->params().find("output.b")->value;
      const auto& G = m->params().find("gate.w")->value;
      const auto& gb = m->params().find("gate.b")->value;
      std::vector<double> logits(static_cast<std::size_t>(W.rows()));
      double top = -1e300;
      for (nn::Index r = 0; r < W.rows(); ++r) {
        double s = b(r, 0);
        for (std::size_t k = 0; k < feats.size(); ++k) s += W(r, static_cast<nn::Index>(k)) * feats[k];
        logits[static_cast<std::size_t>(r)] = s;
        top = std::max(top, s);
      }
      double z = 0.0;
      for (double l : logits) z += std::exp(l - top);
      double g = gb(0, 0);
      for (std::size_t k = 0; k < feats.size(); ++k) g += G(0, static_cast<nn::Index>(k)) * feats[k];
      const double p_gen = 1.0 / (1.0 + std::exp(-g));
      EXPECT_NEAR(out.p_gen, p_gen, 1e-12);

      for (nn::Index c = 0; c < out.distribution.size(); ++c) {
        double expected = c < W.rows() ? p_gen * std::exp(logits[static_cast<std::size_t>(c)] - top) / z : 0.0;
        for (std::size_t t = 0; t < enc.copy_ids.size(); ++t) {
          if (enc.copy_ids[t] == c) expected += (1.0 - p_gen) * out.attention(static_cast<nn::Index>(t));
        }
        EXPECT_NEAR(out.distribution(c), expected, 1e-12);
      }
      state = out.next;
      state.prev = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m->vocab().size())));
    }
  }
}

TEST(DecodeStep, OutOfVocabularyCharacterGetsExtendedId) {
  auto m = tiny_model(ModelKind::PointerGenerator, 10);
  const auto enc = m->encode(U"øwø", 1);
  ASSERT_EQ(enc.oov, std::vector<char32_t>{U'ø'});
  EXPECT_EQ(enc.copy_ids[1], m->vocab().size());
  EXPECT_EQ(enc.copy_ids[3], m->vocab().size());
  const auto out = m->decode_step(enc, m->start(enc));
  EXPECT_EQ(out.distribution.size(), m->vocab().size() + 1);
  EXPECT_NEAR(out.distribution.sum(), 1.0, 1e-12);
}

TEST(Decode, LengthCap) {
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    auto m = tiny_model(kind, 11);
    // Make eos nearly impossible so decoding runs into the cap.
    m->params().find("output.b")->value(CharVocab::kEos, 0) = -50.0;
    for (const std::string lemma : {"", "a", "walk", "singing"}) {
      for (int beam : {1, 3}) {
        const auto r = m->decode(lemma, 1, beam);
        EXPECT_LE(utf8::length(r.form), 2 * utf8::length(lemma) + 10) << lemma;
      }
    }
  }
}

TEST(Decode, BeamNeverWorseThanGreedy) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto kind = trial % 2 ? ModelKind::Seq2Seq : ModelKind::PointerGenerator;
    auto m = tiny_model(kind, 20 + trial, 5, 4);
    randomize(*m, 40 + trial, 1.0);
    for (const std::string lemma : {"walk", "sing"}) {
      const auto greedy = m->decode(lemma, 1, 1);
      const auto beam = m->decode(lemma, 1, 3);
      EXPECT_GE(beam.log_prob, greedy.log_prob - 1e-12);
      if (beam.finished) {
        EXPECT_NEAR(m->log_probability(lemma, 1, beam.form), beam.log_prob, 1e-9);
      }
      if (greedy.finished) {
        EXPECT_NEAR(m->log_probability(lemma, 1, greedy.form), greedy.log_prob, 1e-9);
      }
    }
  }
}

TEST(Decode, DistributionsSumToOne) {
  Rng rng(12);
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    auto m = tiny_model(kind, 13, 8, 8);
    randomize(*m, 14, 1.0);
    const std::u32string alphabet = U"walkøx";
    for (int n = 0; n < 100; ++n) {
      std::u32string lemma;
      const auto len = rng.uniform_index(7);
      for (std::uint64_t i = 0; i < len; ++i) lemma += alphabet[rng.uniform_index(alphabet.size())];
      const auto enc = m->encode(lemma, 1);
      auto state = m->start(enc);
      for (int step = 0; step < 5; ++step) {
        const auto out = m->decode_step(enc, state);
        EXPECT_NEAR(out.distribution.sum(), 1.0, 1e-9);
        EXPECT_GE(out.distribution.minCoeff(), 0.0);
        state = out.next;
        state.prev = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(out.distribution.size())));
      }
    }
  }
}

TEST(Model, SaveLoadRoundTrip) {
  for (auto kind : {ModelKind::PointerGenerator, ModelKind::Seq2Seq}) {
    auto m = tiny_model(kind, 15);
    randomize(*m, 16);
    std::ostringstream out;
    m->save(out);
    std::istringstream in(out.str());
    auto loaded = InflectionModel::load(in);
    EXPECT_EQ(loaded->kind(), kind);
    EXPECT_EQ(loaded->vocab(), m->vocab());
    EXPECT_EQ(loaded->dims(), m->dims());
    const auto a = m->params().all();
    const auto b = loaded->params().all();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k]->value, b[k]->value) << a[k]->name;
    std::ostringstream again;
    loaded->save(again);
    EXPECT_EQ(again.str(), out.str());
    EXPECT_EQ(loaded->generate("walk", 2, 2), m->generate("walk", 2, 2));
  }
}

TEST(Model, LoadRejectsDamagedFiles) {
  auto m = tiny_model(ModelKind::PointerGenerator, 17);
  std::ostringstream out;
  m->save(out);
  const std::string text = out.str();
  std::istringstream bad_header("lstm-model v9\n" + text.substr(text.find('\n') + 1));
  EXPECT_THROW(InflectionModel::load(bad_header), Error);
  std::istringstream truncated(text.substr(0, text.size() / 2));
  EXPECT_THROW(InflectionModel::load(truncated), Error);
}

TEST(Training, MemorizesSingleExample) {
  DataSplit split;
  split.train = {{"walk", 1, "walked"}};
  // Early stopping on a single example would end before it is learned.
  TrainConfig cfg = tiny_config(200);
  cfg.embedding = 16;
  cfg.hidden = 16;
  const auto result = train(ModelKind::PointerGenerator, split, cfg, 1);
  EXPECT_FALSE(result.scored_on_dev);
  EXPECT_EQ(result.model->generate("walk", 1), "walked");
  EXPECT_DOUBLE_EQ(result.best_accuracy, 1.0);
}

TEST(Training, SameSeedSameResult) {
  DataSplit split;
  split.train = testing_support::toy_suffixation(12, 3);
  split.dev = testing_support::toy_suffixation(4, 4);
  const auto a = train(ModelKind::PointerGenerator, split, tiny_config(3), 7);
  const auto b = train(ModelKind::PointerGenerator, split, tiny_config(3), 7);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].loss, b.log[i].loss);
    EXPECT_EQ(a.log[i].accuracy, b.log[i].accuracy);
  }
  const auto pa = a.model->params().all();
  const auto pb = b.model->params().all();
  for (std::size_t k = 0; k < pa.size(); ++k) EXPECT_EQ(pa[k]->value, pb[k]->value);
  const auto c = train(ModelKind::PointerGenerator, split, tiny_config(3), 8);
  EXPECT_NE(c.log[0].loss, a.log[0].loss);
}

TEST(Training, EarlyStoppingWithPatienceOne) {
  DataSplit split;
  split.train = {{"ab", 1, "abc"}, {"ba", 1, "bac"}};
  // "q" never appears in training, so no dev form can be produced.
  split.dev = {{"ab", 1, "q"}};
  TrainConfig cfg = tiny_config(20);
  cfg.patience = 1;
  const auto result = train(ModelKind::Seq2Seq, split, cfg, 1);
  EXPECT_TRUE(result.scored_on_dev);
  EXPECT_EQ(result.log.size(), 2u);
  EXPECT_EQ(result.best_epoch, 1);
}

TEST(Training, ReturnsBestCheckpoint) {
  DataSplit split;
  split.train = testing_support::toy_suffixation(30, 5);
  split.dev = testing_support::toy_suffixation(9, 6);
  const auto result = train(ModelKind::PointerGenerator, split, tiny_config(8), 2);
  EXPECT_DOUBLE_EQ(decode_accuracy(*result.model, split.dev), result.best_accuracy);
  for (const auto& r : result.log) EXPECT_LE(r.accuracy, result.best_accuracy);
}

TEST(Training, RejectsEmptyTrainingSet) {
  EXPECT_THROW(train(ModelKind::PointerGenerator, DataSplit{}, tiny_config(1), 1), Error);
}

TEST(Training, SelectionTiesGoToS) {
  DataSplit split;
  split.train = {{"ab", 1, "abc"}, {"ba", 1, "bac"}};
  split.dev = {{"ab", 1, "q"}};
  const auto sel = train_selected(ModelKind::PointerGenerator, split, std::nullopt, 1, [](TrainConfig& c) {
    c.embedding = 4;
    c.hidden = 4;
    c.epochs = 1;
  });
  ASSERT_EQ(sel.candidates.size(), 2u);
  EXPECT_EQ(sel.candidates[0].first, "S");
  EXPECT_EQ(sel.candidates[1].first, "V");
  EXPECT_EQ(sel.chosen_label, "S");
}

TEST(Training, IdenticalConfigurationsTrainedOnce) {
  DataSplit split;
  split.train = testing_support::toy_suffixation(501, 9);
  const auto sel = train_selected(ModelKind::PointerGenerator, split, std::nullopt, 1, [](TrainConfig& c) {
    c.embedding = 2;
    c.hidden = 2;
    c.epochs = 1;
  });
  EXPECT_EQ(sel.candidates.size(), 1u);
  EXPECT_EQ(sel.chosen_label, "S");
}

TEST(Training, LogFormat) {
  std::ostringstream out;
  write_training_log(out, {{1, 0.5, 0.25}, {2, 0.125, 1}});
  EXPECT_EQ(out.str(), "1\t0.5\t0.25\n2\t0.125\t1\n");
}

namespace {

Slot slot_of(int id, const std::vector<std::pair<std::string, std::string>>& tree_examples,
             const std::vector<std::pair<std::string, std::string>>& covered) {
  Slot s;
  s.id = id;
  for (const auto& [l, f] : tree_examples) {
    const EditTree t = build_tree(l, f);
    s.trees.emplace(tree_key(t), t);
  }
  for (const auto& [l, f] : covered) s.coverage.emplace(l, SlotCell{f, tree_key(build_tree(l, f))});
  return s;
}

}  // namespace

TEST(Fallback, AppliesSlotTree) {
  const SlotSystem sys({slot_of(1, {{"walk", "walked"}}, {{"walk", "walked"}})});
  EXPECT_EQ(fallback_generate(sys, "jump", 1), std::optional<std::string>("jumped"));
}

TEST(Fallback, FailsWhenNoTreeApplies) {
  Slot s;
  s.id = 1;
  const EditTree r = EditTree::replace(U"a", U"b");
  s.trees.emplace(tree_key(r), r);
  s.coverage.emplace("a", SlotCell{"b", tree_key(r)});
  EXPECT_EQ(fallback_generate(SlotSystem({s}), "c", 1), std::nullopt);
}

TEST(Fallback, PrefersBetterCoveredTree) {
  // +ed covers 5 lemmas, +s covers 2; both apply to "jump".
  const SlotSystem sys({slot_of(1, {{"walk", "walked"}, {"walk", "walks"}},
                                {{"a1", "a1ed"}, {"a2", "a2ed"}, {"a3", "a3ed"}, {"a4", "a4ed"}, {"a5", "a5ed"},
                                 {"b1", "b1s"}, {"b2", "b2s"}})});
  EXPECT_EQ(fallback_generate(sys, "jump", 1), std::optional<std::string>("jumped"));
}

TEST(CompleteParadigms, AttestedFormsPassThrough) {
  DataSplit split;
  split.train = {{"walk", 1, "walked"}, {"walk", 2, "walking"}};
  split.dev = {{"walk", 3, "walks"}};
  int calls = 0;
  const auto rows = complete_paradigms(LemmaList({"walk", "sing"}), 3, split, [&](const std::string& l, int s) {
    ++calls;
    return l + "#" + std::to_string(s);
  });
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (InflectionExample{"walk", 1, "walked"}));
  EXPECT_EQ(rows[1], (InflectionExample{"walk", 2, "walking"}));
  EXPECT_EQ(rows[2], (InflectionExample{"walk", 3, "walks"}));
  EXPECT_EQ(rows[3], (InflectionExample{"sing", 1, "sing#1"}));
  EXPECT_EQ(rows[5], (InflectionExample{"sing", 3, "sing#3"}));
  EXPECT_EQ(calls, 3);

  std::ostringstream out;
  write_predictions(out, {rows[0]});
  EXPECT_EQ(out.str(), "walk\twalked\t1\n");
}
