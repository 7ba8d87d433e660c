#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "paradigm/corpus.hpp"
#include "paradigm/dataset.hpp"
#include "paradigm/edit_tree.hpp"
#include "paradigm/evaluation.hpp"
#include "paradigm/generators/completion.hpp"
#include "paradigm/generators/hyperparams.hpp"
#include "paradigm/generators/training.hpp"
#include "paradigm/retrieval.hpp"
#include "paradigm/slot_discovery.hpp"

namespace paradigm {

namespace fs = std::filesystem;

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error("config: " + field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& message)
      : Error("[" + stage + "] " + message), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "not a number: '" + text + "'");
  return value;
}

inline bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(field, "expected true or false, got '" + text + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

struct PipelineConfig {
  fs::path corpus;
  fs::path lemmas;
  fs::path workdir = "work";
  fs::path gold;  // optional; enables evaluation in the pipeline command

  bool lowercase = false;
  std::uint64_t min_count = 1;
  RetrievalConfig retrieval;
  DiscoveryConfig discovery;
  double dev_fraction = 0.2;

  ModelKind model = ModelKind::PointerGenerator;
  std::optional<PolicyMode> policy;  // unset: train S and V, keep the better one
  std::uint64_t seed = 1;
  int beam = 1;
  bool tree_first = false;  // try the slot's edit trees before the neural model

  // Overrides applied on top of the resolved hyperparameters.
  std::optional<int> epochs, patience, batch, embedding, hidden;
  std::optional<double> dropout, clip_norm;

  void set(const std::string& key, const std::string& raw) {
    using detail::parse_number;
    const std::string value = detail::trim(raw);
    if (key == "corpus") corpus = value;
    else if (key == "lemmas") lemmas = value;
    else if (key == "workdir") workdir = value;
    else if (key == "gold") gold = value;
    else if (key == "lowercase") lowercase = detail::parse_bool(key, value);
    else if (key == "min_count") min_count = parse_number<std::uint64_t>(key, value);
    else if (key == "min_lcs_abs") retrieval.min_lcs_abs = parse_number<std::size_t>(key, value);
    else if (key == "min_lcs_ratio") retrieval.min_lcs_ratio = parse_number<double>(key, value);
    else if (key == "tree_min_lemmas") retrieval.tree_min_lemmas = parse_number<std::size_t>(key, value);
    else if (key == "pseudo_lemma_min_hits") retrieval.pseudo_lemma_min_hits = parse_number<std::size_t>(key, value);
    else if (key == "max_form_len_delta") retrieval.max_form_len_delta = parse_number<long>(key, value);
    else if (key == "min_slot_coverage") discovery.min_slot_coverage = parse_number<double>(key, value);
    else if (key == "similarity_floor") discovery.similarity_floor = parse_number<double>(key, value);
    else if (key == "dev_fraction") dev_fraction = parse_number<double>(key, value);
    else if (key == "model") {
      if (value == "seq2seq") model = ModelKind::Seq2Seq;
      else if (value == "pgen") model = ModelKind::PointerGenerator;
      else throw ConfigError(key, "expected seq2seq or pgen, got '" + value + "'");
    } else if (key == "policy") {
      if (value == "S") policy = PolicyMode::S;
      else if (value == "V") policy = PolicyMode::V;
      else if (value == "auto") policy.reset();
      else throw ConfigError(key, "expected S, V or auto, got '" + value + "'");
    } else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "beam") beam = parse_number<int>(key, value);
    else if (key == "tree_first") tree_first = detail::parse_bool(key, value);
    else if (key == "epochs") epochs = parse_number<int>(key, value);
    else if (key == "patience") patience = parse_number<int>(key, value);
    else if (key == "batch") batch = parse_number<int>(key, value);
    else if (key == "embedding") embedding = parse_number<int>(key, value);
    else if (key == "hidden") hidden = parse_number<int>(key, value);
    else if (key == "dropout") dropout = parse_number<double>(key, value);
    else if (key == "clip_norm") clip_norm = parse_number<double>(key, value);
    else throw ConfigError(key, "unknown key");
  }

  void validate() const {
    try {
      retrieval.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("retrieval", e.what());
    }
    try {
      discovery.validate();
    } catch (const Error& e) {
      throw ConfigError("discovery", e.what());
    }
    if (!(dev_fraction >= 0.0 && dev_fraction < 1.0)) throw ConfigError("dev_fraction", "must be in [0, 1)");
    if (beam < 1) throw ConfigError("beam", "must be >= 1");
    if (workdir.empty()) throw ConfigError("workdir", "must not be empty");
    const auto positive = [](const char* name, const std::optional<int>& v) {
      if (v && *v < 1) throw ConfigError(name, "must be >= 1");
    };
    positive("epochs", epochs);
    positive("patience", patience);
    positive("batch", batch);
    positive("embedding", embedding);
    positive("hidden", hidden);
    if (dropout && !(*dropout >= 0.0 && *dropout < 1.0)) throw ConfigError("dropout", "must be in [0, 1)");
    if (clip_norm && !(*clip_norm >= 0.0)) throw ConfigError("clip_norm", "must be >= 0");
  }

  // Canonical key/value listing, used in stage manifests.
  std::vector<std::pair<std::string, std::string>> entries() const {
    using detail::format_double;
    std::vector<std::pair<std::string, std::string>> out = {
        {"corpus", corpus.string()},
        {"lemmas", lemmas.string()},
        {"gold", gold.string()},
        {"lowercase", lowercase ? "true" : "false"},
        {"min_count", std::to_string(min_count)},
        {"min_lcs_abs", std::to_string(retrieval.min_lcs_abs)},
        {"min_lcs_ratio", format_double(retrieval.min_lcs_ratio)},
        {"tree_min_lemmas", std::to_string(retrieval.tree_min_lemmas)},
        {"pseudo_lemma_min_hits", std::to_string(retrieval.pseudo_lemma_min_hits)},
        {"max_form_len_delta", std::to_string(retrieval.max_form_len_delta)},
        {"min_slot_coverage", format_double(discovery.min_slot_coverage)},
        {"similarity_floor", format_double(discovery.similarity_floor)},
        {"dev_fraction", format_double(dev_fraction)},
        {"model", to_string(model)},
        {"policy", policy ? to_string(*policy) : "auto"},
        {"seed", std::to_string(seed)},
        {"beam", std::to_string(beam)},
        {"tree_first", tree_first ? "true" : "false"},
    };
    const auto opt_int = [&](const char* k, const std::optional<int>& v) {
      if (v) out.emplace_back(k, std::to_string(*v));
    };
    opt_int("epochs", epochs);
    opt_int("patience", patience);
    opt_int("batch", batch);
    opt_int("embedding", embedding);
    opt_int("hidden", hidden);
    if (dropout) out.emplace_back("dropout", format_double(*dropout));
    if (clip_norm) out.emplace_back("clip_norm", format_double(*clip_norm));
    return out;
  }

  void adjust(TrainConfig& c) const {
    if (epochs) c.epochs = *epochs;
    if (patience) c.patience = *patience;
    if (batch) c.batch = *batch;
    if (embedding) c.embedding = *embedding;
    if (hidden) c.hidden = *hidden;
    if (dropout) c.dropout = *dropout;
    if (clip_norm) c.clip_norm = *clip_norm;
  }
};

// `key = value` lines; '#' starts a comment. Relative paths are resolved
// against `base` (normally the config file's directory).
inline void apply_config_text(PipelineConfig& cfg, std::string_view text, const fs::path& base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    const std::string key = detail::trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = detail::trim(std::string_view(trimmed).substr(eq + 1));
    cfg.set(key, value);
    if (!base.empty() && (key == "corpus" || key == "lemmas" || key == "workdir" || key == "gold") && !value.empty()) {
      fs::path p(value);
      if (p.is_relative()) cfg.set(key, (base / p).lexically_normal().string());
    }
  }
}

inline PipelineConfig load_config(const fs::path& path) {
  PipelineConfig cfg;
  apply_config_text(cfg, detail::read_file(path), path.parent_path());
  return cfg;
}

// Applies `key=value` overrides in order.
inline void apply_overrides(PipelineConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(o, "override must look like key=value");
    cfg.set(detail::trim(std::string_view(o).substr(0, eq)), o.substr(eq + 1));
  }
}

namespace files {
inline constexpr const char* candidates = "candidates.tsv";
inline constexpr const char* pseudo_lemmas = "pseudo_lemmas.txt";
inline constexpr const char* slots = "slots.tsv";
inline constexpr const char* train = "train.tsv";
inline constexpr const char* dev = "dev.tsv";
inline constexpr const char* test = "test.tsv";
inline constexpr const char* model = "model.txt";
inline constexpr const char* train_log = "train_log.tsv";
inline constexpr const char* predictions = "predictions.tsv";
inline constexpr const char* report = "report.tsv";
}  // namespace files

// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

using Logger = std::function<void(const std::string&)>;

class StageRun {
 public:
  StageRun(std::string name, const PipelineConfig& cfg, Logger log)
      : name_(std::move(name)), cfg_(cfg), log_(std::move(log)), start_(std::chrono::steady_clock::now()) {
    try {
      cfg_.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
    std::error_code ec;
    fs::create_directories(cfg_.workdir, ec);
    if (ec) fail("cannot create work directory " + cfg_.workdir.string() + ": " + ec.message());
  }

  [[noreturn]] void fail(const std::string& message) const { throw StageError(name_, message); }

  void info(const std::string& message) const {
    if (log_) log_("[" + name_ + "] " + message);
  }

  fs::path work(const char* file) const { return cfg_.workdir / file; }

  // Reads an external input named by a config field.
  std::string read_input(const char* field, const fs::path& path) {
    if (path.empty()) fail("config field '" + std::string(field) + "' is not set");
    if (!fs::is_regular_file(path)) fail(std::string(field) + " file not found: " + path.string());
    std::string bytes = read_or_fail(path);
    inputs_.emplace_back(path.string(), content_hash(bytes));
    return bytes;
  }

  // Reads an artifact produced by an earlier stage.
  std::string read_artifact(const char* file, const char* producer) {
    const fs::path path = work(file);
    if (!fs::is_regular_file(path)) {
      fail(std::string("missing ") + file + " in " + cfg_.workdir.string() + "; run the " + producer + " stage first");
    }
    std::string bytes = read_or_fail(path);
    inputs_.emplace_back(file, content_hash(bytes));
    return bytes;
  }

  void write_artifact(const char* file, const std::string& bytes) {
    const fs::path path = work(file);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.close();
    if (!out) fail("cannot write " + path.string());
    outputs_.emplace_back(file, content_hash(bytes));
  }

  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }

  // Writes <stage>.manifest: inputs, config, outputs, notes, then the timing.
  void finish() {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ostringstream m;
    m << "stage\t" << name_ << '\n';
    for (const auto& [path, hash] : inputs_) m << "input\t" << path << '\t' << hash << '\n';
    for (const auto& [key, value] : cfg_.entries()) m << "config\t" << key << '\t' << value << '\n';
    for (const auto& [file, hash] : outputs_) m << "output\t" << file << '\t' << hash << '\n';
    for (const auto& [key, value] : notes_) m << "note\t" << key << '\t' << value << '\n';
    m << "seconds\t" << std::fixed << std::setprecision(3) << seconds << '\n';
    const fs::path path = cfg_.workdir / (name_ + ".manifest");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << m.str();
    out.close();
    if (!out) fail("cannot write " + path.string());
    std::ostringstream msg;
    msg << "done in " << std::fixed << std::setprecision(1) << seconds << " s";
    info(msg.str());
  }

  const PipelineConfig& config() const noexcept { return cfg_; }

 private:
  std::string read_or_fail(const fs::path& path) const {
    try {
      return detail::read_file(path);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::string name_;
  const PipelineConfig& cfg_;
  Logger log_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> inputs_, outputs_, notes_;
};

namespace detail {

inline CandidateTable parse_candidates(const StageRun& run, const std::string& text) {
  CandidateTable table;
  std::istringstream in(text);
  try {
    for_each_tsv_line(in, 4, [&](const std::vector<std::string>& f, std::size_t) {
      table.insert(f[0], f[1], parse_tree_key(f[2]));
    });
  } catch (const Error& e) {
    run.fail(std::string(files::candidates) + ": " + e.what());
  }
  table.finalize();
  return table;
}

inline std::map<std::string, int> parse_slot_assignment(const StageRun& run, const std::string& text) {
  std::map<std::string, int> ids;
  std::istringstream in(text);
  try {
    for_each_tsv_line(in, 3, [&](const std::vector<std::string>& f, std::size_t line_no) {
      ids[f[1]] = parse_slot(f[0], line_no);
    });
  } catch (const Error& e) {
    run.fail(std::string(files::slots) + ": " + e.what());
  }
  return ids;
}

inline LemmaList parse_lemma_file(const StageRun& run, const std::string& text, const std::string& what) {
  try {
    return lemmas_from_text(text);
  } catch (const Error& e) {
    run.fail(what + ": " + e.what());
  }
}

inline std::vector<InflectionExample> parse_examples(const StageRun& run, const std::string& text, const char* file,
                                                    bool queries) {
  std::istringstream in(text);
  try {
    return queries ? read_queries(in) : read_examples(in);
  } catch (const Error& e) {
    run.fail(std::string(file) + ": " + e.what());
  }
}

inline Corpus read_corpus(StageRun& run) {
  const auto& cfg = run.config();
  const std::string text = run.read_input("corpus", cfg.corpus);
  try {
    return corpus_from_text(text, CorpusOptions{cfg.lowercase, cfg.min_count});
  } catch (const Error& e) {
    run.fail("corpus: " + std::string(e.what()));
  }
}

// Rebuilds the discovered slot system from candidates.tsv and slots.tsv.
inline SlotSystem load_slot_system(StageRun& run, const Corpus& corpus) {
  const CandidateTable table = parse_candidates(run, run.read_artifact(files::candidates, "retrieve"));
  const auto assignment = parse_slot_assignment(run, run.read_artifact(files::slots, "discover"));
  return regroup_slots(initial_slots(table, corpus), assignment);
}

template <typename Write>
std::string render(Write&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace detail

// Steps 1 and 2: candidate triples and pseudo-lemmas.
inline void cmd_retrieve(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("retrieve", cfg, log);
  const Corpus corpus = detail::read_corpus(run);
  const LemmaList lemmas = detail::parse_lemma_file(run, run.read_input("lemmas", cfg.lemmas), "lemmas");
  if (lemmas.size() == 0) run.fail("the lemma list is empty");
  const CandidateTable base = retrieve_candidates(corpus, lemmas, cfg.retrieval);
  auto extra = retrieve_additional_lemmas(corpus, base, lemmas, cfg.retrieval);
  run.info(std::to_string(corpus.vocab().size()) + " word types, " + std::to_string(base.tree_counts().size()) +
           " edit trees, " + std::to_string(extra.pseudo_lemmas.size()) + " pseudo-lemmas");
  run.write_artifact(files::candidates, detail::render([&](std::ostream& o) { write_candidates(o, extra.augmented); }));
  run.write_artifact(files::pseudo_lemmas, detail::render([&](std::ostream& o) {
                       for (const auto& w : extra.pseudo_lemmas) o << w << '\n';
                     }));
  run.note("triples", std::to_string(extra.augmented.triples().size()));
  run.note("trees", std::to_string(extra.augmented.tree_counts().size()));
  run.note("pseudo_lemmas", std::to_string(extra.pseudo_lemmas.size()));
  run.finish();
}

// Step 3: one slot per tree, greedy merging, coverage filter.
inline void cmd_discover(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("discover", cfg, log);
  const CandidateTable table = detail::parse_candidates(run, run.read_artifact(files::candidates, "retrieve"));
  const LemmaList pseudo =
      detail::parse_lemma_file(run, run.read_artifact(files::pseudo_lemmas, "retrieve"), files::pseudo_lemmas);
  const LemmaList lemmas = detail::parse_lemma_file(run, run.read_input("lemmas", cfg.lemmas), "lemmas");
  const Corpus corpus = detail::read_corpus(run);
  const std::size_t all_lemmas = lemmas.size() + pseudo.size();
  const SlotSystem merged = merge_slots(initial_slots(table, corpus), cfg.discovery, all_lemmas);
  merged.check_invariants();
  run.info("paradigm size " + std::to_string(merged.paradigm_size()));
  run.write_artifact(files::slots, detail::render([&](std::ostream& o) { write_slots(o, merged); }));
  run.note("paradigm_size", std::to_string(merged.paradigm_size()));
  run.finish();
}

// Train/dev/test files from the slot system.
inline void cmd_build_data(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("build-data", cfg, log);
  const Corpus corpus = detail::read_corpus(run);
  const LemmaList lemmas = detail::parse_lemma_file(run, run.read_input("lemmas", cfg.lemmas), "lemmas");
  const SlotSystem sys = detail::load_slot_system(run, corpus);
  const DataSplit split = build_splits(sys, lemmas, cfg.dev_fraction, cfg.seed);
  for (const auto& w : split.warnings) run.info("warning: " + w);
  run.info(std::to_string(split.train.size()) + " train, " + std::to_string(split.dev.size()) + " dev, " +
           std::to_string(split.test.size()) + " test");
  run.write_artifact(files::train, detail::render([&](std::ostream& o) { write_examples(o, split.train); }));
  run.write_artifact(files::dev, detail::render([&](std::ostream& o) { write_examples(o, split.dev); }));
  run.write_artifact(files::test, detail::render([&](std::ostream& o) { write_queries(o, split.test); }));
  run.finish();
}

inline DataSplit read_split(StageRun& run) {
  DataSplit split;
  split.train = detail::parse_examples(run, run.read_artifact(files::train, "build-data"), files::train, false);
  split.dev = detail::parse_examples(run, run.read_artifact(files::dev, "build-data"), files::dev, false);
  split.test = detail::parse_examples(run, run.read_artifact(files::test, "build-data"), files::test, true);
  return split;
}

// Trains the configured generator (both policies when policy=auto).
inline void cmd_train(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("train", cfg, log);
  const DataSplit split = read_split(run);
  if (split.train.empty()) {
    run.fail(std::string(files::train) + " has no examples; the build-data (dataset) stage found no attested cells");
  }
  SelectionResult sel;
  try {
    sel = train_selected(
        cfg.model, split, cfg.model == ModelKind::Seq2Seq ? std::nullopt : cfg.policy, cfg.seed,
        [&](TrainConfig& c) { cfg.adjust(c); },
        [&](const std::string& label, const EpochRecord& r) {
          std::ostringstream msg;
          msg << label << " epoch " << r.epoch << " loss " << std::setprecision(4) << r.loss << " acc "
              << std::setprecision(4) << r.accuracy;
          run.info(msg.str());
        });
  } catch (const Error& e) {
    run.fail(e.what());
  }
  for (const auto& [label, acc] : sel.candidates) run.note("candidate_" + label, detail::format_double(acc));
  run.note("chosen", sel.chosen_label);
  run.note("best_epoch", std::to_string(sel.chosen.best_epoch));
  run.info("kept " + sel.chosen_label + " (best epoch " + std::to_string(sel.chosen.best_epoch) + ", accuracy " +
           detail::format_double(sel.chosen.best_accuracy) + ")");
  run.write_artifact(files::model, detail::render([&](std::ostream& o) { sel.chosen.model->save(o); }));
  run.write_artifact(files::train_log, detail::render([&](std::ostream& o) { write_training_log(o, sel.chosen.log); }));
  run.finish();
}

// Fills every (lemma, slot) cell of the input lemmas.
inline void cmd_generate(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("generate", cfg, log);
  const LemmaList lemmas = detail::parse_lemma_file(run, run.read_input("lemmas", cfg.lemmas), "lemmas");
  const DataSplit split = read_split(run);
  const auto assignment = detail::parse_slot_assignment(run, run.read_artifact(files::slots, "discover"));
  int size = 0;
  for (const auto& [key, id] : assignment) size = std::max(size, id);

  std::unique_ptr<InflectionModel> model;
  {
    std::istringstream in(run.read_artifact(files::model, "train"));
    try {
      model = InflectionModel::load(in);
    } catch (const Error& e) {
      run.fail(std::string(files::model) + ": " + e.what());
    }
  }
  std::optional<SlotSystem> sys;
  if (cfg.tree_first) {
    const Corpus corpus = detail::read_corpus(run);
    sys = detail::load_slot_system(run, corpus);
  }
  std::size_t by_tree = 0, by_model = 0;
  const auto rows = complete_paradigms(lemmas, size, split, [&](const std::string& lemma, int slot) {
    if (sys) {
      if (auto form = fallback_generate(*sys, lemma, slot)) {
        ++by_tree;
        return *form;
      }
    }
    ++by_model;
    return model->generate(lemma, slot, cfg.beam);
  });
  run.info(std::to_string(rows.size()) + " cells, " + std::to_string(by_model) + " generated by the model, " +
           std::to_string(by_tree) + " by edit trees");
  run.write_artifact(files::predictions, detail::render([&](std::ostream& o) { write_predictions(o, rows); }));
  run.note("cells", std::to_string(rows.size()));
  run.finish();
}

// BMAcc of predictions.tsv against the gold file.
inline BMAccReport cmd_evaluate(const PipelineConfig& cfg, const Logger& log = {}) {
  StageRun run("evaluate", cfg, log);
  const std::string gold_text = run.read_input("gold", cfg.gold);
  const std::string pred_text = run.read_artifact(files::predictions, "generate");
  BMAccReport report;
  try {
    std::istringstream gin(gold_text), pin(pred_text);
    report = bmacc(read_predictions(pin), read_gold(gin));
  } catch (const Error& e) {
    run.fail(e.what());
  }
  run.info("macro BMAcc " + percent(report.macro) + ", micro BMAcc " + percent(report.micro));
  run.write_artifact(files::report, detail::render([&](std::ostream& o) { write_report(o, report); }));
  run.finish();
  return report;
}

// retrieve, discover, build-data, train, generate, then evaluate when gold is set.
inline std::optional<BMAccReport> cmd_pipeline(const PipelineConfig& cfg, const Logger& log = {}) {
  cmd_retrieve(cfg, log);
  cmd_discover(cfg, log);
  cmd_build_data(cfg, log);
  cmd_train(cfg, log);
  cmd_generate(cfg, log);
  if (cfg.gold.empty()) return std::nullopt;
  return cmd_evaluate(cfg, log);
}

}  // namespace paradigm
