// Command-line front end: one subcommand per pipeline stage.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paradigm/pipeline.hpp"
#include "paradigm/synthetic.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string workdir, corpus, lemmas, gold, seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("-c,--config", opt.config, "key = value configuration file");
  cmd->add_option("-s,--set", opt.overrides, "override a configuration key (key=value), repeatable");
  cmd->add_option("-w,--workdir", opt.workdir, "work directory");
  cmd->add_option("--corpus", opt.corpus, "raw text corpus");
  cmd->add_option("--lemmas", opt.lemmas, "lemma list, one per line");
  cmd->add_option("--gold", opt.gold, "gold paradigms (lemma, form, features)");
  cmd->add_option("--seed", opt.seed, "random seed");
  cmd->add_flag("-q,--quiet", opt.quiet, "no progress output");
}

paradigm::PipelineConfig resolve(const CommonOptions& opt) {
  paradigm::PipelineConfig cfg = opt.config.empty() ? paradigm::PipelineConfig{} : paradigm::load_config(opt.config);
  paradigm::apply_overrides(cfg, opt.overrides);
  if (!opt.workdir.empty()) cfg.set("workdir", opt.workdir);
  if (!opt.corpus.empty()) cfg.set("corpus", opt.corpus);
  if (!opt.lemmas.empty()) cfg.set("lemmas", opt.lemmas);
  if (!opt.gold.empty()) cfg.set("gold", opt.gold);
  if (!opt.seed.empty()) cfg.set("seed", opt.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised paradigm completion from raw text and a lemma list"};
  app.require_subcommand(1);

  CommonOptions opt;
  using Stage = std::function<void(const paradigm::PipelineConfig&, const paradigm::Logger&)>;
  const std::vector<std::tuple<std::string, std::string, Stage>> stages = {
      {"retrieve", "collect candidate forms and pseudo-lemmas", paradigm::cmd_retrieve},
      {"discover", "group edit trees into paradigm slots", paradigm::cmd_discover},
      {"build-data", "write train/dev/test files", paradigm::cmd_build_data},
      {"train", "train the inflection generator", paradigm::cmd_train},
      {"generate", "fill every paradigm cell of the input lemmas", paradigm::cmd_generate},
      {"evaluate", "score predictions with best-match accuracy",
       [](const auto& cfg, const auto& log) { paradigm::cmd_evaluate(cfg, log); }},
      {"pipeline", "run all stages in order",
       [](const auto& cfg, const auto& log) { paradigm::cmd_pipeline(cfg, log); }},
  };
  for (const auto& [name, help, fn] : stages) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, opt);
    cmd->callback([&opt, name = name, fn = fn] {
      const paradigm::Logger log = [&](const std::string& line) {
        if (!opt.quiet) std::cerr << line << '\n';
      };
      paradigm::PipelineConfig cfg;
      try {
        cfg = resolve(opt);
      } catch (const paradigm::Error& e) {
        throw paradigm::StageError(name, e.what());
      }
      fn(cfg, log);
    });
  }

  paradigm::SyntheticOptions syn;
  std::string out_dir;
  auto* synth = app.add_subcommand("synthesize", "write the toy suffixing language (corpus, lemmas, gold)");
  synth->add_option("dir", out_dir, "output directory")->required();
  synth->add_option("--seed", syn.seed, "generator seed");
  synth->add_option("--stems", syn.stems, "number of stems");
  synth->add_option("--lemmas", syn.input_lemmas, "number of stems given as input lemmas");
  synth->add_option("--attested", syn.attested_fraction, "fraction of forms that occur in the corpus");
  synth->callback([&] {
    const auto lang = paradigm::make_synthetic_language(syn);
    paradigm::write_synthetic_language(out_dir, lang, syn);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
