// Copyright 2026 The revexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: one subcommand per pipeline stage plus run-all.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revexp/error.hpp"
#include "revexp/harness/config.hpp"
#include "revexp/harness/pipeline.hpp"

namespace {

using revexp::harness::RunConfig;

struct Flags {
  std::string config;
  std::string out;
  std::string corpus;
  std::optional<std::uint64_t> seed_corpus, seed_model, seed_eval;
  std::vector<std::string> models;
  std::vector<std::string> metrics;
  std::optional<std::size_t> k, n_explanations;
  std::optional<std::string> air_mode, tlae_mode;
  bool audit = false;
  bool serial = false;
  bool quiet = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Run config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Run directory (default: [run] out)");
  cmd->add_option("--corpus", f.corpus, "Directory holding corpus artifacts (default: --out)");
  cmd->add_option("--seed-corpus", f.seed_corpus, "Corpus seed stream");
  cmd->add_option("--seed-model", f.seed_model, "Model seed stream");
  cmd->add_option("--seed-eval", f.seed_eval, "Evaluation seed stream");
  cmd->add_option("--models", f.models, "Roster subset, comma separated")->delimiter(',');
  cmd->add_option("--metrics", f.metrics, "Metric subset, comma separated")->delimiter(',');
  cmd->add_option("--k", f.k, "MRR-AE candidates per gold review")->check(CLI::PositiveNumber);
  cmd->add_option("--n-explanations", f.n_explanations, "Explanations per model")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--air-mode", f.air_mode, "ground-truth, generated or both")
      ->check(CLI::IsMember({"ground-truth", "generated", "both"}));
  cmd->add_option("--tlae-mode", f.tlae_mode, "model-rating, gold-rating or both")
      ->check(CLI::IsMember({"model-rating", "gold-rating", "both"}));
  cmd->add_flag("--audit", f.audit, "Write per-instance audit logs");
  cmd->add_flag("--serial", f.serial, "Score instances on one thread");
  cmd->add_flag("--quiet", f.quiet, "No progress output");
}

RunConfig resolve(const Flags& f, std::string& out) {
  RunConfig c = revexp::harness::load_config(f.config);
  if (f.seed_corpus) c.seeds.corpus = *f.seed_corpus;
  if (f.seed_model) c.seeds.model = *f.seed_model;
  if (f.seed_eval) c.seeds.eval = *f.seed_eval;
  if (!f.models.empty()) c.select_models(f.models);
  if (!f.metrics.empty()) c.metrics.enabled = f.metrics;
  if (f.k) c.metrics.k = *f.k;
  if (f.n_explanations) c.metrics.n_explanations = *f.n_explanations;
  if (f.air_mode) c.metrics.air_mode = revexp::harness::parse_air_mode(*f.air_mode);
  if (f.tlae_mode) c.metrics.tlae_mode = revexp::harness::parse_tlae_mode(*f.tlae_mode);
  if (f.audit) c.audit = true;
  c.validate();
  out = f.out.empty() ? c.out : f.out;
  if (out.empty()) throw revexp::Error("no run directory: pass --out or set [run] out");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faithfulness evaluation pipeline for explainable recommenders"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen-corpus", "Generate or import the corpus"},
      {"train", "Train the roster's neural models and the text regressor"},
      {"generate", "Dump one explanation per test pair for every model"},
      {"evaluate", "Score every model with every enabled metric"},
      {"report", "Assemble report.json and report.txt"},
      {"run-all", "All stages in order"}};
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_flags(cmd, flags);
    cmd->callback([&chosen, n = name] { chosen = n; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    std::string out;
    const RunConfig config = resolve(flags, out);
    revexp::harness::RunPaths paths{out};
    revexp::harness::PipelineOptions opt;
    opt.corpus_dir = flags.corpus;
    opt.execution =
        flags.serial ? revexp::metrics::Execution::kSerial : revexp::metrics::Execution::kParallel;
    opt.log = flags.quiet ? nullptr : &std::cerr;
    if (chosen == "gen-corpus") {
      revexp::harness::gen_corpus_stage(config, paths, opt);
    } else if (chosen == "train") {
      revexp::harness::train_stage(config, paths, opt);
    } else if (chosen == "generate") {
      revexp::harness::generate_stage(config, paths, opt);
    } else if (chosen == "evaluate") {
      revexp::harness::evaluate_stage(config, paths, opt);
    } else if (chosen == "report") {
      std::cout << revexp::harness::report_to_table(
          revexp::harness::report_stage(config, paths, opt));
    } else {
      const auto report = revexp::harness::run_pipeline(config, paths, opt);
      std::cout << revexp::harness::report_to_table(report);
    }
  } catch (const std::exception& e) {
    std::cerr << "revexp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
