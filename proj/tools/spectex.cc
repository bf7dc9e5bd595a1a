// tools/spectex.cc

// Copyright 2026  The spectex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. Every stage subcommand runs the pipeline up to
// that stage; earlier stages are reused from the cache when unchanged.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
// failure, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spectex/error.h"
#include "spectex/pipeline.h"

namespace {

constexpr const char* kAudioNote =
    "Audio must be 16-bit PCM mono WAV. FLAC corpora (ASVspoof 2019) need converting first,\n"
    "for example: sox in.flac -b 16 out.wav";

void print_result(const spectex::RunResult& r) {
  for (const auto& s : r.stages) {
    std::printf("%-10s %-16s %s", s.name.c_str(), s.fingerprint.empty() ? "-" : s.fingerprint.c_str(),
                s.cached ? "cached" : "computed");
    if (s.name == "extract") std::printf(" (computed %zu, reused %zu)", s.computed, s.reused);
    std::printf(" %.2fs\n", s.seconds);
  }
  if (r.metrics) {
    std::printf("D-EER        %.4f%%\n", 100.0 * r.metrics->d_eer);
    std::printf("BPCER@10%%    %.4f%%\n", 100.0 * r.metrics->bpcer10);
    std::printf("BPCER@5%%     %.4f%%\n", 100.0 * r.metrics->bpcer20);
    std::printf("BPCER@1%%     %.4f%%\n", 100.0 * r.metrics->bpcer100);
    if (r.metrics->min_tdcf) std::printf("min t-DCF    %.6f\n", *r.metrics->min_tdcf);
  }
  if (r.report) std::cout << '\n' << spectex::format_report_table(*r.report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectex: texture descriptors on time-frequency images for spoofing detection"};
  app.footer(kAudioNote);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::string stage_name;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment configuration (INI)")->required();
    sub->add_option("--jobs", jobs, "Worker threads (overrides [run] jobs)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Master seed (overrides [run] seed)");
  };

  struct StageCommand {
    const char* name;
    const char* help;
    spectex::Stage stage;
  };
  const StageCommand stage_commands[] = {
      {"extract", "Compute per-trial features into the cache", spectex::Stage::kExtract},
      {"gmm-train", "Train the descriptor GMM (or class GMMs for gmm_llr)", spectex::Stage::kGmmTrain},
      {"fv-encode", "Encode train and eval trials as Fisher vectors", spectex::Stage::kFvEncode},
      {"svm-train", "Train the linear SVM", spectex::Stage::kSvmTrain},
      {"score", "Score eval trials and write scores.txt", spectex::Stage::kScore},
      {"evaluate", "Compute D-EER, BPCER and min t-DCF", spectex::Stage::kEvaluate},
      {"report", "Write the per-attack report", spectex::Stage::kReport},
  };
  std::vector<std::pair<CLI::App*, spectex::Stage>> stage_subs;
  for (const auto& c : stage_commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    stage_subs.emplace_back(sub, c.stage);
  }
  CLI::App* run = app.add_subcommand("run", "Run the pipeline up to --stage (default: report)");
  common(run);
  run->add_option("--stage", stage_name, "Last stage to run");
  CLI::App* synth = app.add_subcommand("synth-data", "Generate the synthetic replay mini-corpus");
  common(synth);
  CLI::App* learn = app.add_subcommand("learn-bsif", "Learn BSIF filter banks from natural image patches");
  common(learn);

  CLI11_PARSE(app, argc, argv);

  try {
    spectex::ExperimentConfig cfg = spectex::load_config(config_path);
    if (jobs) cfg.jobs = *jobs;
    if (seed) {
      cfg.seed = *seed;
      cfg.synth.seed = *seed;
    }
    if (synth->parsed()) {
      spectex::run_synth_data(cfg);
      std::printf("wrote synthetic corpus to %s\n", cfg.synth_output_dir.string().c_str());
      return 0;
    }
    if (learn->parsed()) {
      const int n = spectex::run_learn_bsif(cfg);
      std::printf("wrote %d filter banks to %s\n", n, cfg.learn_bsif.output_dir.string().c_str());
      return 0;
    }
    spectex::Stage last = spectex::Stage::kReport;
    if (run->parsed()) {
      if (!stage_name.empty()) last = spectex::parse_stage(stage_name);
    } else {
      for (const auto& [sub, stage] : stage_subs)
        if (sub->parsed()) last = stage;
    }
    print_result(spectex::run_experiment(cfg, last));
    return 0;
  } catch (const spectex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const spectex::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const spectex::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
