// spectex/pipeline.cc

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

#include "spectex/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "spectex/binary_io.h"
#include "spectex/error.h"

namespace spectex {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void rethrow_with(const std::string& prefix) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const fs::filesystem_error& e) {
    throw DataError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

// section.key -> value, from the canonical serialisation.
std::map<std::string, std::string> flat_config(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> out;
  std::istringstream is(cfg.serialize());
  std::string line, section;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find(" = ");
    out[section + "." + line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

class Fingerprint {
 public:
  explicit Fingerprint(std::string_view stage) { text_ << "stage=" << stage << '\n'; }
  Fingerprint& add(std::string_view key, std::string_view value) {
    text_ << key << '=' << value << '\n';
    return *this;
  }
  // Every key of `flat` starting with `prefix`.
  Fingerprint& add_prefix(const std::map<std::string, std::string>& flat, const std::string& prefix) {
    for (const auto& [k, v] : flat)
      if (k.rfind(prefix, 0) == 0) add(k, v);
    return *this;
  }
  std::string hex() const { return hex64(fnv1a64(text_.str())); }

 private:
  std::ostringstream text_;
};

std::string trial_list_hash(const std::vector<ProtocolEntry>& entries) {
  std::string s;
  for (const auto& e : entries) s += e.trial_id + ' ' + std::string(to_string(e.label)) + ' ' + e.attack_id + '\n';
  return hex64(fnv1a64(s));
}

void check_trial_id(const std::string& id) {
  if (id.empty() || id == "." || id == ".." || id.find('/') != std::string::npos ||
      id.find('\\') != std::string::npos)
    throw DataError("trial id '" + id + "' cannot be used as a file name");
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw DataError("cannot write " + tmp.string());
    os << text;
    if (!os) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

template <typename Writer>
void write_atomic(const fs::path& path, Writer&& writer) {
  const fs::path tmp = path.string() + ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct StageLog {
  fs::path path;
  std::vector<StageRecord>* records;
  void push(StageRecord r) {
    records->push_back(std::move(r));
    std::ostringstream os;
    for (const auto& s : *records) {
      os << s.name << ' ' << (s.fingerprint.empty() ? "-" : s.fingerprint) << ' '
         << (s.cached ? "cached" : "computed");
      if (s.name == "extract") os << " computed=" << s.computed << " reused=" << s.reused;
      char buf[32];
      std::snprintf(buf, sizeof(buf), " seconds=%.3f", s.seconds);
      os << buf << '\n';
    }
    write_text(path, os.str());
  }
};

bool uses_llr(const ExperimentConfig& cfg) { return cfg.classifier.kind == ClassifierKind::kGmmLlr; }

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kExtract: return "extract";
    case Stage::kGmmTrain: return "gmm-train";
    case Stage::kFvEncode: return "fv-encode";
    case Stage::kSvmTrain: return "svm-train";
    case Stage::kScore: return "score";
    case Stage::kEvaluate: return "evaluate";
    case Stage::kReport: return "report";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : {Stage::kExtract, Stage::kGmmTrain, Stage::kFvEncode, Stage::kSvmTrain, Stage::kScore,
                  Stage::kEvaluate, Stage::kReport})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

std::uint64_t stage_seed(std::uint64_t master, std::string_view stage) {
  return fnv1a64(std::string(stage) + ":" + std::to_string(master));
}

TimeFreqMatrix compute_transform(const TransformConfig& t, const AudioClip& clip) {
  switch (t.kind) {
    case TransformKind::kStft: return stft_power(clip, t.stft);
    case TransformKind::kLfcc: return lfcc_matrix(clip, t.lfcc);
    case TransformKind::kCqt: return cqt_power(clip, t.cqt);
    case TransformKind::kCqcc: return cqcc_matrix(clip, CqccParams{t.cqt, t.cqcc_coeffs});
  }
  throw ConfigError("unknown transform");
}

FeatureMatrix extract_features(const ExperimentConfig& cfg, const DescriptorConfig& desc,
                               const AudioClip& clip) {
  const AudioClip normalized = peak_normalize(clip);
  const TimeFreqMatrix tfm = compute_transform(cfg.transform, normalized);
  FeatureMatrix m;
  if (uses_llr(cfg)) {
    m.rows = tfm.cols;
    m.cols = tfm.rows;
    m.data.resize(m.rows * m.cols);
    for (std::size_t t = 0; t < tfm.cols; ++t)
      for (std::size_t r = 0; r < tfm.rows; ++r) m.data[t * m.cols + r] = tfm.at(r, t);
    return m;
  }
  const GrayImage img = render_gray_image(tfm, cfg.transform.dynamic_range_db);
  if (cfg.descriptor.encoding == EncodingMode::kGlobal) {
    const DescriptorVector dv = describe(img, desc);
    m.rows = 1;
    m.cols = dv.values.size();
    m.data = dv.values;
    return m;
  }
  const int block = cfg.descriptor.block;
  if (img.height < block || img.width < block)
    throw DataError("rendered image " + std::to_string(img.height) + "x" + std::to_string(img.width) +
                    " is smaller than the " + std::to_string(block) + " pixel block");
  const auto blocks = dense_local_descriptors(img, desc, block, cfg.descriptor.stride);
  std::vector<std::vector<double>> rows;
  rows.reserve(blocks.size());
  for (const auto& b : blocks) rows.push_back(b.values);
  return FeatureMatrix::from_rows(rows);
}

RunResult run_experiment(const ExperimentConfig& cfg, Stage last) {
  validate_config(cfg);
  const PathsConfig& P = cfg.paths;
  for (const auto& [name, path] : {std::pair<const char*, fs::path>{"paths.audio_dir", P.audio_dir},
                                   {"paths.train_protocol", P.train_protocol},
                                   {"paths.eval_protocol", P.eval_protocol}}) {
    if (path.empty()) throw ConfigError(std::string(name) + " is not set");
    if (!fs::exists(path)) throw ConfigError(std::string(name) + " does not exist: " + path.string());
  }
  if (!P.asv_scores.empty() && !fs::exists(P.asv_scores))
    throw ConfigError("paths.asv_scores does not exist: " + P.asv_scores.string());
  if (P.cache_dir.empty() || P.output_dir.empty())
    throw ConfigError("paths.cache_dir and paths.output_dir must be set");
  fs::create_directories(P.cache_dir);
  fs::create_directories(P.output_dir);

  RunResult result;
  StageLog log{P.output_dir / "stage_log.txt", &result.stages};
  const auto flat = flat_config(cfg);
  const bool llr = uses_llr(cfg);
  const bool global = !llr && cfg.descriptor.encoding == EncodingMode::kGlobal;

  ProtocolOptions popt;
  popt.format = P.protocol_format;
  popt.scenario = P.scenario;
  popt.columns = P.columns;
  popt.split = Split::kTrain;
  std::vector<ProtocolEntry> train, eval;
  try {
    train = parse_protocol(P.train_protocol, popt);
    popt.split = Split::kEval;
    eval = parse_protocol(P.eval_protocol, popt);
    if (train.empty() || eval.empty()) throw DataError("empty protocol");
    for (const auto& e : train) check_trial_id(e.trial_id);
    for (const auto& e : eval) check_trial_id(e.trial_id);
  } catch (...) {
    rethrow_with("protocol: ");
  }
  const std::string train_hash = trial_list_hash(train);
  const std::string eval_hash = trial_list_hash(eval);

  // ------------------------------------------------------------ extract
  DescriptorConfig desc;
  std::string fp_extract;
  fs::path extract_dir;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Fingerprint fp("extract");
      fp.add_prefix(flat, "transform.").add("paths.audio_dir", fs::absolute(P.audio_dir).string());
      fp.add("paths.audio_extension", P.audio_extension).add("classifier.kind", flat.at("classifier.kind"));
      if (!llr) {
        desc = resolve_descriptor(cfg.descriptor);
        fp.add("descriptor", desc.fingerprint())
            .add("descriptor.encoding", flat.at("descriptor.encoding"))
            .add("descriptor.block", flat.at("descriptor.block"))
            .add("descriptor.stride", flat.at("descriptor.stride"));
      }
      fp_extract = fp.hex();
      extract_dir = P.cache_dir / ("extract-" + fp_extract);
      fs::create_directories(extract_dir);
    } catch (...) {
      rethrow_with("stage extract: ");
    }

    // Unique trials in protocol order (train first).
    std::vector<std::string> ids;
    {
      std::map<std::string, bool> seen;
      for (const auto* list : {&train, &eval})
        for (const auto& e : *list)
          if (seen.emplace(e.trial_id, true).second) ids.push_back(e.trial_id);
    }
    std::vector<std::exception_ptr> errors(ids.size());
    std::atomic<std::size_t> next{0}, computed{0}, reused{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < ids.size(); i = next++) {
        try {
          const fs::path out = extract_dir / (ids[i] + ".fc");
          if (fs::exists(out)) {
            ++reused;
            continue;
          }
          const AudioClip clip = read_wav(P.audio_dir / (ids[i] + P.audio_extension));
          write_feature_cache(out, extract_features(cfg, desc, clip));
          ++computed;
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const int n_threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(ids.size())));
    if (n_threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!errors[i]) continue;
      try {
        std::rethrow_exception(errors[i]);
      } catch (...) {
        rethrow_with("stage extract, trial " + ids[i] + ": ");
      }
    }
    log.push({"extract", fp_extract, computed == 0, computed, reused, elapsed(t0)});
  }
  if (last == Stage::kExtract) return result;

  auto load_trial = [&](const std::string& id) { return read_feature_cache(extract_dir / (id + ".fc")); };

  // ------------------------------------------------------------ gmm-train
  const std::uint64_t gmm_seed = stage_seed(cfg.seed, "gmm-train");
  std::string fp_gmm;
  fs::path gmm_dir;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (global) {
        log.push({"gmm-train", "", true, 0, 0, 0.0});
      } else {
        Fingerprint fp("gmm-train");
        fp.add("upstream", fp_extract).add("train", train_hash).add("seed", std::to_string(gmm_seed));
        fp.add("fisher.gmm_max_iters", flat.at("fisher.gmm_max_iters"))
            .add("fisher.gmm_tol", flat.at("fisher.gmm_tol"))
            .add("fisher.partitions", flat.at("fisher.partitions"))
            .add("fisher.max_gmm_vectors", flat.at("fisher.max_gmm_vectors"));
        if (llr)
          fp.add("classifier.gmm_components", flat.at("classifier.gmm_components"));
        else
          fp.add("fisher.components", flat.at("fisher.components"));
        fp_gmm = fp.hex();
        gmm_dir = P.cache_dir / ("gmm-" + fp_gmm);
        fs::create_directories(gmm_dir);
        const std::vector<std::string> files =
            llr ? std::vector<std::string>{"bona.gmm", "attack.gmm"} : std::vector<std::string>{"ubm.gmm"};
        const bool done = std::all_of(files.begin(), files.end(),
                                      [&](const std::string& f) { return fs::exists(gmm_dir / f); });
        if (!done) {
          GmmOptions go;
          go.max_iters = cfg.fisher.gmm_max_iters;
          go.tol = cfg.fisher.gmm_tol;
          go.seed = gmm_seed;
          go.partitions = cfg.fisher.partitions;
          auto fit = [&](const std::vector<const ProtocolEntry*>& subset, int K, const fs::path& out,
                         std::uint64_t seed) {
            FeatureList data;
            for (const auto* e : subset) {
              const FeatureMatrix m = load_trial(e->trial_id);
              for (std::size_t r = 0; r < m.rows; ++r) data.emplace_back(m.row(r).begin(), m.row(r).end());
            }
            if (cfg.fisher.max_gmm_vectors > 0 && data.size() > cfg.fisher.max_gmm_vectors) {
              FeatureList sample;
              std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
              std::sample(data.begin(), data.end(), std::back_inserter(sample), cfg.fisher.max_gmm_vectors, rng);
              data = std::move(sample);
            }
            GmmOptions o = go;
            o.seed = seed;
            const GmmModel model = gmm_fit(data, K, o);
            write_atomic(out, [&](const fs::path& tmp) { write_gmm(tmp, model); });
          };
          if (llr) {
            std::vector<const ProtocolEntry*> bona, attack;
            for (const auto& e : train) (e.label == Label::kBonaFide ? bona : attack).push_back(&e);
            if (bona.empty() || attack.empty()) throw DataError("training protocol must contain both classes");
            fit(bona, cfg.classifier.gmm_components, gmm_dir / "bona.gmm", gmm_seed);
            fit(attack, cfg.classifier.gmm_components, gmm_dir / "attack.gmm", stage_seed(gmm_seed, "attack"));
          } else {
            std::vector<const ProtocolEntry*> all;
            for (const auto& e : train) all.push_back(&e);
            fit(all, cfg.fisher.components, gmm_dir / "ubm.gmm", gmm_seed);
          }
        }
        log.push({"gmm-train", fp_gmm, done, 0, 0, elapsed(t0)});
      }
    } catch (...) {
      rethrow_with("stage gmm-train: ");
    }
  }
  if (last == Stage::kGmmTrain) return result;

  // ------------------------------------------------------------ fv-encode
  std::string fp_fv;
  fs::path fv_dir;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (llr) {
        log.push({"fv-encode", "", true, 0, 0, 0.0});
      } else {
        Fingerprint fp("fv-encode");
        fp.add("upstream", global ? fp_extract : fp_gmm).add("train", train_hash).add("eval", eval_hash);
        if (!global)
          fp.add("fisher.power_norm", flat.at("fisher.power_norm")).add("fisher.l2_norm", flat.at("fisher.l2_norm"));
        fp_fv = fp.hex();
        fv_dir = P.cache_dir / ("fv-" + fp_fv);
        fs::create_directories(fv_dir);
        const bool done = fs::exists(fv_dir / "train.fc") && fs::exists(fv_dir / "eval.fc");
        if (!done) {
          GmmModel ubm;
          if (!global) ubm = read_gmm(gmm_dir / "ubm.gmm");
          FisherOptions fo;
          fo.power_norm = cfg.fisher.power_norm;
          fo.l2_norm = cfg.fisher.l2_norm;
          for (const auto& [list, name] : {std::pair{&train, "train.fc"}, std::pair{&eval, "eval.fc"}}) {
            std::vector<std::vector<double>> rows(list->size());
            std::vector<std::exception_ptr> errors(list->size());
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
              for (std::size_t i = next++; i < list->size(); i = next++) {
                try {
                  const FeatureMatrix m = load_trial((*list)[i].trial_id);
                  if (global) {
                    rows[i] = m.to_rows().at(0);
                  } else {
                    rows[i] = fisher_vector(ubm, m.to_rows(), fo).values;
                  }
                } catch (...) {
                  errors[i] = std::current_exception();
                }
              }
            };
            const int n_threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(list->size())));
            std::vector<std::thread> pool;
            for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
            for (std::size_t i = 0; i < list->size(); ++i) {
              if (!errors[i]) continue;
              try {
                std::rethrow_exception(errors[i]);
              } catch (...) {
                rethrow_with("trial " + (*list)[i].trial_id + ": ");
              }
            }
            write_feature_cache(fv_dir / name, FeatureMatrix::from_rows(rows));
          }
        }
        log.push({"fv-encode", fp_fv, done, 0, 0, elapsed(t0)});
      }
    } catch (...) {
      rethrow_with("stage fv-encode: ");
    }
  }
  if (last == Stage::kFvEncode) return result;

  // ------------------------------------------------------------ svm-train
  const std::uint64_t svm_seed = stage_seed(cfg.seed, "svm-train");
  std::string fp_svm;
  fs::path svm_dir;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (llr) {
        log.push({"svm-train", "", true, 0, 0, 0.0});
      } else {
        Fingerprint fp("svm-train");
        fp.add("upstream", fp_fv).add("seed", std::to_string(svm_seed));
        for (const char* k : {"classifier.C", "classifier.max_epochs", "classifier.class_balanced",
                              "classifier.standardize"})
          fp.add(k, flat.at(k));
        fp_svm = fp.hex();
        svm_dir = P.cache_dir / ("svm-" + fp_svm);
        fs::create_directories(svm_dir);
        const bool done = fs::exists(svm_dir / "model.svm");
        if (!done) {
          const FeatureMatrix X = read_feature_cache(fv_dir / "train.fc");
          std::vector<int> y;
          for (const auto& e : train) y.push_back(e.label == Label::kBonaFide ? 1 : -1);
          SvmOptions so;
          so.C = cfg.classifier.C;
          so.max_epochs = cfg.classifier.max_epochs;
          so.seed = svm_seed;
          so.class_balanced = cfg.classifier.class_balanced;
          so.standardize = cfg.classifier.standardize;
          const SvmModel model = svm_train(X.to_rows(), y, so);
          write_atomic(svm_dir / "model.svm", [&](const fs::path& tmp) { write_svm(tmp, model); });
        }
        log.push({"svm-train", fp_svm, done, 0, 0, elapsed(t0)});
      }
    } catch (...) {
      rethrow_with("stage svm-train: ");
    }
  }
  if (last == Stage::kSvmTrain) return result;

  // ------------------------------------------------------------ score
  ScoreSet scores;
  {
    const auto t0 = std::chrono::steady_clock::now();
    std::string current;
    try {
      if (llr) {
        const GmmModel bona = read_gmm(gmm_dir / "bona.gmm");
        const GmmModel attack = read_gmm(gmm_dir / "attack.gmm");
        for (const auto& e : eval) {
          current = e.trial_id;
          const FeatureMatrix m = load_trial(e.trial_id);
          scores.trials.push_back({e.trial_id, e.attack_id, e.label, gmm_llr_score(bona, attack, m.to_rows())});
        }
      } else {
        const SvmModel model = read_svm(svm_dir / "model.svm");
        const FeatureMatrix X = read_feature_cache(fv_dir / "eval.fc");
        if (X.rows != eval.size()) throw DataError("cached eval features do not match the protocol");
        for (std::size_t i = 0; i < eval.size(); ++i) {
          current = eval[i].trial_id;
          scores.trials.push_back({eval[i].trial_id, eval[i].attack_id, eval[i].label, svm_score(model, X.row(i))});
        }
      }
      current.clear();
      write_atomic(P.output_dir / "scores.txt", [&](const fs::path& tmp) { write_score_file(tmp, scores); });
    } catch (...) {
      rethrow_with(current.empty() ? std::string("stage score: ") : "stage score, trial " + current + ": ");
    }
    log.push({"score", "", false, 0, 0, elapsed(t0)});
  }

  // Run manifest: every parameter, derived seed and stage fingerprint.
  {
    std::ostringstream os;
    os << "# spectex run manifest\n" << cfg.serialize() << "\n[stages]\n";
    os << "extract = " << fp_extract << '\n';
    os << "gmm-train = " << (fp_gmm.empty() ? "-" : fp_gmm) << '\n';
    os << "fv-encode = " << (fp_fv.empty() ? "-" : fp_fv) << '\n';
    os << "svm-train = " << (fp_svm.empty() ? "-" : fp_svm) << '\n';
    os << "\n[seeds]\n";
    os << "gmm-train = " << gmm_seed << '\n';
    os << "svm-train = " << svm_seed << '\n';
    os << "\n[data]\n";
    os << "train_trials = " << train.size() << '\n';
    os << "eval_trials = " << eval.size() << '\n';
    os << "train_hash = " << train_hash << '\n';
    os << "eval_hash = " << eval_hash << '\n';
    write_text(P.output_dir / "run_manifest.txt", os.str());
  }
  if (last == Stage::kScore) return result;

  // ------------------------------------------------------------ evaluate
  std::optional<AsvScoreSet> asv;
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!P.asv_scores.empty()) asv = read_asv_scores(P.asv_scores);
      MetricSummary ms;
      ms.d_eer = compute_eer(scores);
      ms.bpcer10 = bpcer_at_apcer(scores, 0.10);
      ms.bpcer20 = bpcer_at_apcer(scores, 0.05);
      ms.bpcer100 = bpcer_at_apcer(scores, 0.01);
      if (asv) ms.min_tdcf = min_tdcf(scores, *asv, cfg.tdcf);
      write_atomic(P.output_dir / "det.txt", [&](const fs::path& tmp) { write_det_curve(tmp, det_curve(scores)); });
      const TdcfCosts defaults;
      const bool default_costs = cfg.tdcf.pi_tar == defaults.pi_tar && cfg.tdcf.pi_non == defaults.pi_non &&
                                 cfg.tdcf.pi_spoof == defaults.pi_spoof &&
                                 cfg.tdcf.c_miss_asv == defaults.c_miss_asv &&
                                 cfg.tdcf.c_fa_asv == defaults.c_fa_asv &&
                                 cfg.tdcf.c_miss_cm == defaults.c_miss_cm && cfg.tdcf.c_fa_cm == defaults.c_fa_cm;
      std::ostringstream os;
      os << "d_eer = " << fmt(ms.d_eer) << '\n';
      os << "bpcer10 = " << fmt(ms.bpcer10) << '\n';
      os << "bpcer20 = " << fmt(ms.bpcer20) << '\n';
      os << "bpcer100 = " << fmt(ms.bpcer100) << '\n';
      os << "min_tdcf = " << (ms.min_tdcf ? fmt(*ms.min_tdcf) : std::string("n/a")) << '\n';
      os << "tdcf_constants = "
         << (default_costs ? "ASVspoof 2019 evaluation plan defaults" : "custom (see run_manifest.txt)") << '\n';
      os << "n_bona_fide = "
         << std::count_if(scores.trials.begin(), scores.trials.end(),
                          [](const Trial& t) { return t.label == Label::kBonaFide; })
         << '\n';
      os << "n_attack = "
         << std::count_if(scores.trials.begin(), scores.trials.end(),
                          [](const Trial& t) { return t.label == Label::kAttack; })
         << '\n';
      write_text(P.output_dir / "metrics.txt", os.str());
      result.metrics = ms;
    } catch (...) {
      rethrow_with("stage evaluate: ");
    }
    log.push({"evaluate", "", false, 0, 0, elapsed(t0)});
  }
  if (last == Stage::kEvaluate) return result;

  // ------------------------------------------------------------ report
  {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      PaiReport report = per_pai_report(scores, eval, asv ? &*asv : nullptr, cfg.tdcf);
      write_text(P.output_dir / "report.csv", format_report_csv(report));
      write_text(P.output_dir / "report.txt", format_report_table(report));
      result.report = std::move(report);
    } catch (...) {
      rethrow_with("stage report: ");
    }
    log.push({"report", "", false, 0, 0, elapsed(t0)});
  }
  return result;
}

void run_synth_data(const ExperimentConfig& cfg) {
  if (cfg.synth_output_dir.empty()) throw ConfigError("synth.output_dir is not set");
  write_synthetic_corpus(cfg.synth_output_dir, cfg.synth);
}

int run_learn_bsif(const ExperimentConfig& cfg) {
  const LearnBsifConfig& L = cfg.learn_bsif;
  if (L.output_dir.empty()) throw ConfigError("learn_bsif.output_dir is not set");
  fs::create_directories(L.output_dir);
  int written = 0;
  for (int side : L.sides) {
    for (int count : L.counts) {
      if (count > 16 || count > side * side - 1) continue;
      const auto bank = default_filter_bank(side, count);
      const fs::path out = L.output_dir / ("bsif_" + std::to_string(side) + "x" + std::to_string(count) + ".bank");
      write_atomic(out, [&](const fs::path& tmp) { write_filter_bank(tmp, *bank); });
      ++written;
    }
  }
  return written;
}

}  // namespace spectex
