// spectex/config.cc

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

#include "spectex/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spectex/error.h"

namespace spectex {

namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_int(const std::string& s, const std::string& key) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> parse_ints(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(parse_int<int>(item, key));
  return out;
}

struct Binding {
  const char* section;
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const fs::path&)> set;
};

#define SPX_INT(sec, name, field)                                                       \
  Binding{sec, name, [](const ExperimentConfig& c) { return std::to_string(c.field); }, \
          [](ExperimentConfig& c, const std::string& v, const fs::path&) {              \
            c.field = parse_int<decltype(c.field)>(v, std::string(sec) + "." + name);   \
          }}
#define SPX_DOUBLE(sec, name, field)                                                  \
  Binding{sec, name, [](const ExperimentConfig& c) { return fmt_double(c.field); },   \
          [](ExperimentConfig& c, const std::string& v, const fs::path&) {            \
            c.field = parse_double(v, std::string(sec) + "." + name);                 \
          }}
#define SPX_BOOL(sec, name, field)                                                             \
  Binding{sec, name, [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); }, \
          [](ExperimentConfig& c, const std::string& v, const fs::path&) {                     \
            c.field = parse_bool(v, std::string(sec) + "." + name);                            \
          }}
#define SPX_PATH(sec, name, field)                                                           \
  Binding{sec, name, [](const ExperimentConfig& c) { return c.field.string(); },             \
          [](ExperimentConfig& c, const std::string& v, const fs::path& base) {              \
            fs::path p(v);                                                                   \
            c.field = (p.empty() || p.is_absolute() || base.empty()) ? p : (base / p).lexically_normal(); \
          }}
#define SPX_INTS(sec, name, field)                                                    \
  Binding{sec, name, [](const ExperimentConfig& c) { return join_ints(c.field); },    \
          [](ExperimentConfig& c, const std::string& v, const fs::path&) {            \
            c.field = parse_ints(v, std::string(sec) + "." + name);                   \
          }}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = {
      SPX_PATH("paths", "audio_dir", paths.audio_dir),
      Binding{"paths", "audio_extension", [](const ExperimentConfig& c) { return c.paths.audio_extension; },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.paths.audio_extension = v; }},
      SPX_PATH("paths", "train_protocol", paths.train_protocol),
      SPX_PATH("paths", "eval_protocol", paths.eval_protocol),
      SPX_PATH("paths", "asv_scores", paths.asv_scores),
      SPX_PATH("paths", "cache_dir", paths.cache_dir),
      SPX_PATH("paths", "output_dir", paths.output_dir),
      Binding{"paths", "protocol_format",
              [](const ExperimentConfig& c) {
                return std::string(c.paths.protocol_format == ProtocolFormat::kNative ? "native" : "asvspoof2019");
              },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                c.paths.protocol_format = parse_protocol_format(v);
              }},
      Binding{"paths", "scenario", [](const ExperimentConfig& c) { return std::string(to_string(c.paths.scenario)); },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.paths.scenario = parse_scenario(v); }},
      SPX_INT("paths", "trial_column", paths.columns.trial),
      SPX_INTS("paths", "attack_columns", paths.columns.attack),
      SPX_INT("paths", "label_column", paths.columns.label),

      Binding{"transform", "kind", [](const ExperimentConfig& c) { return std::string(to_string(c.transform.kind)); },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                c.transform.kind = parse_transform_kind(v);
              }},
      SPX_DOUBLE("transform", "dynamic_range_db", transform.dynamic_range_db),
      SPX_INT("transform", "stft_window", transform.stft.window_len),
      SPX_INT("transform", "stft_hop", transform.stft.hop),
      SPX_INT("transform", "stft_fft", transform.stft.fft_len),
      SPX_INT("transform", "lfcc_filters", transform.lfcc.n_filters),
      SPX_INT("transform", "lfcc_coeffs", transform.lfcc.n_coeffs),
      SPX_INT("transform", "lfcc_window", transform.lfcc.window_len),
      SPX_INT("transform", "lfcc_hop", transform.lfcc.hop),
      SPX_INT("transform", "lfcc_fft", transform.lfcc.fft_len),
      SPX_DOUBLE("transform", "cqt_fmin", transform.cqt.f_min),
      SPX_INT("transform", "cqt_bins_per_octave", transform.cqt.bins_per_octave),
      SPX_INT("transform", "cqt_octaves", transform.cqt.n_octaves),
      SPX_INT("transform", "cqt_hop", transform.cqt.hop),
      SPX_INT("transform", "cqcc_coeffs", transform.cqcc_coeffs),

      Binding{"descriptor", "kind", [](const ExperimentConfig& c) { return std::string(to_string(c.descriptor.kind)); },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                c.descriptor.kind = parse_descriptor_kind(v);
              }},
      Binding{"descriptor", "lbp_scales",
              [](const ExperimentConfig& c) {
                std::string s;
                for (std::size_t i = 0; i < c.descriptor.lbp_scales.size(); ++i)
                  s += (i ? "," : "") + std::to_string(c.descriptor.lbp_scales[i].first) + ":" +
                       std::to_string(c.descriptor.lbp_scales[i].second);
                return s;
              },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                c.descriptor.lbp_scales.clear();
                for (const auto& item : split_list(v)) {
                  const auto colon = item.find(':');
                  if (colon == std::string::npos)
                    throw ConfigError("descriptor.lbp_scales: expected radius:neighbors, got '" + item + "'");
                  c.descriptor.lbp_scales.emplace_back(
                      parse_int<int>(trim(item.substr(0, colon)), "descriptor.lbp_scales"),
                      parse_int<int>(trim(item.substr(colon + 1)), "descriptor.lbp_scales"));
                }
              }},
      SPX_INTS("descriptor", "mblbp_sides", descriptor.mb_lbp_sides),
      SPX_INTS("descriptor", "lpq_windows", descriptor.lpq_windows),
      SPX_DOUBLE("descriptor", "lpq_rho", descriptor.lpq_rho),
      Binding{"descriptor", "bsif_banks",
              [](const ExperimentConfig& c) {
                std::string s;
                for (std::size_t i = 0; i < c.descriptor.bsif_banks.size(); ++i)
                  s += (i ? "," : "") + c.descriptor.bsif_banks[i];
                return s;
              },
              [](ExperimentConfig& c, const std::string& v, const fs::path& base) {
                c.descriptor.bsif_banks.clear();
                for (const auto& item : split_list(v)) {
                  int l = 0, n = 0;
                  char x = 0, extra = 0;
                  if (std::sscanf(item.c_str(), "%d%c%d%c", &l, &x, &n, &extra) == 3 && x == 'x') {
                    c.descriptor.bsif_banks.push_back(item);
                  } else {
                    fs::path p(item);
                    if (!p.is_absolute() && !base.empty()) p = (base / p).lexically_normal();
                    c.descriptor.bsif_banks.push_back(p.string());
                  }
                }
              }},
      Binding{"descriptor", "encoding",
              [](const ExperimentConfig& c) {
                return std::string(c.descriptor.encoding == EncodingMode::kFisher ? "fisher" : "global");
              },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                if (v == "fisher")
                  c.descriptor.encoding = EncodingMode::kFisher;
                else if (v == "global")
                  c.descriptor.encoding = EncodingMode::kGlobal;
                else
                  throw ConfigError("descriptor.encoding: expected fisher or global");
              }},
      SPX_INT("descriptor", "block", descriptor.block),
      SPX_INT("descriptor", "stride", descriptor.stride),

      SPX_INT("fisher", "components", fisher.components),
      SPX_BOOL("fisher", "power_norm", fisher.power_norm),
      SPX_BOOL("fisher", "l2_norm", fisher.l2_norm),
      SPX_INT("fisher", "gmm_max_iters", fisher.gmm_max_iters),
      SPX_DOUBLE("fisher", "gmm_tol", fisher.gmm_tol),
      SPX_INT("fisher", "partitions", fisher.partitions),
      SPX_INT("fisher", "max_gmm_vectors", fisher.max_gmm_vectors),

      Binding{"classifier", "kind",
              [](const ExperimentConfig& c) {
                return std::string(c.classifier.kind == ClassifierKind::kSvm ? "svm" : "gmm_llr");
              },
              [](ExperimentConfig& c, const std::string& v, const fs::path&) {
                if (v == "svm")
                  c.classifier.kind = ClassifierKind::kSvm;
                else if (v == "gmm_llr")
                  c.classifier.kind = ClassifierKind::kGmmLlr;
                else
                  throw ConfigError("classifier.kind: expected svm or gmm_llr");
              }},
      SPX_DOUBLE("classifier", "C", classifier.C),
      SPX_INT("classifier", "max_epochs", classifier.max_epochs),
      SPX_BOOL("classifier", "class_balanced", classifier.class_balanced),
      SPX_BOOL("classifier", "standardize", classifier.standardize),
      SPX_INT("classifier", "gmm_components", classifier.gmm_components),

      SPX_DOUBLE("tdcf", "pi_tar", tdcf.pi_tar),
      SPX_DOUBLE("tdcf", "pi_non", tdcf.pi_non),
      SPX_DOUBLE("tdcf", "pi_spoof", tdcf.pi_spoof),
      SPX_DOUBLE("tdcf", "c_miss_asv", tdcf.c_miss_asv),
      SPX_DOUBLE("tdcf", "c_fa_asv", tdcf.c_fa_asv),
      SPX_DOUBLE("tdcf", "c_miss_cm", tdcf.c_miss_cm),
      SPX_DOUBLE("tdcf", "c_fa_cm", tdcf.c_fa_cm),

      SPX_INT("run", "seed", seed),
      SPX_INT("run", "jobs", jobs),

      SPX_PATH("synth", "output_dir", synth_output_dir),
      SPX_INT("synth", "n_bona_fide", synth.n_bona_fide),
      SPX_INT("synth", "n_attack", synth.n_attack),
      SPX_INT("synth", "n_attack_types", synth.n_attack_types),
      SPX_INT("synth", "sample_rate", synth.sample_rate),
      SPX_DOUBLE("synth", "seconds", synth.seconds),
      SPX_DOUBLE("synth", "train_fraction", synth.train_fraction),
      SPX_INT("synth", "seed", synth.seed),

      SPX_PATH("learn_bsif", "output_dir", learn_bsif.output_dir),
      SPX_INTS("learn_bsif", "sides", learn_bsif.sides),
      SPX_INTS("learn_bsif", "counts", learn_bsif.counts),
  };
  return table;
}

#undef SPX_INT
#undef SPX_DOUBLE
#undef SPX_BOOL
#undef SPX_PATH
#undef SPX_INTS

}  // namespace

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  std::string section;
  for (const Binding& b : bindings()) {
    if (section != b.section) {
      if (!section.empty()) os << '\n';
      section = b.section;
      os << '[' << section << "]\n";
    }
    os << b.key << " = " << b.get(*this) << '\n';
  }
  return os.str();
}

ExperimentConfig parse_config(const std::string& text, const fs::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [section, children] : tree) {
    if (children.empty()) {
      if (!children.data().empty())
        throw ConfigError("config: key '" + section + "' outside of a [section]");
      continue;  // empty section
    }
    for (const auto& [key, node] : children) {
      const Binding* found = nullptr;
      for (const Binding& b : bindings())
        if (section == b.section && key == b.key) found = &b;
      if (!found) throw ConfigError("config: unknown key '" + section + "." + key + "'");
      found->set(cfg, trim(node.get_value<std::string>()), base_dir);
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), fs::absolute(path).parent_path());
}

void validate_config(const ExperimentConfig& c) {
  const auto& t = c.transform;
  if (!(t.dynamic_range_db > 0.0)) throw ConfigError("transform.dynamic_range_db must be > 0");
  if (t.stft.window_len < 1 || t.stft.hop < 1 || t.stft.fft_len < t.stft.window_len)
    throw ConfigError("transform: invalid STFT parameters");
  if (t.lfcc.n_filters < 2 || t.lfcc.n_coeffs < 1 || t.lfcc.n_coeffs > t.lfcc.n_filters)
    throw ConfigError("transform: invalid LFCC parameters");
  if (t.cqt.bins_per_octave < 1 || t.cqt.n_octaves < 1 || t.cqt.hop < 1)
    throw ConfigError("transform: invalid CQT parameters");
  if (t.cqcc_coeffs < 1 || t.cqcc_coeffs > t.cqt.bins_per_octave * t.cqt.n_octaves)
    throw ConfigError("transform.cqcc_coeffs out of range");
  const auto& d = c.descriptor;
  if (d.block < 1 || d.stride < 1) throw ConfigError("descriptor: block and stride must be >= 1");
  if (d.kind == DescriptorKind::kBsif && d.bsif_banks.empty())
    throw ConfigError("descriptor.bsif_banks is empty");
  if (!(d.lpq_rho >= 0.0 && d.lpq_rho < 1.0)) throw ConfigError("descriptor.lpq_rho must be in [0, 1)");
  if (c.fisher.components < 1) throw ConfigError("fisher.components must be >= 1");
  if (c.fisher.gmm_max_iters < 1 || !(c.fisher.gmm_tol >= 0.0))
    throw ConfigError("fisher: invalid EM settings");
  if (c.fisher.partitions < 1) throw ConfigError("fisher.partitions must be >= 1");
  if (!(c.classifier.C > 0.0)) throw ConfigError("classifier.C must be > 0");
  if (c.classifier.max_epochs < 1) throw ConfigError("classifier.max_epochs must be >= 1");
  if (c.classifier.gmm_components < 1) throw ConfigError("classifier.gmm_components must be >= 1");
  if (c.jobs < 1) throw ConfigError("run.jobs must be >= 1");
  validate_costs(c.tdcf);
}

DescriptorConfig resolve_descriptor(const DescriptorSettings& s) {
  DescriptorConfig dc;
  dc.kind = s.kind;
  dc.lbp_scales = s.lbp_scales;
  dc.mb_lbp_sides = s.mb_lbp_sides;
  dc.lpq_windows = s.lpq_windows;
  dc.lpq_rho = s.lpq_rho;
  if (s.kind == DescriptorKind::kBsif) {
    for (const std::string& item : s.bsif_banks) {
      int l = 0, n = 0;
      char x = 0, extra = 0;
      if (std::sscanf(item.c_str(), "%d%c%d%c", &l, &x, &n, &extra) == 3 && x == 'x')
        dc.bsif_banks.push_back(default_filter_bank(l, n));
      else
        dc.bsif_banks.push_back(std::make_shared<const FilterBank>(load_filter_bank(item)));
    }
  }
  return dc;
}

}  // namespace spectex
