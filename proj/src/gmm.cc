// spectex/gmm.cc

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "spectex/binary_io.h"
#include "spectex/encoding.h"
#include "spectex/error.h"
#include "gmm_internal.h"

namespace spectex {

namespace internal {

void check_dim(const GmmModel& model, std::size_t d) {
  if (d != static_cast<std::size_t>(model.dim))
    throw DataError("gmm: vector dimension " + std::to_string(d) + " does not match model dimension " +
                    std::to_string(model.dim));
}

GmmEvaluator::GmmEvaluator(const GmmModel& model)
    : model_(model), inv_var_(model.variances.size()), offset_(model.num_components) {
  const int d = model.dim;
  for (int k = 0; k < model.num_components; ++k) {
    double log_det = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = model.variance(k)[j];
      inv_var_[static_cast<std::size_t>(k) * d + j] = 1.0 / v;
      log_det += std::log(2.0 * std::numbers::pi * v);
    }
    offset_[k] = std::log(model.weights[k]) - 0.5 * log_det;
  }
}

void GmmEvaluator::log_joint(const double* x, double* out) const {
  const int d = model_.dim;
  for (int k = 0; k < model_.num_components; ++k) {
    const double* mu = model_.mean(k);
    const double* iv = inv_var_.data() + static_cast<std::size_t>(k) * d;
    double q = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = x[j] - mu[j];
      q += diff * diff * iv[j];
    }
    out[k] = offset_[k] - 0.5 * q;
  }
}

double GmmEvaluator::posteriors(const double* x, double* post) const {
  const int K = model_.num_components;
  log_joint(x, post);
  const double top = *std::max_element(post, post + K);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    post[k] = std::exp(post[k] - top);
    sum += post[k];
  }
  for (int k = 0; k < K; ++k) post[k] /= sum;
  return top + std::log(sum);
}

}  // namespace internal

namespace {

constexpr double kEmptyMass = 1e-6;

struct Stats {
  std::vector<double> s0, s1, s2;  // K, K x d, K x d (data shifted by the global mean)
  double ll_sum = 0.0;
  std::size_t worst = 0;
  double worst_ll = std::numeric_limits<double>::infinity();
};

void check_data(std::span<const std::vector<double>> data) {
  if (data.empty()) throw DataError("gmm: no data");
  const std::size_t d = data[0].size();
  if (d == 0) throw DataError("gmm: zero-dimensional data");
  for (const auto& x : data) {
    if (x.size() != d) throw DataError("gmm: inconsistent vector dimensions");
    for (double v : x)
      if (!std::isfinite(v)) throw DataError("gmm: non-finite value in data");
  }
}

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

// k-means++ seeding followed by a few Lloyd iterations. Returns K x d centres
// and the final assignment.
std::vector<double> kmeans_init(std::span<const std::vector<double>> data, int K, int iters,
                                std::mt19937_64& rng, std::vector<int>& assign) {
  const std::size_t n = data.size();
  const int d = static_cast<int>(data[0].size());
  std::vector<double> centres(static_cast<std::size_t>(K) * d);
  auto set_centre = [&](int k, std::size_t i) {
    std::copy(data[i].begin(), data[i].end(), centres.begin() + static_cast<std::ptrdiff_t>(k) * d);
  };
  set_centre(0, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(data[i].data(), centres.data(), d);
  for (int k = 1; k < K; ++k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    set_centre(k, pick);
    const double* c = centres.data() + static_cast<std::size_t>(k) * d;
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(data[i].data(), c, d));
  }

  assign.assign(n, 0);
  for (int it = 0; it <= iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int k = 0; k < K; ++k) {
        const double dist = sq_dist(data[i].data(), centres.data() + static_cast<std::size_t>(k) * d, d);
        if (dist < best_d) {
          best_d = dist;
          best = k;
        }
      }
      assign[i] = best;
    }
    if (it == iters) break;
    std::vector<double> sum(centres.size(), 0.0);
    std::vector<std::size_t> count(K, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[assign[i]];
      double* s = sum.data() + static_cast<std::size_t>(assign[i]) * d;
      for (int j = 0; j < d; ++j) s[j] += data[i][j];
    }
    for (int k = 0; k < K; ++k) {
      if (count[k] == 0) continue;  // empty cluster keeps its centre
      for (int j = 0; j < d; ++j)
        centres[static_cast<std::size_t>(k) * d + j] = sum[static_cast<std::size_t>(k) * d + j] / count[k];
    }
  }
  return centres;
}

void e_step_range(const internal::GmmEvaluator& eval, std::span<const std::vector<double>> data,
                  const std::vector<double>& shift, std::size_t begin, std::size_t end, Stats& st) {
  const GmmModel& m = eval.model();
  const int K = m.num_components, d = m.dim;
  st.s0.assign(K, 0.0);
  st.s1.assign(static_cast<std::size_t>(K) * d, 0.0);
  st.s2.assign(static_cast<std::size_t>(K) * d, 0.0);
  std::vector<double> post(K), xs(d);
  for (std::size_t i = begin; i < end; ++i) {
    const double ll = eval.posteriors(data[i].data(), post.data());
    st.ll_sum += ll;
    if (ll < st.worst_ll) {
      st.worst_ll = ll;
      st.worst = i;
    }
    for (int j = 0; j < d; ++j) xs[j] = data[i][j] - shift[j];
    for (int k = 0; k < K; ++k) {
      const double g = post[k];
      if (g == 0.0) continue;
      st.s0[k] += g;
      double* s1 = st.s1.data() + static_cast<std::size_t>(k) * d;
      double* s2 = st.s2.data() + static_cast<std::size_t>(k) * d;
      for (int j = 0; j < d; ++j) {
        const double gx = g * xs[j];
        s1[j] += gx;
        s2[j] += gx * xs[j];
      }
    }
  }
}

// Runs the E-step over `parts` contiguous partitions and reduces them in
// partition order, so the result depends on the partition count only.
Stats e_step(const GmmModel& model, std::span<const std::vector<double>> data,
             const std::vector<double>& shift, int parts) {
  const internal::GmmEvaluator eval(model);
  const std::size_t n = data.size();
  parts = std::max(1, std::min<int>(parts, static_cast<int>(n)));
  std::vector<Stats> partial(parts);
  auto range = [&](int p) {
    return std::make_pair(n * p / parts, n * (p + 1) / parts);
  };
  if (parts == 1) {
    e_step_range(eval, data, shift, 0, n, partial[0]);
  } else {
    std::vector<std::thread> workers;
    for (int p = 0; p < parts; ++p)
      workers.emplace_back([&, p] {
        const auto [b, e] = range(p);
        e_step_range(eval, data, shift, b, e, partial[p]);
      });
    for (auto& t : workers) t.join();
  }
  Stats total = std::move(partial[0]);
  for (int p = 1; p < parts; ++p) {
    const Stats& s = partial[p];
    for (std::size_t i = 0; i < total.s0.size(); ++i) total.s0[i] += s.s0[i];
    for (std::size_t i = 0; i < total.s1.size(); ++i) {
      total.s1[i] += s.s1[i];
      total.s2[i] += s.s2[i];
    }
    total.ll_sum += s.ll_sum;
    if (s.worst_ll < total.worst_ll) {
      total.worst_ll = s.worst_ll;
      total.worst = s.worst;
    }
  }
  return total;
}

}  // namespace

void validate_gmm(const GmmModel& m) {
  if (m.num_components < 1 || m.dim < 1) throw DataError("gmm: empty model");
  const std::size_t kd = static_cast<std::size_t>(m.num_components) * m.dim;
  if (m.weights.size() != static_cast<std::size_t>(m.num_components) || m.means.size() != kd ||
      m.variances.size() != kd)
    throw DataError("gmm: parameter sizes do not match K and d");
  double sum = 0.0;
  for (double w : m.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DataError("gmm: weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DataError("gmm: weights do not sum to 1");
  for (double v : m.means)
    if (!std::isfinite(v)) throw DataError("gmm: non-finite mean");
  for (double v : m.variances)
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("gmm: variances must be positive");
}

GmmModel gmm_fit(std::span<const std::vector<double>> data, int K, const GmmOptions& opts,
                 GmmFitTrace* trace) {
  if (K < 1) throw ConfigError("gmm: K must be >= 1");
  if (opts.max_iters < 1) throw ConfigError("gmm: max_iters must be >= 1");
  if (opts.partitions < 1) throw ConfigError("gmm: partitions must be >= 1");
  check_data(data);
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(10) * K)
    throw DataError("gmm: need at least 10*K training vectors");
  const int d = static_cast<int>(data[0].size());

  std::vector<double> gmean(d, 0.0), gvar(d, 0.0);
  for (const auto& x : data)
    for (int j = 0; j < d; ++j) gmean[j] += x[j];
  for (double& v : gmean) v /= static_cast<double>(n);
  for (const auto& x : data)
    for (int j = 0; j < d; ++j) gvar[j] += (x[j] - gmean[j]) * (x[j] - gmean[j]);
  std::vector<double> floor(d);
  for (int j = 0; j < d; ++j) {
    gvar[j] /= static_cast<double>(n);
    floor[j] = std::max(opts.floor_ratio * gvar[j], 1e-10);
  }

  GmmModel model;
  model.num_components = K;
  model.dim = d;
  model.variance_floor = floor;
  {
    std::mt19937_64 rng(opts.seed);
    std::vector<int> assign;
    model.means = kmeans_init(data, K, opts.kmeans_iters, rng, assign);
    std::vector<double> count(K, 0.0), var(static_cast<std::size_t>(K) * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int k = assign[i];
      count[k] += 1.0;
      const double* mu = model.mean(k);
      for (int j = 0; j < d; ++j)
        var[static_cast<std::size_t>(k) * d + j] += (data[i][j] - mu[j]) * (data[i][j] - mu[j]);
    }
    model.weights.resize(K);
    model.variances.resize(static_cast<std::size_t>(K) * d);
    double wsum = 0.0;
    for (int k = 0; k < K; ++k) {
      model.weights[k] = std::max(count[k], 1.0);
      wsum += model.weights[k];
      for (int j = 0; j < d; ++j) {
        const std::size_t idx = static_cast<std::size_t>(k) * d + j;
        const double v = count[k] > 1.0 ? var[idx] / count[k] : gvar[j];
        model.variances[idx] = std::max(v, floor[j]);
      }
    }
    for (double& w : model.weights) w /= wsum;
  }

  GmmFitTrace local;
  GmmFitTrace& tr = trace ? *trace : local;
  tr = GmmFitTrace{};
  double prev = -std::numeric_limits<double>::infinity();
  bool just_reseeded = false;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Stats st = e_step(model, data, gmean, opts.partitions);
    const double ll = st.ll_sum / static_cast<double>(n);
    if (!std::isfinite(ll)) throw NumericError("gmm: log-likelihood is not finite");
    tr.log_likelihood.push_back(ll);
    tr.iterations = iter + 1;
    if (iter > 0 && !just_reseeded && ll - prev < opts.tol) {
      tr.converged = true;
      break;
    }
    just_reseeded = false;
    prev = ll;

    double wsum = 0.0;
    for (int k = 0; k < K; ++k) {
      double* mu = model.means.data() + static_cast<std::size_t>(k) * d;
      double* var = model.variances.data() + static_cast<std::size_t>(k) * d;
      const double nk = st.s0[k];
      if (nk < kEmptyMass) {
        if (tr.reseeds > 0) throw NumericError("gmm: component " + std::to_string(k) + " is empty");
        ++tr.reseeds;
        just_reseeded = true;
        // Restart the component on the least explained point.
        const auto& x = data[st.worst];
        for (int j = 0; j < d; ++j) {
          mu[j] = x[j];
          var[j] = std::max(gvar[j], floor[j]);
        }
        model.weights[k] = 1.0 / static_cast<double>(n);
      } else {
        const double* s1 = st.s1.data() + static_cast<std::size_t>(k) * d;
        const double* s2 = st.s2.data() + static_cast<std::size_t>(k) * d;
        for (int j = 0; j < d; ++j) {
          const double m = s1[j] / nk;
          mu[j] = m + gmean[j];
          var[j] = std::max(s2[j] / nk - m * m, floor[j]);
        }
        model.weights[k] = nk / static_cast<double>(n);
      }
      wsum += model.weights[k];
    }
    for (double& w : model.weights) w /= wsum;
  }
  validate_gmm(model);
  return model;
}

std::vector<double> gmm_posteriors(const GmmModel& model, std::span<const double> x) {
  internal::check_dim(model, x.size());
  const internal::GmmEvaluator eval(model);
  std::vector<double> post(model.num_components);
  eval.posteriors(x.data(), post.data());
  return post;
}

double gmm_log_likelihood(const GmmModel& model, std::span<const std::vector<double>> frames) {
  if (frames.empty()) throw DataError("gmm: no frames to score");
  const internal::GmmEvaluator eval(model);
  std::vector<double> post(model.num_components);
  double sum = 0.0;
  for (const auto& x : frames) {
    internal::check_dim(model, x.size());
    sum += eval.posteriors(x.data(), post.data());
  }
  return sum / static_cast<double>(frames.size());
}

void write_gmm(const std::filesystem::path& path, const GmmModel& model) {
  validate_gmm(model);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os << "GMM1\n" << model.num_components << ' ' << model.dim << '\n';
  write_f64_le(os, model.weights);
  write_f64_le(os, model.means);
  write_f64_le(os, model.variances);
  if (!os) throw DataError("write failed: " + path.string());
}

GmmModel read_gmm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  expect_magic(is, "GMM1\n", "gmm model");
  const auto hdr = read_header_ints(is, 2, "gmm model");
  if (hdr[0] == 0 || hdr[1] == 0 || hdr[0] > (1u << 20) || hdr[1] > (1u << 20))
    throw DataError("gmm model: header out of range");
  GmmModel m;
  m.num_components = static_cast<int>(hdr[0]);
  m.dim = static_cast<int>(hdr[1]);
  const std::size_t kd = static_cast<std::size_t>(m.num_components) * m.dim;
  m.weights = read_f64_le(is, m.num_components, "gmm weights");
  m.means = read_f64_le(is, kd, "gmm means");
  m.variances = read_f64_le(is, kd, "gmm variances");
  if (!at_eof(is)) throw DataError("gmm model: trailing bytes");
  validate_gmm(m);
  return m;
}

}  // namespace spectex
