// Copyright 2026 The HIGGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "higgs/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

namespace higgs {

AccuracyReport compute_accuracy(std::span<const Weight> truths,
                                std::span<const Weight> estimates) {
  if (truths.empty()) throw Error("accuracy is undefined for zero queries");
  if (truths.size() != estimates.size()) {
    throw Error("truth and estimate counts differ");
  }
  AccuracyReport r;
  r.query_count = truths.size();
  double abs_sum = 0.0, rel_sum = 0.0;
  std::uint64_t rel_count = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double t = static_cast<double>(truths[i]);
    const double e = static_cast<double>(estimates[i]);
    if (estimates[i] < truths[i]) ++r.one_sided_violations;
    const double err = std::fabs(t - e);
    abs_sum += err;
    r.max_error = std::max(r.max_error, err);
    if (truths[i] == 0) {
      ++r.zero_truth_count;
    } else {
      rel_sum += err / t;
      ++rel_count;
    }
  }
  r.aae = abs_sum / static_cast<double>(r.query_count);
  r.are = rel_count == 0 ? 0.0 : rel_sum / static_cast<double>(rel_count);
  return r;
}

double binomial_slack(double p, std::uint64_t n) {
  if (n == 0) return 1.0;
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double node_collision_bound(double z, double distinct_vertices) {
  return -std::expm1(-distinct_vertices / z);
}

double edge_collision_bound(double z, double max_out_degree,
                            double max_in_degree, double distinct_edges) {
  const double phi = std::max(max_out_degree, max_in_degree);
  return -std::expm1(-((z - 1.0) * phi + distinct_edges) / (z * z));
}

double expected_utilization(std::uint32_t d, std::uint32_t b, std::uint32_t p) {
  if (d < 1 || b < 1 || p < 1) throw Error("d, b and p must be >= 1");
  const double n = static_cast<double>(b) * d * d;
  const double power = static_cast<double>(b) * p;
  const auto slots = static_cast<std::uint64_t>(n);
  // k counts successful insertions before the first failure:
  // Pr(k) = prod_{i=1..k} (1 - ((i-1)/n)^{bp}) * (k/n)^{bp}.
  double log_survive = 0.0;
  double expected = 0.0;
  for (std::uint64_t k = 1; k <= slots; ++k) {
    const double prev_fill = static_cast<double>(k - 1) / n;
    if (prev_fill > 0.0) {
      log_survive += std::log1p(-std::exp(power * std::log(prev_fill)));
    }
    if (log_survive < -745.0) break;  // remaining mass underflows
    const double log_fail = power * std::log(static_cast<double>(k) / n);
    expected += static_cast<double>(k) * std::exp(log_survive + log_fail);
  }
  return expected / n;
}

double space_savings_ratio(std::uint32_t layers, std::uint32_t r_bits,
                           double beta) {
  if (!(beta > 0.0)) throw Error("entry size must be positive");
  if (layers == 0) return 0.0;
  return static_cast<double>(layers - 1) * r_bits / beta;
}

BoundReport markov_bound_check(std::span<const double> errors,
                               std::span<const double> range_weights,
                               double epsilon, QueryKind kind) {
  if (errors.size() != range_weights.size()) {
    throw Error("error and weight counts differ");
  }
  BoundReport r;
  r.samples = errors.size();
  r.theoretical_bound = std::exp(-1.0);
  r.slack = binomial_slack(r.theoretical_bound, r.samples);
  if (errors.empty()) return r;
  std::uint64_t exceed = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double threshold =
        kind == QueryKind::kVertex
            ? epsilon * range_weights[i]
            : epsilon * epsilon * range_weights[i] / std::numbers::e;
    if (errors[i] > threshold) ++exceed;
  }
  r.empirical_rate =
      static_cast<double>(exceed) / static_cast<double>(r.samples);
  r.satisfied = r.empirical_rate <= r.theoretical_bound + r.slack;
  return r;
}

namespace {

// Hurwitz zeta sum_{k>=0} (k+q)^-s by direct summation plus an
// Euler-Maclaurin tail.
double hurwitz_zeta(double s, double q) {
  constexpr int kDirect = 64;
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(k + q, -s);
  const double n = kDirect + q;
  sum += std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s) +
         s / 12.0 * std::pow(n, -s - 1.0) -
         s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(n, -s - 3.0);
  return sum;
}

}  // namespace

double fit_power_law_exponent(std::span<const std::uint64_t> samples,
                              std::uint64_t xmin) {
  if (xmin == 0) throw Error("xmin must be >= 1");
  double log_sum = 0.0;
  std::uint64_t n = 0;
  for (const std::uint64_t x : samples) {
    if (x < xmin) continue;
    log_sum += std::log(static_cast<double>(x));
    ++n;
  }
  if (n == 0) throw Error("no samples above xmin");
  const double q = static_cast<double>(xmin);
  const double mean_log = log_sum / static_cast<double>(n);
  if (mean_log <= std::log(q)) throw Error("samples carry no tail");
  // The negative log-likelihood per sample is convex in alpha.
  auto nll = [&](double a) { return std::log(hurwitz_zeta(a, q)) + a * mean_log; };
  double lo = 1.0001, hi = 12.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = nll(a), fb = nll(b);
  while (hi - lo > 1e-7) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = nll(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = nll(b);
    }
  }
  return 0.5 * (lo + hi);
}

ThroughputReport measure_throughput(std::uint64_t ops,
                                    std::uint32_t repetitions,
                                    const std::function<void()>& setup,
                                    const std::function<void()>& run) {
  if (ops == 0) throw Error("throughput is undefined for zero operations");
  if (repetitions == 0) throw Error("need at least one repetition");
  std::vector<double> rates;
  rates.reserve(repetitions);
  for (std::uint32_t i = 0; i < repetitions; ++i) {
    if (setup) setup();
    const auto t0 = std::chrono::steady_clock::now();
    run();
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    rates.push_back(static_cast<double>(ops) / std::max(secs, 1e-9));
  }
  ThroughputReport r;
  r.ops = ops;
  r.repetitions = repetitions;
  double sum = 0.0;
  for (double x : rates) sum += x;
  r.mean_ops_per_sec = sum / static_cast<double>(rates.size());
  double var = 0.0;
  for (double x : rates) var += (x - r.mean_ops_per_sec) * (x - r.mean_ops_per_sec);
  r.stddev_ops_per_sec =
      rates.size() > 1 ? std::sqrt(var / static_cast<double>(rates.size() - 1))
                       : 0.0;
  r.min_ops_per_sec = *std::min_element(rates.begin(), rates.end());
  r.max_ops_per_sec = *std::max_element(rates.begin(), rates.end());
  return r;
}

LatencyReport measure_latency(std::uint64_t count,
                              const std::function<void(std::uint64_t)>& op) {
  if (count == 0) throw Error("latency is undefined for zero operations");
  std::vector<double> us;
  us.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    op(i);
    const auto t1 = std::chrono::steady_clock::now();
    us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  LatencyReport r;
  r.count = count;
  double sum = 0.0;
  for (double x : us) sum += x;
  r.mean_us = sum / static_cast<double>(count);
  std::sort(us.begin(), us.end());
  auto pct = [&](double q) {
    const auto idx = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(count - 1),
                         std::ceil(q * static_cast<double>(count)) - 1));
    return us[idx];
  };
  r.p50_us = pct(0.50);
  r.p99_us = pct(0.99);
  return r;
}

}  // namespace higgs
