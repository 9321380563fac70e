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

#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "higgs/hashing.hpp"
#include "higgs/types.hpp"

namespace higgs {

struct AccuracyReport {
  double aae = 0.0;
  double are = 0.0;  // over queries with non-zero truth only
  double max_error = 0.0;
  std::uint64_t one_sided_violations = 0;
  std::uint64_t query_count = 0;
  std::uint64_t zero_truth_count = 0;
};

/// AAE/ARE between exact and estimated answers. Throws Error on empty or
/// mismatched input.
AccuracyReport compute_accuracy(std::span<const Weight> truths,
                                std::span<const Weight> estimates);

struct BoundReport {
  double empirical_rate = 0.0;
  double theoretical_bound = 0.0;
  double slack = 0.0;
  std::uint64_t samples = 0;
  bool satisfied = true;
};

/// Three-sigma binomial confidence slack for a rate p over n trials.
double binomial_slack(double p, std::uint64_t n);

/// Probability that a vertex collides with one of K others: 1 - e^{-K/Z}.
double node_collision_bound(double z, double distinct_vertices);
inline double node_collision_bound(const HashConfig& cfg,
                                   double distinct_vertices) {
  return node_collision_bound(cfg.z(), distinct_vertices);
}

/// Probability that an edge collides: 1 - e^{-((Z-1) max(Φo,Φi) + C) / Z²}.
double edge_collision_bound(double z, double max_out_degree,
                            double max_in_degree, double distinct_edges);
inline double edge_collision_bound(const HashConfig& cfg, double max_out,
                                   double max_in, double distinct_edges) {
  return edge_collision_bound(cfg.z(), max_out, max_in, distinct_edges);
}

/// Expected fill fraction of a d x d matrix with b slots per bucket and p
/// candidate buckets per edge, reached when the first insertion fails.
/// Evaluated in log space.
double expected_utilization(std::uint32_t d, std::uint32_t b, std::uint32_t p);

/// Fraction of flat-width storage saved by an l-layer hierarchy that drops
/// R fingerprint bits per layer, relative to entry width beta (bits).
double space_savings_ratio(std::uint32_t layers, std::uint32_t r_bits,
                           double beta);

enum class QueryKind { kVertex, kEdge };

/// Fraction of queries whose error exceeds eps*|w|' (vertex) or
/// eps^2*|w|'/e (edge), compared against e^{-1} with 3-sigma slack.
BoundReport markov_bound_check(std::span<const double> errors,
                               std::span<const double> range_weights,
                               double epsilon, QueryKind kind);

/// Discrete power-law exponent by maximum likelihood over samples >= xmin.
double fit_power_law_exponent(std::span<const std::uint64_t> samples,
                              std::uint64_t xmin);

struct ThroughputReport {
  double mean_ops_per_sec = 0.0;
  double stddev_ops_per_sec = 0.0;
  double min_ops_per_sec = 0.0;
  double max_ops_per_sec = 0.0;
  std::uint64_t ops = 0;
  std::uint32_t repetitions = 0;
};

/// Times `run` (after an untimed `setup`) `repetitions` times.
ThroughputReport measure_throughput(std::uint64_t ops,
                                    std::uint32_t repetitions,
                                    const std::function<void()>& setup,
                                    const std::function<void()>& run);

struct LatencyReport {
  double p50_us = 0.0;
  double p99_us = 0.0;
  double mean_us = 0.0;
  std::uint64_t count = 0;
};

/// Per-operation wall-clock latency of op(0..count-1).
LatencyReport measure_latency(std::uint64_t count,
                              const std::function<void(std::uint64_t)>& op);

}  // namespace higgs
