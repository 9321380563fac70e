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

#include <atomic>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "higgs/types.hpp"

namespace higgs {

/// Exact ground truth for every temporal range query.
///
/// Each index keeps a timestamp-sorted run of (t, w) pairs with prefix sums;
/// prefix sums are rebuilt lazily after out-of-order records or removals.
class ExactStore {
 public:
  ExactStore() = default;
  ExactStore(const ExactStore&) = delete;
  ExactStore& operator=(const ExactStore&) = delete;

  void record(const StreamEdge& e);
  /// Throws NotFoundError if no recorded weight for (src, dst, time) covers
  /// e.weight.
  void remove(const StreamEdge& e);

  Weight exact_edge(VertexId src, VertexId dst, const TemporalRange& r) const;
  Weight exact_vertex(VertexId v, Direction dir, const TemporalRange& r) const;
  Weight exact_path(std::span<const VertexId> vertices,
                    const TemporalRange& r) const;
  Weight exact_subgraph(std::span<const std::pair<VertexId, VertexId>> edges,
                        const TemporalRange& r) const;

  /// Total weight in [r.start, r.end] across the whole stream.
  Weight total_weight(const TemporalRange& r) const;

  /// Distinct (src, dst) pairs ever recorded.
  std::vector<std::pair<VertexId, VertexId>> distinct_edges() const;
  std::vector<VertexId> vertices() const;
  std::uint64_t record_count() const { return records_; }

 private:
  struct Run {
    std::vector<Timestamp> times;
    std::vector<Weight> weights;
    std::vector<Weight> prefix;  // prefix[i] = sum of weights[0..i)
    bool dirty = false;

    void add(Timestamp t, Weight w);
    void subtract(Timestamp t, Weight w);
    Weight available(Timestamp t) const;
    void rebuild();
    Weight sum(const TemporalRange& r) const;
  };

  struct PairHash {
    std::size_t operator()(const std::pair<VertexId, VertexId>& p) const {
      return std::hash<VertexId>()(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
    }
  };

  void ensure_ready() const;
  static Weight run_sum(const Run* run, const TemporalRange& r);

  std::unordered_map<std::pair<VertexId, VertexId>, Run, PairHash> edges_;
  std::unordered_map<VertexId, Run> out_;
  std::unordered_map<VertexId, Run> in_;
  Run all_;
  std::uint64_t records_ = 0;
  mutable std::atomic<bool> dirty_{false};
  mutable std::mutex rebuild_mu_;
};

}  // namespace higgs
