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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "higgs/tree.hpp"
#include "higgs/types.hpp"

namespace higgs {

/// One matrix to read while answering a temporal range query.
struct PlanItem {
  const TreeNode* node = nullptr;
  const CompressedMatrix* matrix = nullptr;
  TemporalRange span;                    // portion of the query it answers
  std::optional<TemporalRange> filter;   // set only for partially covered leaves
};

/// Disjoint set of matrices whose spans exactly cover the clipped range.
struct DecomposedPlan {
  std::optional<TemporalRange> clipped;  // empty when the range misses the stream
  std::vector<PlanItem> items;
};

/// Decomposes `range` into the minimal set of node matrices of `tree`.
/// Open spine nodes and nodes above the level cap are expanded into their
/// children.
DecomposedPlan boundary_search(const SummaryTree& tree,
                               const TemporalRange& range);

/// Upper bound on plan size: 2(theta-1) * ceil(log_theta n1) + 2.
std::uint64_t plan_size_bound(std::uint32_t theta, std::uint64_t leaf_count);

Weight edge_query(const SummaryTree& tree, const DecomposedPlan& plan,
                  VertexId src, VertexId dst);
Weight edge_query(const SummaryTree& tree, VertexId src, VertexId dst,
                  const TemporalRange& range);

Weight vertex_query(const SummaryTree& tree, const DecomposedPlan& plan,
                    VertexId v, Direction dir);
Weight vertex_query(const SummaryTree& tree, VertexId v, Direction dir,
                    const TemporalRange& range);

/// Sum of edge weights over consecutive hops. Needs at least two vertices.
Weight path_query(const SummaryTree& tree, std::span<const VertexId> vertices,
                  const TemporalRange& range);

/// Sum of edge weights over a non-empty edge set.
Weight subgraph_query(const SummaryTree& tree,
                      std::span<const std::pair<VertexId, VertexId>> edges,
                      const TemporalRange& range);

}  // namespace higgs
