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

#include "higgs/query.hpp"

#include <array>
#include <stdexcept>

namespace higgs {
namespace {

void collect(const SummaryTree& tree, const TreeNode& node,
             const TemporalRange& query, DecomposedPlan& plan) {
  const TemporalRange span(node.start, tree.span_end(node));
  const auto overlap = span.intersect(query);
  if (!overlap) return;
  if (query.covers(span) && node.matrix && (node.sealed || node.is_leaf())) {
    plan.items.push_back({&node, node.matrix.get(), span, std::nullopt});
    return;
  }
  if (node.is_leaf()) {
    plan.items.push_back({&node, node.matrix.get(), *overlap, *overlap});
    return;
  }
  for (const auto& child : node.children) collect(tree, *child, query, plan);
}

// Level-1 digest lifted on demand to every level a plan touches.
class DigestLadder {
 public:
  DigestLadder(VertexId v, const HashConfig& cfg) : cfg_(cfg) {
    rungs_[1] = digest(v, cfg);
    top_ = 1;
  }
  const VertexDigest& at(std::uint32_t level) {
    while (top_ < level) {
      rungs_[top_ + 1] = lift_digest(rungs_[top_], cfg_);
      ++top_;
    }
    return rungs_[level];
  }

 private:
  const HashConfig& cfg_;
  std::array<VertexDigest, SummaryTree::kMaxTreeLevels + 1> rungs_{};
  std::uint32_t top_ = 1;
};

}  // namespace

DecomposedPlan boundary_search(const SummaryTree& tree,
                               const TemporalRange& range) {
  DecomposedPlan plan;
  const auto span = tree.stream_span();
  if (!span) return plan;
  plan.clipped = span->intersect(range);
  if (!plan.clipped) return plan;
  collect(tree, *tree.root(), *plan.clipped, plan);
  return plan;
}

std::uint64_t plan_size_bound(std::uint32_t theta, std::uint64_t leaf_count) {
  std::uint64_t levels = 0;
  for (std::uint64_t reach = 1; reach < leaf_count; reach *= theta) ++levels;
  return 2ull * (theta - 1) * levels + 2;
}

Weight edge_query(const SummaryTree& tree, const DecomposedPlan& plan,
                  VertexId src, VertexId dst) {
  const HashConfig& cfg = tree.config().hash;
  DigestLadder s(src, cfg), d(dst, cfg);
  Weight total = 0;
  for (const PlanItem& item : plan.items) {
    const std::uint32_t level = item.matrix->level();
    total += item.matrix->edge_lookup(s.at(level), d.at(level), item.filter);
  }
  return total;
}

Weight edge_query(const SummaryTree& tree, VertexId src, VertexId dst,
                  const TemporalRange& range) {
  return edge_query(tree, boundary_search(tree, range), src, dst);
}

Weight vertex_query(const SummaryTree& tree, const DecomposedPlan& plan,
                    VertexId v, Direction dir) {
  DigestLadder ladder(v, tree.config().hash);
  Weight total = 0;
  for (const PlanItem& item : plan.items) {
    total += item.matrix->vertex_scan(ladder.at(item.matrix->level()), dir,
                                      item.filter);
  }
  return total;
}

Weight vertex_query(const SummaryTree& tree, VertexId v, Direction dir,
                    const TemporalRange& range) {
  return vertex_query(tree, boundary_search(tree, range), v, dir);
}

Weight path_query(const SummaryTree& tree, std::span<const VertexId> vertices,
                  const TemporalRange& range) {
  if (vertices.size() < 2) {
    throw std::invalid_argument("a path needs at least two vertices");
  }
  const DecomposedPlan plan = boundary_search(tree, range);
  Weight total = 0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    total += edge_query(tree, plan, vertices[i], vertices[i + 1]);
  }
  return total;
}

Weight subgraph_query(const SummaryTree& tree,
                      std::span<const std::pair<VertexId, VertexId>> edges,
                      const TemporalRange& range) {
  if (edges.empty()) throw std::invalid_argument("subgraph has no edges");
  const DecomposedPlan plan = boundary_search(tree, range);
  Weight total = 0;
  for (const auto& [s, d] : edges) total += edge_query(tree, plan, s, d);
  return total;
}

}  // namespace higgs
