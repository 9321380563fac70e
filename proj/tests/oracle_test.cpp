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

#include "higgs/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace higgs {
namespace {

// Linear-scan reference used to cross-check the indexed store.
struct ScanOracle {
  std::vector<StreamEdge> edges;

  Weight edge(VertexId s, VertexId d, const TemporalRange& r) const {
    Weight w = 0;
    for (const auto& e : edges) {
      if (e.src == s && e.dst == d && r.contains(e.time)) w += e.weight;
    }
    return w;
  }
  Weight vertex(VertexId v, Direction dir, const TemporalRange& r) const {
    Weight w = 0;
    for (const auto& e : edges) {
      const VertexId end = dir == Direction::kOut ? e.src : e.dst;
      if (end == v && r.contains(e.time)) w += e.weight;
    }
    return w;
  }
  Weight total(const TemporalRange& r) const {
    Weight w = 0;
    for (const auto& e : edges) if (r.contains(e.time)) w += e.weight;
    return w;
  }
};

std::vector<StreamEdge> example_stream() {
  return {{1, 2, 1, 1}, {4, 5, 1, 2}, {1, 3, 2, 3}, {5, 6, 1, 4},
          {4, 6, 3, 5}, {2, 3, 2, 6}, {3, 7, 1, 7}, {4, 7, 2, 8},
          {2, 3, 1, 9}, {6, 7, 1, 10}, {2, 4, 1, 11}};
}

TEST(ExactStore, ExampleValues) {
  ExactStore st;
  testing::fill_oracle(st, example_stream());
  EXPECT_EQ(st.exact_vertex(4, Direction::kOut, {1, 11}), 6u);
  EXPECT_EQ(st.exact_edge(2, 3, {5, 10}), 3u);
  const std::vector<VertexId> path = {2, 3, 7};
  EXPECT_EQ(st.exact_path(path, {4, 8}), 3u);
  const std::vector<std::pair<VertexId, VertexId>> sub = {{2, 3}, {3, 7}, {2, 4}};
  EXPECT_EQ(st.exact_subgraph(sub, {4, 8}), 3u);
  EXPECT_EQ(st.exact_edge(2, 3, {0, 0}), 0u);
  EXPECT_EQ(st.total_weight({1, 11}), 16u);
  EXPECT_EQ(st.record_count(), 11u);
  EXPECT_EQ(st.distinct_edges().size(), 10u);
  EXPECT_EQ(st.vertices().size(), 7u);
}

TEST(ExactStore, RecordRemovePair) {
  ExactStore st;
  st.record({1, 2, 5, 10});
  EXPECT_EQ(st.exact_edge(1, 2, {0, 20}), 5u);
  st.remove({1, 2, 5, 10});
  EXPECT_EQ(st.exact_edge(1, 2, {0, 20}), 0u);
  EXPECT_EQ(st.exact_vertex(1, Direction::kOut, {0, 20}), 0u);
  EXPECT_EQ(st.exact_vertex(2, Direction::kIn, {0, 20}), 0u);
  EXPECT_EQ(st.total_weight({0, 20}), 0u);
}

TEST(ExactStore, RemoveAbsentThrows) {
  ExactStore st;
  st.record({1, 2, 1, 10});
  EXPECT_THROW(st.remove({1, 2, 1, 11}), NotFoundError);
  EXPECT_THROW(st.remove({1, 3, 1, 10}), NotFoundError);
  EXPECT_THROW(st.remove({1, 2, 2, 10}), NotFoundError);
}

TEST(ExactStore, AgreesWithLinearScan) {
  const auto stream = testing::small_stream(5000, 300, 41);
  ExactStore st;
  ScanOracle scan;
  std::mt19937_64 rng(8);
  for (auto e : stream) {
    e.weight = 1 + rng() % 5;
    st.record(e);
    scan.edges.push_back(e);
  }
  std::uniform_int_distribution<std::size_t> pick(0, stream.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const auto& e = stream[pick(rng)];
    Timestamp a = stream[pick(rng)].time, b = stream[pick(rng)].time;
    if (a > b) std::swap(a, b);
    const TemporalRange r(a, b);
    ASSERT_EQ(st.exact_edge(e.src, e.dst, r), scan.edge(e.src, e.dst, r));
    ASSERT_EQ(st.exact_vertex(e.src, Direction::kOut, r),
              scan.vertex(e.src, Direction::kOut, r));
    ASSERT_EQ(st.exact_vertex(e.dst, Direction::kIn, r),
              scan.vertex(e.dst, Direction::kIn, r));
    ASSERT_EQ(st.total_weight(r), scan.total(r));
  }
}

TEST(ExactStore, AdditiveAndMonotone) {
  const auto stream = testing::small_stream(3000, 200, 42);
  ExactStore st;
  testing::fill_oracle(st, stream);
  for (const auto& e : std::vector<StreamEdge>(stream.begin(), stream.begin() + 200)) {
    const Weight whole = st.exact_edge(e.src, e.dst, {0, 3000});
    EXPECT_EQ(whole, st.exact_edge(e.src, e.dst, {0, 1500}) +
                         st.exact_edge(e.src, e.dst, {1501, 3000}));
    EXPECT_GE(whole, st.exact_edge(e.src, e.dst, {100, 2000}));
  }
}

}  // namespace
}  // namespace higgs
