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

#include <memory>
#include <vector>

#include "higgs/oracle.hpp"
#include "higgs/stream_io.hpp"
#include "higgs/tree.hpp"

namespace higgs::testing {

inline TreeConfig small_config(std::uint32_t d1, std::uint32_t b,
                               std::uint32_t r, std::uint32_t f1 = 19,
                               std::uint64_t seed = 7) {
  TreeConfig cfg;
  cfg.hash.d1 = d1;
  cfg.hash.f1 = f1;
  cfg.hash.candidates = r;
  cfg.hash.seed = seed;
  cfg.bucket_entries = b;
  return cfg;
}

inline std::unique_ptr<SummaryTree> build_tree(
    const TreeConfig& cfg, const std::vector<StreamEdge>& stream,
    bool finalize = true) {
  auto tree = std::make_unique<SummaryTree>(cfg);
  for (const StreamEdge& e : stream) tree->insert(e);
  if (finalize) tree->finalize();
  return tree;
}

inline void fill_oracle(ExactStore& oracle,
                        const std::vector<StreamEdge>& stream) {
  for (const StreamEdge& e : stream) oracle.record(e);
}

inline std::vector<StreamEdge> small_stream(std::uint64_t edges,
                                            std::uint64_t vertices,
                                            std::uint64_t seed,
                                            double exponent = 2.0) {
  SynthSpec spec;
  spec.edge_count = edges;
  spec.vertex_count = vertices;
  spec.seed = seed;
  spec.power_law_exponent = exponent;
  return synthesize_stream(spec);
}

}  // namespace higgs::testing
