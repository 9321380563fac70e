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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "higgs/metrics.hpp"
#include "higgs/oracle.hpp"
#include "higgs/stream_io.hpp"
#include "higgs/tree.hpp"

namespace higgs {

enum class QueryType { kEdge, kVertexOut, kVertexIn, kPath, kSubgraph };

std::string to_string(QueryType t);

struct Query {
  QueryType type = QueryType::kEdge;
  std::vector<VertexId> vertices;                     // edge/vertex/path
  std::vector<std::pair<VertexId, VertexId>> edges;   // subgraph
  TemporalRange range;
};

/// `gen <type> <count> <Lq>` directive. Types: edge (drawn from the stream),
/// edge-any (uniform over vertex pairs), vout, vin, path, subgraph.
struct GenDirective {
  std::string type;
  std::uint64_t count = 0;
  std::uint64_t range_length = 0;
};

struct WorkloadLine {
  std::optional<Query> query;
  std::optional<GenDirective> gen;
};

/// Parses the workload grammar:
///   edge s d ts te | vout v ts te | vin v ts te |
///   path k v1..vk ts te | subgraph k s1 d1..sk dk ts te |
///   gen <type> <count> <Lq>
/// Throws ParseError with the offending line number.
std::vector<WorkloadLine> parse_workload(std::istream& in,
                                         VertexDictionary& dict);
std::vector<WorkloadLine> parse_workload_file(const std::string& path,
                                              VertexDictionary& dict);

inline constexpr std::size_t kGeneratedPathHops = 4;
inline constexpr std::size_t kGeneratedSubgraphEdges = 10;

/// Expands gen directives against the stream. Query ranges have
/// te - ts = Lq and lie inside the stream span where possible.
std::vector<Query> expand_workload(const std::vector<WorkloadLine>& lines,
                                   const std::vector<StreamEdge>& stream,
                                   std::uint64_t seed);

/// Random queries of one type; `type` uses the gen directive names.
std::vector<Query> generate_queries(const std::string& type,
                                    std::uint64_t count,
                                    std::uint64_t range_length,
                                    const std::vector<StreamEdge>& stream,
                                    std::uint64_t seed);

struct QueryRecord {
  Query query;
  Weight estimate = 0;
  std::optional<Weight> truth;
};

struct WorkloadResult {
  std::vector<QueryRecord> records;
  std::optional<AccuracyReport> accuracy;  // present when an oracle was given
  std::map<std::string, AccuracyReport> accuracy_by_type;
  bool empty_workload = false;
};

Weight answer(const SummaryTree& tree, const Query& q);
Weight answer(const ExactStore& oracle, const Query& q);

/// Runs every query against the tree, and the oracle when present.
WorkloadResult run_workload(const SummaryTree& tree, const ExactStore* oracle,
                            const std::vector<Query>& queries);

}  // namespace higgs
