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

#include "higgs/workload.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "higgs/query.hpp"

namespace higgs {
namespace {

std::uint64_t to_u64(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError("expected an unsigned integer, got '" + s + "'", line);
  }
  return v;
}

TemporalRange to_range(const std::string& ts, const std::string& te,
                       std::size_t line) {
  const std::uint64_t a = to_u64(ts, line);
  const std::uint64_t b = to_u64(te, line);
  if (a > b) throw ParseError("range start exceeds range end", line);
  return TemporalRange(a, b);
}

const std::vector<std::string>& gen_types() {
  static const std::vector<std::string> kTypes = {
      "edge", "edge-any", "vout", "vin", "path", "subgraph"};
  return kTypes;
}

}  // namespace

std::string to_string(QueryType t) {
  switch (t) {
    case QueryType::kEdge:
      return "edge";
    case QueryType::kVertexOut:
      return "vout";
    case QueryType::kVertexIn:
      return "vin";
    case QueryType::kPath:
      return "path";
    case QueryType::kSubgraph:
      return "subgraph";
  }
  return "edge";
}

std::vector<WorkloadLine> parse_workload(std::istream& in,
                                         VertexDictionary& dict) {
  std::vector<WorkloadLine> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#' || tok[0][0] == '%') continue;
    const std::string& op = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() != n) {
        throw ParseError("'" + op + "' expects " + std::to_string(n - 1) +
                             " arguments",
                         line_no);
      }
    };
    WorkloadLine wl;
    Query q;
    if (op == "edge") {
      need(5);
      q.type = QueryType::kEdge;
      q.vertices = {dict.resolve(tok[1]), dict.resolve(tok[2])};
      q.range = to_range(tok[3], tok[4], line_no);
      wl.query = q;
    } else if (op == "vout" || op == "vin") {
      need(4);
      q.type = op == "vout" ? QueryType::kVertexOut : QueryType::kVertexIn;
      q.vertices = {dict.resolve(tok[1])};
      q.range = to_range(tok[2], tok[3], line_no);
      wl.query = q;
    } else if (op == "path") {
      if (tok.size() < 2) throw ParseError("'path' expects a hop count", line_no);
      const std::uint64_t k = to_u64(tok[1], line_no);
      if (k < 2) throw ParseError("a path needs at least two vertices", line_no);
      need(static_cast<std::size_t>(k) + 4);
      q.type = QueryType::kPath;
      for (std::uint64_t i = 0; i < k; ++i) {
        q.vertices.push_back(dict.resolve(tok[2 + i]));
      }
      q.range = to_range(tok[2 + k], tok[3 + k], line_no);
      wl.query = q;
    } else if (op == "subgraph") {
      if (tok.size() < 2) {
        throw ParseError("'subgraph' expects an edge count", line_no);
      }
      const std::uint64_t k = to_u64(tok[1], line_no);
      if (k < 1) throw ParseError("a subgraph needs at least one edge", line_no);
      need(static_cast<std::size_t>(2 * k) + 4);
      q.type = QueryType::kSubgraph;
      for (std::uint64_t i = 0; i < k; ++i) {
        q.edges.emplace_back(dict.resolve(tok[2 + 2 * i]),
                             dict.resolve(tok[3 + 2 * i]));
      }
      q.range = to_range(tok[2 + 2 * k], tok[3 + 2 * k], line_no);
      wl.query = q;
    } else if (op == "gen") {
      need(4);
      const auto& types = gen_types();
      if (std::find(types.begin(), types.end(), tok[1]) == types.end()) {
        throw ParseError("unknown gen type '" + tok[1] + "'", line_no);
      }
      wl.gen = GenDirective{tok[1], to_u64(tok[2], line_no),
                            to_u64(tok[3], line_no)};
    } else {
      throw ParseError("unknown directive '" + op + "'", line_no);
    }
    out.push_back(std::move(wl));
  }
  return out;
}

std::vector<WorkloadLine> parse_workload_file(const std::string& path,
                                              VertexDictionary& dict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open workload '" + path + "'", 0);
  return parse_workload(in, dict);
}

std::vector<Query> generate_queries(const std::string& type,
                                    std::uint64_t count,
                                    std::uint64_t range_length,
                                    const std::vector<StreamEdge>& stream,
                                    std::uint64_t seed) {
  if (stream.empty()) throw Error("query generation needs a non-empty stream");
  std::mt19937_64 rng(seed);
  const Timestamp first = stream.front().time;
  const Timestamp last = stream.back().time;
  const Timestamp latest_start =
      last - first > range_length ? last - range_length : first;
  std::uniform_int_distribution<Timestamp> start_dist(first, latest_start);
  std::uniform_int_distribution<std::size_t> edge_dist(0, stream.size() - 1);
  auto range = [&] {
    const Timestamp ts = start_dist(rng);
    return TemporalRange(ts, ts + range_length);
  };

  std::vector<VertexId> sources, targets, all;
  std::unordered_map<VertexId, std::vector<VertexId>> adjacency;
  if (type == "vout" || type == "vin" || type == "edge-any" || type == "path") {
    for (const StreamEdge& e : stream) {
      sources.push_back(e.src);
      targets.push_back(e.dst);
      if (type == "path") adjacency[e.src].push_back(e.dst);
    }
    for (auto* v : {&sources, &targets}) {
      std::sort(v->begin(), v->end());
      v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    std::set_union(sources.begin(), sources.end(), targets.begin(),
                   targets.end(), std::back_inserter(all));
    for (auto& [v, nbrs] : adjacency) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
  }
  auto pick = [&](const std::vector<VertexId>& from) {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };

  std::vector<Query> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Query q;
    if (type == "edge") {
      const StreamEdge& e = stream[edge_dist(rng)];
      q.type = QueryType::kEdge;
      q.vertices = {e.src, e.dst};
    } else if (type == "edge-any") {
      q.type = QueryType::kEdge;
      q.vertices = {pick(all), pick(all)};
    } else if (type == "vout") {
      q.type = QueryType::kVertexOut;
      q.vertices = {pick(sources)};
    } else if (type == "vin") {
      q.type = QueryType::kVertexIn;
      q.vertices = {pick(targets)};
    } else if (type == "path") {
      const StreamEdge& e = stream[edge_dist(rng)];
      q.type = QueryType::kPath;
      q.vertices = {e.src, e.dst};
      while (q.vertices.size() < kGeneratedPathHops + 1) {
        const auto it = adjacency.find(q.vertices.back());
        if (it == adjacency.end()) break;
        q.vertices.push_back(pick(it->second));
      }
    } else if (type == "subgraph") {
      q.type = QueryType::kSubgraph;
      for (std::size_t k = 0; k < kGeneratedSubgraphEdges; ++k) {
        const StreamEdge& e = stream[edge_dist(rng)];
        q.edges.emplace_back(e.src, e.dst);
      }
    } else {
      throw Error("unknown gen type '" + type + "'");
    }
    q.range = range();
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Query> expand_workload(const std::vector<WorkloadLine>& lines,
                                   const std::vector<StreamEdge>& stream,
                                   std::uint64_t seed) {
  std::vector<Query> out;
  std::uint64_t directive = 0;
  for (const WorkloadLine& wl : lines) {
    if (wl.query) {
      out.push_back(*wl.query);
      continue;
    }
    auto gen = generate_queries(wl.gen->type, wl.gen->count,
                                wl.gen->range_length, stream,
                                seed + 0x9E3779B97F4A7C15ULL * ++directive);
    out.insert(out.end(), std::make_move_iterator(gen.begin()),
               std::make_move_iterator(gen.end()));
  }
  return out;
}

Weight answer(const SummaryTree& tree, const Query& q) {
  switch (q.type) {
    case QueryType::kEdge:
      return edge_query(tree, q.vertices[0], q.vertices[1], q.range);
    case QueryType::kVertexOut:
      return vertex_query(tree, q.vertices[0], Direction::kOut, q.range);
    case QueryType::kVertexIn:
      return vertex_query(tree, q.vertices[0], Direction::kIn, q.range);
    case QueryType::kPath:
      return path_query(tree, q.vertices, q.range);
    case QueryType::kSubgraph:
      return subgraph_query(tree, q.edges, q.range);
  }
  return 0;
}

Weight answer(const ExactStore& oracle, const Query& q) {
  switch (q.type) {
    case QueryType::kEdge:
      return oracle.exact_edge(q.vertices[0], q.vertices[1], q.range);
    case QueryType::kVertexOut:
      return oracle.exact_vertex(q.vertices[0], Direction::kOut, q.range);
    case QueryType::kVertexIn:
      return oracle.exact_vertex(q.vertices[0], Direction::kIn, q.range);
    case QueryType::kPath:
      return oracle.exact_path(q.vertices, q.range);
    case QueryType::kSubgraph:
      return oracle.exact_subgraph(q.edges, q.range);
  }
  return 0;
}

WorkloadResult run_workload(const SummaryTree& tree, const ExactStore* oracle,
                            const std::vector<Query>& queries) {
  WorkloadResult result;
  result.empty_workload = queries.empty();
  result.records.reserve(queries.size());
  std::map<std::string, std::pair<std::vector<Weight>, std::vector<Weight>>>
      by_type;
  std::vector<Weight> truths, estimates;
  for (const Query& q : queries) {
    QueryRecord rec{q, answer(tree, q), std::nullopt};
    if (oracle != nullptr) {
      rec.truth = answer(*oracle, q);
      truths.push_back(*rec.truth);
      estimates.push_back(rec.estimate);
      auto& [t, e] = by_type[to_string(q.type)];
      t.push_back(*rec.truth);
      e.push_back(rec.estimate);
    }
    result.records.push_back(std::move(rec));
  }
  if (oracle != nullptr && !truths.empty()) {
    result.accuracy = compute_accuracy(truths, estimates);
    for (const auto& [type, te] : by_type) {
      result.accuracy_by_type[type] = compute_accuracy(te.first, te.second);
    }
  }
  return result;
}

}  // namespace higgs
