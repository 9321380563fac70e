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

// Command-line driver: synth, build, query, verify and bench subcommands.
// Exit codes: 0 success, 1 runtime error, 2 parse or configuration error,
// 3 verification failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "higgs/metrics.hpp"
#include "higgs/oracle.hpp"
#include "higgs/snapshot.hpp"
#include "higgs/stream_io.hpp"
#include "higgs/tree.hpp"
#include "higgs/workload.hpp"
#include "report.hpp"

namespace higgs::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitVerify = 3;

// Workload used by verify and bench when none is given.
constexpr const char* kDefaultWorkload =
    "gen edge 1000 1000\n"
    "gen vout 500 1000\n"
    "gen vin 500 1000\n"
    "gen path 200 1000\n"
    "gen subgraph 200 1000\n";

struct RunConfig {
  std::string input;
  std::string workload;
  std::string output;
  std::string format = "json";
  std::string snapshot;
  std::uint32_t d1 = 16;
  std::uint32_t f1 = 19;
  std::uint32_t r_bits = 1;
  std::uint32_t theta = 0;  // 0 means derived from r_bits
  std::uint32_t candidates = 4;
  std::uint32_t bucket_entries = 3;
  std::uint64_t seed = 0;
  std::uint32_t parallel = 1;
  std::uint32_t repetitions = 3;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TreeConfig tree_config(const RunConfig& rc) {
  TreeConfig cfg;
  cfg.hash.d1 = rc.d1;
  cfg.hash.f1 = rc.f1;
  cfg.hash.r_bits = rc.r_bits;
  cfg.hash.candidates = rc.candidates;
  cfg.hash.seed = rc.seed;
  cfg.bucket_entries = rc.bucket_entries;
  if (rc.theta != 0 && rc.theta != cfg.theta()) {
    throw ConfigError("--theta must equal 4^r_bits = " +
                      std::to_string(cfg.theta()));
  }
  cfg.validate();
  return cfg;
}

void add_tree_flags(CLI::App* app, RunConfig& rc) {
  app->add_option("--d1", rc.d1, "Leaf matrix side (power of two)");
  app->add_option("--f1", rc.f1, "Leaf fingerprint bits");
  app->add_option("--r-bits", rc.r_bits, "Fingerprint bits lifted per level");
  app->add_option("--theta", rc.theta, "Fan-out; must equal 4^r-bits");
  app->add_option("--candidates", rc.candidates, "Candidate addresses per vertex");
  app->add_option("--bucket-entries", rc.bucket_entries, "Entries per bucket");
  app->add_option("--seed", rc.seed, "Hash seed");
  app->add_option("--parallel", rc.parallel,
                  "Workers; above 1 runs one pipeline thread per upper level");
}

void add_report_flags(CLI::App* app, RunConfig& rc) {
  app->add_option("--output", rc.output, "Report path (stdout when omitted)");
  app->add_option("--format", rc.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

std::vector<StreamEdge> load_stream(const RunConfig& rc, VertexDictionary& dict) {
  return parse_edge_list_file(rc.input, dict);
}

void ingest(SummaryTree& tree, const std::vector<StreamEdge>& stream,
            std::uint32_t parallel) {
  if (parallel > 1) {
    PipelinedIngest pipe(tree);
    for (const StreamEdge& e : stream) pipe.insert(e);
    pipe.finish();
  } else {
    for (const StreamEdge& e : stream) tree.insert(e);
  }
  tree.finalize();
}

// Loads the tree from --snapshot when given, else builds it from the stream.
std::unique_ptr<SummaryTree> obtain_tree(const RunConfig& rc,
                                         const std::vector<StreamEdge>& stream,
                                         json& timing) {
  const auto t0 = Clock::now();
  std::unique_ptr<SummaryTree> tree;
  if (!rc.snapshot.empty()) {
    tree = read_snapshot_file(rc.snapshot);
    timing["snapshot_read_sec"] = seconds_since(t0);
  } else {
    tree = std::make_unique<SummaryTree>(tree_config(rc));
    ingest(*tree, stream, rc.parallel);
    timing["build_sec"] = seconds_since(t0);
  }
  return tree;
}

std::vector<Query> load_queries(const RunConfig& rc,
                                const std::vector<StreamEdge>& stream,
                                VertexDictionary& dict) {
  std::vector<WorkloadLine> lines;
  if (rc.workload.empty()) {
    std::istringstream in(kDefaultWorkload);
    lines = parse_workload(in, dict);
  } else {
    lines = parse_workload_file(rc.workload, dict);
  }
  const bool has_gen = std::any_of(lines.begin(), lines.end(),
                                   [](const auto& l) { return l.gen.has_value(); });
  if (has_gen && stream.empty()) {
    throw ConfigError("gen directives need a non-empty --input stream");
  }
  return expand_workload(lines, stream, rc.seed);
}

int cmd_synth(const SynthSpec& spec, const std::string& output) {
  const auto edges = synthesize_stream(spec);
  if (output.empty()) {
    write_edge_list(std::cout, edges);
  } else {
    std::ofstream out(output);
    if (!out) throw Error("cannot write '" + output + "'");
    write_edge_list(out, edges);
  }
  return kExitOk;
}

int cmd_build(const RunConfig& rc) {
  VertexDictionary dict;
  json timing;
  auto t0 = Clock::now();
  const auto stream = load_stream(rc, dict);
  timing["parse_sec"] = seconds_since(t0);
  t0 = Clock::now();
  SummaryTree tree(tree_config(rc));
  ingest(tree, stream, rc.parallel);
  const double build = seconds_since(t0);
  timing["build_sec"] = build;
  timing["edges_per_sec"] = build > 0 ? stream.size() / build : 0.0;
  json report = {{"subcommand", "build"},
                 {"config", config_json(tree.config())},
                 {"stats", stats_json(tree.stats())}};
  if (!rc.snapshot.empty()) {
    t0 = Clock::now();
    write_snapshot_file(tree, rc.snapshot);
    timing["snapshot_write_sec"] = seconds_since(t0);
    report["snapshot"] = {{"path", rc.snapshot},
                          {"overhead_bytes", snapshot_overhead_bytes(tree)}};
  }
  report["timing"] = timing;
  emit_report(report, rc.format, rc.output);
  return kExitOk;
}

int cmd_query(const RunConfig& rc) {
  if (rc.snapshot.empty() && rc.input.empty()) {
    throw ConfigError("query needs --snapshot or --input");
  }
  VertexDictionary dict;
  std::vector<StreamEdge> stream;
  if (!rc.input.empty()) stream = load_stream(rc, dict);
  json timing;
  auto tree = obtain_tree(rc, stream, timing);
  const auto queries = load_queries(rc, stream, dict);
  const auto t0 = Clock::now();
  const WorkloadResult result = run_workload(*tree, nullptr, queries);
  timing["query_sec"] = seconds_since(t0);
  json records = json::array();
  for (const auto& rec : result.records) records.push_back(query_json(rec));
  json report = {{"subcommand", "query"},
                 {"config", config_json(tree->config())},
                 {"stats", stats_json(tree->stats())},
                 {"empty_workload", result.empty_workload},
                 {"queries", records},
                 {"timing", timing}};
  emit_report(report, rc.format, rc.output);
  return kExitOk;
}

struct CollisionCheck {
  BoundReport source, destination, edge;
};

// Empirical fraction of distinct vertices (edges) sharing a hash identity
// with another one, against the collision bounds.
CollisionCheck collision_check(const std::vector<StreamEdge>& stream,
                               const HashConfig& hc) {
  const std::uint64_t z = std::uint64_t{hc.d1} << hc.f1;
  auto id = [&](VertexId v) { return hash_vertex(v, hc.seed) % z; };
  std::set<VertexId> sources, targets;
  std::set<std::pair<VertexId, VertexId>> edges;
  for (const StreamEdge& e : stream) {
    sources.insert(e.src);
    targets.insert(e.dst);
    edges.emplace(e.src, e.dst);
  }
  std::unordered_map<VertexId, std::uint64_t> out_deg, in_deg;
  double phi_o = 0, phi_i = 0;
  for (const auto& [a, b] : edges) {
    phi_o = std::max<double>(phi_o, ++out_deg[a]);
    phi_i = std::max<double>(phi_i, ++in_deg[b]);
  }
  auto finish = [](std::uint64_t hits, std::uint64_t n, double bound) {
    BoundReport r;
    r.samples = n;
    r.empirical_rate = n == 0 ? 0.0 : static_cast<double>(hits) / n;
    r.theoretical_bound = bound;
    r.slack = binomial_slack(bound, n);
    r.satisfied = r.empirical_rate <= bound + r.slack;
    return r;
  };
  auto vertex_report = [&](const std::set<VertexId>& vs) {
    std::unordered_map<std::uint64_t, std::uint64_t> classes;
    for (VertexId v : vs) ++classes[id(v)];
    std::uint64_t hits = 0;
    for (VertexId v : vs) hits += classes[id(v)] > 1;
    return finish(hits, vs.size(), node_collision_bound(hc, vs.size()));
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> eclasses;
  for (const auto& [a, b] : edges) ++eclasses[{id(a), id(b)}];
  std::uint64_t ehits = 0;
  for (const auto& [a, b] : edges) ehits += eclasses[{id(a), id(b)}] > 1;
  return {vertex_report(sources), vertex_report(targets),
          finish(ehits, edges.size(),
                 edge_collision_bound(hc, phi_o, phi_i,
                                      static_cast<double>(edges.size())))};
}

int cmd_verify(const RunConfig& rc) {
  VertexDictionary dict;
  const auto stream = load_stream(rc, dict);
  json timing;
  auto tree = obtain_tree(rc, stream, timing);
  ExactStore oracle;
  for (const StreamEdge& e : stream) oracle.record(e);
  const auto queries = load_queries(rc, stream, dict);
  auto t0 = Clock::now();
  const WorkloadResult result = run_workload(*tree, &oracle, queries);
  timing["query_sec"] = seconds_since(t0);

  const HashConfig& hc = tree->config().hash;
  std::vector<double> verr, vw, eerr, ew;
  for (const QueryRecord& rec : result.records) {
    const QueryType t = rec.query.type;
    const double err = static_cast<double>(rec.estimate) -
                       static_cast<double>(*rec.truth);
    const double w = static_cast<double>(oracle.total_weight(rec.query.range));
    if (t == QueryType::kEdge) {
      eerr.push_back(err);
      ew.push_back(w);
    } else if (t == QueryType::kVertexOut || t == QueryType::kVertexIn) {
      verr.push_back(err);
      vw.push_back(w);
    }
  }
  const double epsilon = std::exp(1.0) / hc.z();
  json bounds = {{"epsilon", epsilon}};
  bool ok = true;
  if (!verr.empty()) {
    const auto r = markov_bound_check(verr, vw, epsilon, QueryKind::kVertex);
    bounds["markov_vertex"] = bound_json(r);
    ok = ok && r.satisfied;
  }
  if (!eerr.empty()) {
    const auto r = markov_bound_check(eerr, ew, epsilon, QueryKind::kEdge);
    bounds["markov_edge"] = bound_json(r);
    ok = ok && r.satisfied;
  }
  if (!stream.empty()) {
    const CollisionCheck c = collision_check(stream, hc);
    bounds["collision_source"] = bound_json(c.source);
    bounds["collision_destination"] = bound_json(c.destination);
    bounds["collision_edge"] = bound_json(c.edge);
    ok = ok && c.source.satisfied && c.destination.satisfied && c.edge.satisfied;
  }

  json report = {{"subcommand", "verify"},
                 {"config", config_json(tree->config())},
                 {"stats", stats_json(tree->stats())},
                 {"empty_workload", result.empty_workload},
                 {"bounds", bounds}};
  const std::uint64_t live = tree->stats().edge_count - tree->stats().deleted_count;
  const bool count_ok = live == oracle.record_count();
  report["edge_count_matches"] = count_ok;
  ok = ok && count_ok;
  if (result.accuracy) {
    report["accuracy"] = accuracy_json(*result.accuracy);
    json by_type;
    for (const auto& [type, acc] : result.accuracy_by_type) {
      by_type[type] = accuracy_json(acc);
    }
    report["accuracy_by_type"] = by_type;
    ok = ok && result.accuracy->one_sided_violations == 0;
  }
  report["verified"] = ok;
  report["timing"] = timing;
  emit_report(report, rc.format, rc.output);
  return ok ? kExitOk : kExitVerify;
}

int cmd_bench(const RunConfig& rc) {
  VertexDictionary dict;
  const auto stream = load_stream(rc, dict);
  const TreeConfig cfg = tree_config(rc);
  std::unique_ptr<SummaryTree> tree;
  const ThroughputReport insert = measure_throughput(
      stream.size(), rc.repetitions,
      [&] { tree = std::make_unique<SummaryTree>(cfg); },
      [&] { ingest(*tree, stream, rc.parallel); });
  const auto queries = load_queries(rc, stream, dict);
  const LatencyReport latency = measure_latency(
      queries.size(), [&](std::uint64_t i) { (void)answer(*tree, queries[i]); });
  json report = {{"subcommand", "bench"},
                 {"config", config_json(cfg)},
                 {"stats", stats_json(tree->stats())},
                 {"timing",
                  {{"insert", throughput_json(insert)},
                   {"query_latency", latency_json(latency)}}}};
  emit_report(report, rc.format, rc.output);
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"HIGGS temporal graph stream summary"};
  app.require_subcommand(1);
  RunConfig rc;
  SynthSpec spec;
  std::string synth_out;

  auto* synth = app.add_subcommand("synth", "Write a synthetic power-law stream");
  synth->add_option("--vertices", spec.vertex_count, "Vertex count");
  synth->add_option("--edges", spec.edge_count, "Edge count");
  synth->add_option("--exponent", spec.power_law_exponent, "Power-law exponent");
  synth->add_option("--arrival-variance", spec.arrival_variance,
                    "Variance of per-slice arrivals (negative: equal to mean)");
  synth->add_option("--time-span", spec.time_span, "Number of time slices");
  synth->add_option("--seed", spec.seed, "Generator seed");
  synth->add_option("--output", synth_out, "Edge list path (stdout when omitted)");

  auto* build = app.add_subcommand("build", "Summarize an edge list");
  build->add_option("--input", rc.input, "Edge list")->required();
  build->add_option("--snapshot", rc.snapshot, "Snapshot path to write");

  auto* query = app.add_subcommand("query", "Answer a workload");
  query->add_option("--input", rc.input, "Edge list (builds the tree, feeds gen)");
  query->add_option("--snapshot", rc.snapshot, "Snapshot to load");
  query->add_option("--workload", rc.workload, "Workload file")->required();

  auto* verify = app.add_subcommand("verify", "Check answers against an exact oracle");
  verify->add_option("--input", rc.input, "Edge list")->required();
  verify->add_option("--snapshot", rc.snapshot, "Snapshot to check");
  verify->add_option("--workload", rc.workload, "Workload file");

  auto* bench = app.add_subcommand("bench", "Measure ingest and query speed");
  bench->add_option("--input", rc.input, "Edge list")->required();
  bench->add_option("--workload", rc.workload, "Workload file");
  bench->add_option("--repetitions", rc.repetitions, "Timed ingest runs")
      ->check(CLI::PositiveNumber);

  for (auto* sub : {build, query, verify, bench}) {
    add_tree_flags(sub, rc);
    add_report_flags(sub, rc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (*synth) return cmd_synth(spec, synth_out);
  if (*build) return cmd_build(rc);
  if (*query) return cmd_query(rc);
  if (*verify) return cmd_verify(rc);
  return cmd_bench(rc);
}

}  // namespace
}  // namespace higgs::cli

int main(int argc, char** argv) {
  using namespace higgs;
  try {
    return cli::run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return cli::kExitParse;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kExitParse;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
}
