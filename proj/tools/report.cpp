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

#include "report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace higgs::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object() || j.is_array()) {
    if (j.empty()) {
      out << csv_field(prefix) << ",\n";
      return;
    }
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      const std::string key = j.is_object() ? it.key() : std::to_string(i);
      flatten(*it, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  out << csv_field(prefix) << ','
      << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
}

}  // namespace

json config_json(const TreeConfig& cfg) {
  return {{"d1", cfg.hash.d1},
          {"f1", cfg.hash.f1},
          {"r_bits", cfg.hash.r_bits},
          {"theta", cfg.theta()},
          {"candidates", cfg.hash.candidates},
          {"bucket_entries", cfg.bucket_entries},
          {"offset_bits", cfg.offset_bits},
          {"weight_bits", cfg.weight_bits},
          {"seed", cfg.hash.seed},
          {"max_levels", cfg.hash.max_levels()}};
}

json stats_json(const TreeStats& s) {
  return {{"edge_count", s.edge_count},
          {"deleted_count", s.deleted_count},
          {"leaf_count", s.leaf_count},
          {"level_count", s.level_count},
          {"nodes_per_level", s.nodes_per_level},
          {"utilization", s.utilization},
          {"matrix_bytes", s.matrix_bytes},
          {"key_bytes", s.key_bytes},
          {"bytes", s.bytes},
          {"overflow_blocks", s.overflow_blocks},
          {"spill_entries", s.spill_entries},
          {"span_per_leaf", s.span_per_leaf},
          {"saturated", s.saturated}};
}

json accuracy_json(const AccuracyReport& a) {
  return {{"aae", a.aae},
          {"are", a.are},
          {"max_error", a.max_error},
          {"one_sided_violations", a.one_sided_violations},
          {"query_count", a.query_count},
          {"zero_truth_count", a.zero_truth_count}};
}

json bound_json(const BoundReport& b) {
  return {{"empirical_rate", b.empirical_rate},
          {"theoretical_bound", b.theoretical_bound},
          {"slack", b.slack},
          {"samples", b.samples},
          {"satisfied", b.satisfied}};
}

json throughput_json(const ThroughputReport& t) {
  return {{"mean_ops_per_sec", t.mean_ops_per_sec},
          {"stddev_ops_per_sec", t.stddev_ops_per_sec},
          {"min_ops_per_sec", t.min_ops_per_sec},
          {"max_ops_per_sec", t.max_ops_per_sec},
          {"ops", t.ops},
          {"repetitions", t.repetitions}};
}

json latency_json(const LatencyReport& l) {
  return {{"p50_us", l.p50_us},
          {"p99_us", l.p99_us},
          {"mean_us", l.mean_us},
          {"count", l.count}};
}

json query_json(const QueryRecord& rec) {
  const Query& q = rec.query;
  json j = {{"type", to_string(q.type)},
            {"ts", q.range.start},
            {"te", q.range.end},
            {"estimate", rec.estimate}};
  if (q.type == QueryType::kSubgraph) {
    json edges = json::array();
    for (const auto& [s, d] : q.edges) edges.push_back({s, d});
    j["edges"] = edges;
  } else {
    j["vertices"] = q.vertices;
  }
  if (rec.truth) j["truth"] = *rec.truth;
  return j;
}

std::string to_csv(const json& report) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(report, "", out);
  return out.str();
}

void emit_report(const json& report, const std::string& format,
                 const std::string& path) {
  const std::string text =
      format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write report '" + path + "'");
  out << text;
}

}  // namespace higgs::cli
