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

#include <string>

#include <json.hpp>

#include "higgs/metrics.hpp"
#include "higgs/tree.hpp"
#include "higgs/workload.hpp"

namespace higgs::cli {

using nlohmann::json;

json config_json(const TreeConfig& cfg);
json stats_json(const TreeStats& stats);
json accuracy_json(const AccuracyReport& acc);
json bound_json(const BoundReport& b);
json throughput_json(const ThroughputReport& t);
json latency_json(const LatencyReport& l);
json query_json(const QueryRecord& rec);

/// Flattens nested objects and arrays into `key,value` rows with dotted
/// paths (`stats.nodes_per_level.0`).
std::string to_csv(const json& report);

/// Writes the report as JSON or CSV to `path`, or stdout when empty.
void emit_report(const json& report, const std::string& format,
                 const std::string& path);

}  // namespace higgs::cli
