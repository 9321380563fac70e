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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "higgs/types.hpp"

namespace higgs {

/// Maps vertex tokens to 64-bit ids. Decimal tokens keep their value; any
/// other token receives a fresh id from 2^63 upward in order of first use.
class VertexDictionary {
 public:
  static constexpr VertexId kTextualBase = VertexId{1} << 63;

  VertexId resolve(std::string_view token);
  /// Like resolve() but never assigns; unknown textual tokens yield nullopt.
  std::optional<VertexId> find(std::string_view token) const;
  std::size_t textual_count() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, VertexId> ids_;
};

/// Reads `src dst [weight] timestamp` lines. Lines starting with '%' or '#'
/// and blank lines are skipped. The result is stable-sorted by timestamp.
std::vector<StreamEdge> parse_edge_list(std::istream& in,
                                        VertexDictionary& dict);
std::vector<StreamEdge> parse_edge_list_file(const std::string& path,
                                             VertexDictionary& dict);

/// Writes `src dst weight timestamp` lines.
void write_edge_list(std::ostream& out, const std::vector<StreamEdge>& edges);

/// Parameters of a synthetic power-law stream.
struct SynthSpec {
  std::uint64_t vertex_count = 100000;
  std::uint64_t edge_count = 5000000;
  double power_law_exponent = 2.0;
  /// Variance of per-slice arrival counts; negative means "equal to the mean".
  double arrival_variance = -1.0;
  /// Number of time-slices; zero means one slice per edge on average.
  std::uint64_t time_span = 0;
  std::uint64_t seed = 1;
};

/// Endpoints are drawn proportionally to per-vertex weights that follow a
/// discrete power law; arrivals per slice are normal around
/// edge_count/time_span. Deterministic for a fixed seed. Timestamps start at 1.
std::vector<StreamEdge> synthesize_stream(const SynthSpec& spec);

}  // namespace higgs
