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

#include "higgs/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace higgs {
namespace {

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

VertexId VertexDictionary::resolve(std::string_view token) {
  if (auto v = parse_u64(token)) return *v;
  auto [it, inserted] = ids_.try_emplace(std::string(token), 0);
  if (inserted) it->second = kTextualBase + (ids_.size() - 1);
  return it->second;
}

std::optional<VertexId> VertexDictionary::find(std::string_view token) const {
  if (auto v = parse_u64(token)) return v;
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<StreamEdge> parse_edge_list(std::istream& in,
                                        VertexDictionary& dict) {
  std::vector<StreamEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty() || fields[0][0] == '%' || fields[0][0] == '#') continue;
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError("expected 'src dst [weight] timestamp'", line_no);
    }
    StreamEdge e;
    const auto weight = fields.size() == 4 ? parse_u64(fields[2]) : 1;
    const auto time = parse_u64(fields.back());
    if (!weight) throw ParseError("malformed weight", line_no);
    if (!time) throw ParseError("malformed timestamp", line_no);
    e.src = dict.resolve(fields[0]);
    e.dst = dict.resolve(fields[1]);
    e.weight = *weight;
    e.time = *time;
    edges.push_back(e);
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const StreamEdge& a, const StreamEdge& b) {
                     return a.time < b.time;
                   });
  return edges;
}

std::vector<StreamEdge> parse_edge_list_file(const std::string& path,
                                             VertexDictionary& dict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path + "'", 0);
  return parse_edge_list(in, dict);
}

void write_edge_list(std::ostream& out, const std::vector<StreamEdge>& edges) {
  for (const StreamEdge& e : edges) {
    out << e.src << ' ' << e.dst << ' ' << e.weight << ' ' << e.time << '\n';
  }
}

std::vector<StreamEdge> synthesize_stream(const SynthSpec& spec) {
  if (spec.vertex_count < 1 || spec.edge_count < 1) {
    throw ConfigError("vertex and edge counts must be >= 1");
  }
  if (!(spec.power_law_exponent > 1.0)) {
    throw ConfigError("power-law exponent must exceed 1");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Per-vertex activity weights follow an exact discrete power law with
  // x_min = 1, sampled by inversion over a table truncated at the edge count
  // (no vertex can be more active than the whole stream).
  const std::uint64_t table_size =
      std::min<std::uint64_t>(spec.edge_count, std::uint64_t{1} << 21);
  std::vector<double> weight_cdf(table_size);
  double mass = 0.0;
  for (std::uint64_t x = 1; x <= table_size; ++x) {
    mass += std::pow(static_cast<double>(x), -spec.power_law_exponent);
    weight_cdf[x - 1] = mass;
  }
  std::vector<double> cdf(spec.vertex_count);
  double acc = 0.0;
  for (std::uint64_t v = 0; v < spec.vertex_count; ++v) {
    const auto it =
        std::lower_bound(weight_cdf.begin(), weight_cdf.end(), unit(rng) * mass);
    acc += static_cast<double>(std::min<std::ptrdiff_t>(
        it - weight_cdf.begin() + 1, static_cast<std::ptrdiff_t>(table_size)));
    cdf[v] = acc;
  }
  auto draw = [&]() -> VertexId {
    const double target = unit(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    const auto idx = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size() - 1)));
    return idx + 1;
  };

  const std::uint64_t span =
      spec.time_span == 0 ? spec.edge_count : spec.time_span;
  const double mean =
      static_cast<double>(spec.edge_count) / static_cast<double>(span);
  const double variance = spec.arrival_variance < 0 ? mean : spec.arrival_variance;
  std::normal_distribution<double> arrivals(mean, std::sqrt(variance));
  std::vector<std::uint64_t> counts(span);
  std::uint64_t total = 0;
  for (auto& c : counts) {
    c = static_cast<std::uint64_t>(std::max(0.0, std::round(arrivals(rng))));
    total += c;
  }
  std::uniform_int_distribution<std::uint64_t> slice(0, span - 1);
  while (total < spec.edge_count) {
    ++counts[slice(rng)];
    ++total;
  }
  while (total > spec.edge_count) {
    auto& c = counts[slice(rng)];
    if (c > 0) {
      --c;
      --total;
    }
  }

  std::vector<StreamEdge> edges;
  edges.reserve(spec.edge_count);
  for (std::uint64_t t = 0; t < span; ++t) {
    for (std::uint64_t k = 0; k < counts[t]; ++k) {
      StreamEdge e;
      e.src = draw();
      e.dst = draw();
      for (int tries = 0; tries < 8 && e.dst == e.src; ++tries) e.dst = draw();
      e.weight = 1;
      e.time = t + 1;
      edges.push_back(e);
    }
  }
  return edges;
}

}  // namespace higgs
