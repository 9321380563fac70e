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

#include <algorithm>
#include <stdexcept>

namespace higgs {

void ExactStore::Run::add(Timestamp t, Weight w) {
  dirty = true;
  if (times.empty() || times.back() < t) {
    times.push_back(t);
    weights.push_back(w);
    return;
  }
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto idx = static_cast<std::size_t>(it - times.begin());
  if (it != times.end() && *it == t) {
    weights[idx] += w;
  } else {
    times.insert(it, t);
    weights.insert(weights.begin() + static_cast<std::ptrdiff_t>(idx), w);
  }
}

Weight ExactStore::Run::available(Timestamp t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) return 0;
  return weights[static_cast<std::size_t>(it - times.begin())];
}

void ExactStore::Run::subtract(Timestamp t, Weight w) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto idx = static_cast<std::size_t>(it - times.begin());
  weights[idx] -= w;
  if (weights[idx] == 0) {
    times.erase(it);
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  dirty = true;
}

void ExactStore::Run::rebuild() {
  prefix.assign(weights.size() + 1, 0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    prefix[i + 1] = prefix[i] + weights[i];
  }
  dirty = false;
}

Weight ExactStore::Run::sum(const TemporalRange& r) const {
  const auto lo = std::lower_bound(times.begin(), times.end(), r.start);
  const auto hi = std::upper_bound(times.begin(), times.end(), r.end);
  return prefix[static_cast<std::size_t>(hi - times.begin())] -
         prefix[static_cast<std::size_t>(lo - times.begin())];
}

void ExactStore::record(const StreamEdge& e) {
  if (e.weight == 0) return;
  edges_[{e.src, e.dst}].add(e.time, e.weight);
  out_[e.src].add(e.time, e.weight);
  in_[e.dst].add(e.time, e.weight);
  all_.add(e.time, e.weight);
  ++records_;
  dirty_.store(true, std::memory_order_release);
}

void ExactStore::remove(const StreamEdge& e) {
  if (e.weight == 0) return;
  const auto it = edges_.find({e.src, e.dst});
  if (it == edges_.end() || it->second.available(e.time) < e.weight) {
    throw NotFoundError("edge not recorded with the requested weight");
  }
  it->second.subtract(e.time, e.weight);
  out_[e.src].subtract(e.time, e.weight);
  in_[e.dst].subtract(e.time, e.weight);
  all_.subtract(e.time, e.weight);
  dirty_.store(true, std::memory_order_release);
}

void ExactStore::ensure_ready() const {
  if (!dirty_.load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(rebuild_mu_);
  if (!dirty_.load(std::memory_order_relaxed)) return;
  auto* self = const_cast<ExactStore*>(this);
  for (auto& [k, run] : self->edges_) {
    if (run.dirty) run.rebuild();
  }
  for (auto& [k, run] : self->out_) {
    if (run.dirty) run.rebuild();
  }
  for (auto& [k, run] : self->in_) {
    if (run.dirty) run.rebuild();
  }
  if (self->all_.dirty) self->all_.rebuild();
  dirty_.store(false, std::memory_order_release);
}

Weight ExactStore::run_sum(const Run* run, const TemporalRange& r) {
  return run == nullptr ? 0 : run->sum(r);
}

Weight ExactStore::exact_edge(VertexId src, VertexId dst,
                              const TemporalRange& r) const {
  ensure_ready();
  const auto it = edges_.find({src, dst});
  return run_sum(it == edges_.end() ? nullptr : &it->second, r);
}

Weight ExactStore::exact_vertex(VertexId v, Direction dir,
                                const TemporalRange& r) const {
  ensure_ready();
  const auto& index = dir == Direction::kOut ? out_ : in_;
  const auto it = index.find(v);
  return run_sum(it == index.end() ? nullptr : &it->second, r);
}

Weight ExactStore::exact_path(std::span<const VertexId> vertices,
                              const TemporalRange& r) const {
  if (vertices.size() < 2) {
    throw std::invalid_argument("a path needs at least two vertices");
  }
  Weight total = 0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    total += exact_edge(vertices[i], vertices[i + 1], r);
  }
  return total;
}

Weight ExactStore::exact_subgraph(
    std::span<const std::pair<VertexId, VertexId>> edges,
    const TemporalRange& r) const {
  if (edges.empty()) throw std::invalid_argument("subgraph has no edges");
  Weight total = 0;
  for (const auto& [s, d] : edges) total += exact_edge(s, d, r);
  return total;
}

Weight ExactStore::total_weight(const TemporalRange& r) const {
  ensure_ready();
  return all_.sum(r);
}

std::vector<std::pair<VertexId, VertexId>> ExactStore::distinct_edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edges_.size());
  for (const auto& [k, run] : edges_) {
    if (!run.times.empty()) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> ExactStore::vertices() const {
  std::vector<VertexId> out;
  for (const auto& [v, run] : out_) out.push_back(v);
  for (const auto& [v, run] : in_) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace higgs
