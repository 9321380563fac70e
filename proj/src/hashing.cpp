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

#include "higgs/hashing.hpp"

#include <bit>
#include <cmath>

namespace higgs {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// MurmurHash3 fmix64 finalizer.
constexpr std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

constexpr std::uint64_t low_mask(std::uint32_t bits) {
  return bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
}

}  // namespace

void HashConfig::validate() const {
  if (d1 < 2 || !std::has_single_bit(d1)) {
    throw ConfigError("d1 must be a power of two >= 2");
  }
  if (f1 < 1 || f1 > 32) throw ConfigError("f1 must lie in [1, 32]");
  if (f1 + d1_log2() > 64) {
    throw ConfigError("f1 + log2(d1) exceeds the 64-bit hash width");
  }
  if (r_bits < 1 || r_bits > f1) {
    throw ConfigError("r_bits must lie in [1, f1]");
  }
  if (r_bits > 4) throw ConfigError("r_bits above 4 gives theta > 256");
  if (candidates < 1 || candidates > kMaxCandidates) {
    throw ConfigError("candidates must lie in [1, 16]");
  }
  if (candidates > d1) throw ConfigError("candidates exceeds d1");
}

std::uint32_t HashConfig::max_levels() const {
  std::uint32_t cap = f1 / r_bits;
  // Addresses are 32-bit: keep the side of the top matrix below 2^31.
  const std::uint32_t addr_cap = (31 - d1_log2()) / r_bits + 1;
  return std::max<std::uint32_t>(1, std::min(cap, addr_cap));
}

std::uint32_t HashConfig::index_bits() const {
  return candidates <= 1 ? 0 : std::bit_width(candidates - 1);
}

std::uint32_t HashConfig::d1_log2() const {
  return static_cast<std::uint32_t>(std::countr_zero(d1));
}

double HashConfig::z() const {
  return static_cast<double>(d1) * std::ldexp(1.0, static_cast<int>(f1));
}

std::uint64_t hash_vertex(VertexId v, std::uint64_t seed) {
  return fmix64(v ^ fmix64(seed + kGolden));
}

VertexDigest digest_from_hash(std::uint64_t full_hash, const HashConfig& cfg) {
  VertexDigest d;
  d.full_hash = full_hash;
  d.fingerprint = static_cast<std::uint32_t>(full_hash & low_mask(cfg.f1));
  d.base_address =
      static_cast<std::uint32_t>((full_hash >> cfg.f1) & (cfg.d1 - 1));
  d.level = 1;
  return d;
}

VertexDigest lift_digest(const VertexDigest& d, const HashConfig& cfg) {
  const std::uint32_t width = cfg.fp_bits_at(d.level);
  if (width < cfg.r_bits || d.level + 1 > cfg.max_levels()) {
    throw LevelCapError("fingerprint bits exhausted at level " +
                        std::to_string(d.level));
  }
  const std::uint32_t keep = width - cfg.r_bits;
  VertexDigest out = d;
  const auto top = static_cast<std::uint32_t>(d.fingerprint >> keep);
  out.fingerprint = static_cast<std::uint32_t>(d.fingerprint & low_mask(keep));
  out.base_address = (d.base_address << cfg.r_bits) | top;
  out.level = d.level + 1;
  return out;
}

VertexDigest lower_digest(const VertexDigest& d, const HashConfig& cfg) {
  if (d.level <= 1) throw LevelCapError("cannot lower a level-1 digest");
  const std::uint32_t keep = cfg.fp_bits_at(d.level);
  VertexDigest out = d;
  const auto top =
      static_cast<std::uint32_t>(d.base_address & low_mask(cfg.r_bits));
  out.fingerprint = (top << keep) | d.fingerprint;
  out.base_address = d.base_address >> cfg.r_bits;
  out.level = d.level - 1;
  return out;
}

VertexDigest digest_at_level(VertexDigest d, std::uint32_t level,
                             const HashConfig& cfg) {
  while (d.level < level) d = lift_digest(d, cfg);
  return d;
}

std::uint32_t candidate_step(std::uint32_t fingerprint, std::uint32_t side) {
  const auto mixed =
      static_cast<std::uint32_t>((fingerprint * kGolden + kGolden) >> 40);
  return (mixed | 1u) & (side - 1);
}

CandidateSet::CandidateSet(std::uint32_t fingerprint,
                           std::uint32_t base_address, std::uint32_t side,
                           std::uint32_t count)
    : count_(count) {
  const std::uint32_t mask = side - 1;
  const std::uint32_t step = candidate_step(fingerprint, side);
  std::uint32_t a = base_address & mask;
  for (std::uint32_t i = 0; i < count; ++i) {
    addr_[i] = a;
    a = (a + step) & mask;
  }
}

CandidateSet candidate_addresses(const VertexDigest& d, std::uint32_t side,
                                 std::uint32_t r) {
  if (r > side || r > kMaxCandidates || r == 0) {
    throw ConfigError("candidate count must lie in [1, min(side, 16)]");
  }
  return CandidateSet(d.fingerprint, d.base_address, side, r);
}

std::uint32_t base_from_candidate(std::uint32_t fingerprint,
                                  std::uint32_t address, std::uint32_t index,
                                  std::uint32_t side) {
  const std::uint32_t step = candidate_step(fingerprint, side);
  return (address - index * step) & (side - 1);
}

}  // namespace higgs
