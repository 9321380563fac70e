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

#include <array>
#include <cstdint>
#include <span>

#include "higgs/types.hpp"

namespace higgs {

/// Upper bound on the number of optional addresses per vertex. Each index of
/// an entry's index pair is stored in at most four bits.
inline constexpr std::uint32_t kMaxCandidates = 16;

/// Hashing parameters shared by every level of the summary.
///
/// Level `l` (1-based) uses matrices of side `d1 * 2^(r_bits * (l-1))` and
/// fingerprints of `f1 - (l-1) * r_bits` bits.
struct HashConfig {
  std::uint64_t seed = 0;
  std::uint32_t f1 = 19;          // fingerprint bits at level 1
  std::uint32_t d1 = 16;          // leaf matrix side, power of two
  std::uint32_t r_bits = 1;       // bits moved from fingerprint to address per level
  std::uint32_t candidates = 4;   // optional addresses per vertex

  /// Throws ConfigError when any invariant is violated.
  void validate() const;

  /// Highest level that can still host a matrix.
  std::uint32_t max_levels() const;
  std::uint32_t theta() const { return 1u << (2 * r_bits); }
  std::uint32_t index_bits() const;
  std::uint32_t d1_log2() const;
  std::uint32_t side_at(std::uint32_t level) const {
    return d1 << (r_bits * (level - 1));
  }
  std::uint32_t fp_bits_at(std::uint32_t level) const {
    return f1 - (level - 1) * r_bits;
  }
  /// Size of the hash value range seen by the level-1 matrix, d1 * 2^f1.
  double z() const;

  friend bool operator==(const HashConfig&, const HashConfig&) = default;
};

/// A vertex's identity inside a matrix of one level: fingerprint plus the
/// base (first-choice) row/column address.
struct VertexDigest {
  std::uint64_t full_hash = 0;
  std::uint32_t fingerprint = 0;
  std::uint32_t base_address = 0;
  std::uint32_t level = 1;

  friend bool operator==(const VertexDigest&, const VertexDigest&) = default;
};

/// Seeded 64-bit avalanche hash of a vertex id's little-endian encoding.
std::uint64_t hash_vertex(VertexId v, std::uint64_t seed);

/// Splits a full hash into the level-1 fingerprint and base address.
VertexDigest digest_from_hash(std::uint64_t full_hash, const HashConfig& cfg);

inline VertexDigest digest(VertexId v, const HashConfig& cfg) {
  return digest_from_hash(hash_vertex(v, cfg.seed), cfg);
}

/// Moves the top `r_bits` fingerprint bits into the low address bits,
/// producing the digest used one level up.
VertexDigest lift_digest(const VertexDigest& d, const HashConfig& cfg);

/// Inverse of lift_digest.
VertexDigest lower_digest(const VertexDigest& d, const HashConfig& cfg);

/// Lifts a level-1 digest to `level`.
VertexDigest digest_at_level(VertexDigest d, std::uint32_t level,
                             const HashConfig& cfg);

/// Ordered candidate addresses of one vertex inside a matrix of side `side`.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::uint32_t fingerprint, std::uint32_t base_address,
               std::uint32_t side, std::uint32_t count);

  std::uint32_t size() const { return count_; }
  std::uint32_t operator[](std::uint32_t i) const { return addr_[i]; }
  std::span<const std::uint32_t> view() const { return {addr_.data(), count_}; }

 private:
  std::array<std::uint32_t, kMaxCandidates> addr_{};
  std::uint32_t count_ = 0;
};

/// Odd stride of a vertex's linear congruential address walk.
std::uint32_t candidate_step(std::uint32_t fingerprint, std::uint32_t side);

/// r distinct addresses in [0, side), the first being the base address.
/// Throws ConfigError if r > side or r > kMaxCandidates.
CandidateSet candidate_addresses(const VertexDigest& d, std::uint32_t side,
                                 std::uint32_t r);

/// Recovers the base address from a stored row/column and its candidate index.
std::uint32_t base_from_candidate(std::uint32_t fingerprint,
                                  std::uint32_t address, std::uint32_t index,
                                  std::uint32_t side);

}  // namespace higgs
