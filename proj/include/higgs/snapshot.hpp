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
#include <memory>
#include <string>

#include "higgs/tree.hpp"

namespace higgs {

inline constexpr char kSnapshotMagic[4] = {'H', 'I', 'G', 'G'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Binary layout (little-endian):
///   magic "HIGG", u32 version
///   config: u64 seed, u32 f1 d1 r_bits theta candidates bucket_entries
///           offset_bits weight_bits
///   state:  u64 edges deleted first last, u32 level_count, u8 finalized,
///           u8 has_root, u32 matrix_levels
///   per matrix level: u8 fp idx offset weight widths, u32 side
///   nodes in preorder: u32 level, u8 flags (1 sealed, 2 filler, 4 matrix),
///           u64 start end, u32 keys + u64 each, u32 children,
///           then the matrix payload when flagged
///   matrix: u64 start, u8 saturated, u32 overflow blocks, u64 spill
///           entries, bit-packed grid, per block u64 time + packed grid,
///           packed spill list. Each packed region is padded to a byte.
///
/// Writing requires a finalized tree.
void write_snapshot(const SummaryTree& tree, std::ostream& out);
void write_snapshot_file(const SummaryTree& tree, const std::string& path);

/// Throws FormatError on bad magic or version, truncation, or a config whose
/// derived widths disagree with the stored ones.
std::unique_ptr<SummaryTree> read_snapshot(std::istream& in);
std::unique_ptr<SummaryTree> read_snapshot_file(const std::string& path);

/// Bytes taken by everything except the packed matrices and keys.
std::uint64_t snapshot_overhead_bytes(const SummaryTree& tree);

}  // namespace higgs
