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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "higgs/hashing.hpp"
#include "higgs/types.hpp"

namespace higgs {

/// One slot of a bucket. A slot whose weight is zero is empty.
///
/// `src_index`/`dst_index` record which candidate (0-based) of the vertex's
/// address walk the hosting row/column is. `offset` is only meaningful in
/// leaf matrices.
struct Entry {
  std::uint32_t src_fp = 0;
  std::uint32_t dst_fp = 0;
  std::uint32_t offset = 0;
  std::uint8_t src_index = 0;
  std::uint8_t dst_index = 0;
  Weight weight = 0;

  bool occupied() const { return weight != 0; }
  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Non-leaf entry that found every candidate bucket full during aggregation.
/// It keeps its full address pair so lookups stay exact.
struct SpillEntry {
  std::uint32_t src_fp = 0;
  std::uint32_t dst_fp = 0;
  std::uint32_t src_address = 0;
  std::uint32_t dst_address = 0;
  Weight weight = 0;

  friend bool operator==(const SpillEntry&, const SpillEntry&) = default;
};

/// Packed bit widths of the fields of one entry.
struct EntryLayout {
  std::uint32_t fp_bits = 0;
  std::uint32_t index_bits = 0;
  std::uint32_t offset_bits = 0;  // zero for non-leaf matrices
  std::uint32_t weight_bits = 32;

  std::uint64_t entry_bits() const {
    return 2ull * fp_bits + 2ull * index_bits + offset_bits + weight_bits;
  }
  friend bool operator==(const EntryLayout&, const EntryLayout&) = default;
};

/// Geometry and field widths of a matrix at a given level.
struct MatrixShape {
  std::uint32_t level = 1;
  std::uint32_t side = 2;
  std::uint32_t bucket_entries = 1;
  std::uint32_t candidates = 1;
  EntryLayout layout;

  bool is_leaf() const { return level == 1; }
  std::uint64_t slot_count() const {
    return static_cast<std::uint64_t>(side) * side * bucket_entries;
  }
  Weight weight_cap() const;

  /// Shape of a level-`level` matrix under the given configuration.
  static MatrixShape for_level(const HashConfig& cfg, std::uint32_t level,
                               std::uint32_t bucket_entries,
                               std::uint32_t offset_bits,
                               std::uint32_t weight_bits);
};

enum class InsertStatus { kMerged, kPlaced, kFull };

struct InsertOutcome {
  InsertStatus status = InsertStatus::kFull;
  std::uint8_t src_index = 0;
  std::uint8_t dst_index = 0;
};

/// A side x side grid of buckets holding `bucket_entries` slots each.
class BucketGrid {
 public:
  BucketGrid() = default;
  BucketGrid(std::uint32_t side, std::uint32_t bucket_entries)
      : side_(side),
        bucket_entries_(bucket_entries),
        slots_(static_cast<std::size_t>(side) * side * bucket_entries) {}

  std::uint32_t side() const { return side_; }
  std::uint32_t bucket_entries() const { return bucket_entries_; }

  std::span<Entry> bucket(std::uint32_t row, std::uint32_t col) {
    return {slots_.data() + index(row, col), bucket_entries_};
  }
  std::span<const Entry> bucket(std::uint32_t row, std::uint32_t col) const {
    return {slots_.data() + index(row, col), bucket_entries_};
  }
  std::span<Entry> slots() { return slots_; }
  std::span<const Entry> slots() const { return slots_; }

 private:
  std::size_t index(std::uint32_t row, std::uint32_t col) const {
    return (static_cast<std::size_t>(row) * side_ + col) * bucket_entries_;
  }

  std::uint32_t side_ = 0;
  std::uint32_t bucket_entries_ = 0;
  std::vector<Entry> slots_;
};

/// Leaf-side grid holding same-timestamp edges the main grid rejected.
struct OverflowBlock {
  Timestamp time = 0;
  BucketGrid grid;
};

/// The compressed matrix attached to every tree node.
class CompressedMatrix {
 public:
  CompressedMatrix(const MatrixShape& shape, Timestamp start_time);

  const MatrixShape& shape() const { return shape_; }
  std::uint32_t level() const { return shape_.level; }
  std::uint32_t side() const { return shape_.side; }
  bool is_leaf() const { return shape_.is_leaf(); }
  Timestamp start_time() const { return start_time_; }
  bool saturated() const { return saturated_; }

  /// Places or merges an edge. Leaf matrices require `offset`; digests must
  /// already be at this matrix's level. Never evicts.
  InsertOutcome insert(const VertexDigest& src, const VertexDigest& dst,
                       std::optional<std::uint32_t> offset, Weight w);

  /// Adds a same-timestamp edge to the leaf's overflow chain. `t` must not
  /// precede the newest block's timestamp. Never returns kFull.
  InsertOutcome overflow_insert(const VertexDigest& src,
                                const VertexDigest& dst, Timestamp t,
                                Weight w);

  /// Aggregated weight of entries matching the hashed edge. For leaves a
  /// present `filter` restricts entry timestamps.
  Weight edge_lookup(const VertexDigest& src, const VertexDigest& dst,
                     const std::optional<TemporalRange>& filter) const;

  /// Total weight of entries whose source (kOut) or destination (kIn)
  /// identity matches `v`.
  Weight vertex_scan(const VertexDigest& v, Direction dir,
                     const std::optional<TemporalRange>& filter) const;

  /// Re-places every entry of a sealed child one level down. Returns the
  /// number of entries migrated.
  std::size_t aggregate_child(const CompressedMatrix& child,
                              const HashConfig& cfg);

  /// Weight removable for the hashed edge (leaf: at time `t`).
  Weight removable(const VertexDigest& src, const VertexDigest& dst,
                   std::optional<Timestamp> t) const;
  /// Subtracts `w` from matching entries, emptying slots that reach zero.
  /// Throws NotFoundError/UnderflowError without mutating on failure.
  void remove(const VertexDigest& src, const VertexDigest& dst,
              std::optional<Timestamp> t, Weight w);

  std::uint64_t occupied_slots() const;
  std::uint64_t total_slots() const { return shape_.slot_count(); }
  Weight total_weight() const;
  std::uint64_t entry_count() const;

  /// Packed size of the grid, overflow chain and spill list.
  std::uint64_t space_bits() const;
  std::uint64_t space_bytes() const { return (space_bits() + 7) / 8; }

  /// Calls `fn(entry, row, col)` for every occupied main-grid slot.
  void for_each_entry(
      const std::function<void(const Entry&, std::uint32_t, std::uint32_t)>&
          fn) const;

  const BucketGrid& grid() const { return grid_; }
  BucketGrid& mutable_grid() { return grid_; }
  const std::vector<OverflowBlock>& overflow() const { return overflow_; }
  std::vector<OverflowBlock>& mutable_overflow() { return overflow_; }
  const std::vector<SpillEntry>& spill() const { return spill_; }
  std::vector<SpillEntry>& mutable_spill() { return spill_; }
  void set_saturated(bool s) { saturated_ = s; }

  static std::uint64_t spill_entry_bits(const MatrixShape& shape);

 private:
  InsertOutcome insert_into(BucketGrid& grid, const CandidateSet& rows,
                            const CandidateSet& cols, std::uint32_t src_fp,
                            std::uint32_t dst_fp, std::uint32_t offset,
                            Weight w);
  void insert_identity(const VertexDigest& src, const VertexDigest& dst,
                       Weight w);
  Weight add_weight(Weight current, Weight w);
  void require_level(const VertexDigest& d) const;

  MatrixShape shape_;
  Timestamp start_time_ = 0;
  bool saturated_ = false;
  BucketGrid grid_;
  std::vector<OverflowBlock> overflow_;
  std::vector<SpillEntry> spill_;
};

}  // namespace higgs
