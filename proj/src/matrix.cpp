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

#include "higgs/matrix.hpp"

#include <bit>

namespace higgs {
namespace {

struct ScanResult {
  Entry* match = nullptr;
  Entry* empty = nullptr;
  std::uint8_t match_i = 0, match_j = 0;
  std::uint8_t empty_i = 0, empty_j = 0;
};

// Walks the r x r candidate buckets in lexicographic (i, j) order looking for
// an entry with the same identity and the first free slot.
ScanResult scan_candidates(BucketGrid& grid, const CandidateSet& rows,
                           const CandidateSet& cols, std::uint32_t src_fp,
                           std::uint32_t dst_fp, std::uint32_t offset) {
  ScanResult res;
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (std::uint32_t j = 0; j < cols.size(); ++j) {
      for (Entry& e : grid.bucket(rows[i], cols[j])) {
        if (!e.occupied()) {
          if (res.empty == nullptr) {
            res.empty = &e;
            res.empty_i = static_cast<std::uint8_t>(i);
            res.empty_j = static_cast<std::uint8_t>(j);
          }
          continue;
        }
        if (e.src_fp == src_fp && e.dst_fp == dst_fp && e.src_index == i &&
            e.dst_index == j && e.offset == offset) {
          res.match = &e;
          res.match_i = static_cast<std::uint8_t>(i);
          res.match_j = static_cast<std::uint8_t>(j);
          return res;
        }
      }
    }
  }
  return res;
}

template <typename Accept>
Weight sum_candidates(const BucketGrid& grid, const CandidateSet& rows,
                      const CandidateSet& cols, std::uint32_t src_fp,
                      std::uint32_t dst_fp, Accept&& accept) {
  Weight total = 0;
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (std::uint32_t j = 0; j < cols.size(); ++j) {
      for (const Entry& e : grid.bucket(rows[i], cols[j])) {
        if (e.occupied() && e.src_fp == src_fp && e.dst_fp == dst_fp &&
            e.src_index == i && e.dst_index == j && accept(e)) {
          total += e.weight;
        }
      }
    }
  }
  return total;
}

template <typename Accept>
Weight scan_lines(const BucketGrid& grid, const CandidateSet& lines,
                  std::uint32_t fp, Direction dir, Accept&& accept) {
  Weight total = 0;
  const std::uint32_t side = grid.side();
  for (std::uint32_t i = 0; i < lines.size(); ++i) {
    for (std::uint32_t k = 0; k < side; ++k) {
      const auto bucket = dir == Direction::kOut ? grid.bucket(lines[i], k)
                                                 : grid.bucket(k, lines[i]);
      for (const Entry& e : bucket) {
        if (!e.occupied()) continue;
        if (dir == Direction::kOut) {
          if (e.src_fp == fp && e.src_index == i && accept(e)) total += e.weight;
        } else {
          if (e.dst_fp == fp && e.dst_index == i && accept(e)) total += e.weight;
        }
      }
    }
  }
  return total;
}

bool spill_matches(const SpillEntry& s, const VertexDigest& src,
                   const VertexDigest& dst) {
  return s.src_fp == src.fingerprint && s.dst_fp == dst.fingerprint &&
         s.src_address == src.base_address && s.dst_address == dst.base_address;
}

}  // namespace

Weight MatrixShape::weight_cap() const {
  return layout.weight_bits >= 64 ? ~Weight{0}
                                  : ((Weight{1} << layout.weight_bits) - 1);
}

MatrixShape MatrixShape::for_level(const HashConfig& cfg, std::uint32_t level,
                                   std::uint32_t bucket_entries,
                                   std::uint32_t offset_bits,
                                   std::uint32_t weight_bits) {
  MatrixShape s;
  s.level = level;
  s.side = cfg.side_at(level);
  s.bucket_entries = bucket_entries;
  s.candidates = cfg.candidates;
  s.layout.fp_bits = cfg.fp_bits_at(level);
  s.layout.index_bits = cfg.index_bits();
  s.layout.offset_bits = level == 1 ? offset_bits : 0;
  s.layout.weight_bits = weight_bits;
  return s;
}

CompressedMatrix::CompressedMatrix(const MatrixShape& shape,
                                   Timestamp start_time)
    : shape_(shape),
      start_time_(start_time),
      grid_(shape.side, shape.bucket_entries) {
  if (shape.side == 0 || !std::has_single_bit(shape.side)) {
    throw ConfigError("matrix side must be a power of two");
  }
  if (shape.bucket_entries == 0) throw ConfigError("bucket_entries must be >= 1");
  if (shape.candidates == 0 || shape.candidates > shape.side ||
      shape.candidates > kMaxCandidates) {
    throw ConfigError("candidates must lie in [1, min(side, 16)]");
  }
  if (shape.layout.weight_bits == 0 || shape.layout.weight_bits > 64) {
    throw ConfigError("weight_bits must lie in [1, 64]");
  }
}

void CompressedMatrix::require_level(const VertexDigest& d) const {
  if (d.level != shape_.level) {
    throw std::invalid_argument("digest level does not match matrix level");
  }
}

Weight CompressedMatrix::add_weight(Weight current, Weight w) {
  const Weight cap = shape_.weight_cap();
  if (w > cap - current) {
    saturated_ = true;
    return cap;
  }
  return current + w;
}

InsertOutcome CompressedMatrix::insert_into(BucketGrid& grid,
                                            const CandidateSet& rows,
                                            const CandidateSet& cols,
                                            std::uint32_t src_fp,
                                            std::uint32_t dst_fp,
                                            std::uint32_t offset, Weight w) {
  ScanResult res = scan_candidates(grid, rows, cols, src_fp, dst_fp, offset);
  if (res.match != nullptr) {
    res.match->weight = add_weight(res.match->weight, w);
    return {InsertStatus::kMerged, res.match_i, res.match_j};
  }
  if (res.empty != nullptr) {
    *res.empty = Entry{src_fp, dst_fp, offset, res.empty_i, res.empty_j,
                       add_weight(0, w)};
    return {InsertStatus::kPlaced, res.empty_i, res.empty_j};
  }
  return {InsertStatus::kFull, 0, 0};
}

InsertOutcome CompressedMatrix::insert(const VertexDigest& src,
                                       const VertexDigest& dst,
                                       std::optional<std::uint32_t> offset,
                                       Weight w) {
  require_level(src);
  require_level(dst);
  if (is_leaf() && !offset) {
    throw std::invalid_argument("leaf insert requires a timestamp offset");
  }
  if (w == 0) throw std::invalid_argument("inserted weight must be >= 1");
  const CandidateSet rows(src.fingerprint, src.base_address, shape_.side,
                          shape_.candidates);
  const CandidateSet cols(dst.fingerprint, dst.base_address, shape_.side,
                          shape_.candidates);
  return insert_into(grid_, rows, cols, src.fingerprint, dst.fingerprint,
                     is_leaf() ? *offset : 0, w);
}

InsertOutcome CompressedMatrix::overflow_insert(const VertexDigest& src,
                                                const VertexDigest& dst,
                                                Timestamp t, Weight w) {
  require_level(src);
  require_level(dst);
  if (!is_leaf()) throw std::logic_error("overflow blocks are leaf-only");
  if (w == 0) throw std::invalid_argument("inserted weight must be >= 1");
  if (!overflow_.empty() && t < overflow_.back().time) {
    throw OrderingError("overflow timestamp precedes the newest block");
  }
  const CandidateSet rows(src.fingerprint, src.base_address, shape_.side,
                          shape_.candidates);
  const CandidateSet cols(dst.fingerprint, dst.base_address, shape_.side,
                          shape_.candidates);
  // Blocks with the same timestamp form a contiguous tail of the chain.
  std::size_t first = overflow_.size();
  while (first > 0 && overflow_[first - 1].time == t) --first;
  for (std::size_t k = first; k < overflow_.size(); ++k) {
    ScanResult res = scan_candidates(overflow_[k].grid, rows, cols,
                                     src.fingerprint, dst.fingerprint, 0);
    if (res.match != nullptr) {
      res.match->weight = add_weight(res.match->weight, w);
      return {InsertStatus::kMerged, res.match_i, res.match_j};
    }
  }
  if (first < overflow_.size()) {
    InsertOutcome out = insert_into(overflow_.back().grid, rows, cols,
                                    src.fingerprint, dst.fingerprint, 0, w);
    if (out.status != InsertStatus::kFull) return out;
  }
  overflow_.push_back(
      OverflowBlock{t, BucketGrid(shape_.side, shape_.bucket_entries)});
  return insert_into(overflow_.back().grid, rows, cols, src.fingerprint,
                     dst.fingerprint, 0, w);
}

void CompressedMatrix::insert_identity(const VertexDigest& src,
                                       const VertexDigest& dst, Weight w) {
  const CandidateSet rows(src.fingerprint, src.base_address, shape_.side,
                          shape_.candidates);
  const CandidateSet cols(dst.fingerprint, dst.base_address, shape_.side,
                          shape_.candidates);
  ScanResult res =
      scan_candidates(grid_, rows, cols, src.fingerprint, dst.fingerprint, 0);
  if (res.match != nullptr) {
    res.match->weight = add_weight(res.match->weight, w);
    return;
  }
  for (SpillEntry& s : spill_) {
    if (spill_matches(s, src, dst)) {
      s.weight = add_weight(s.weight, w);
      return;
    }
  }
  if (res.empty != nullptr) {
    *res.empty = Entry{src.fingerprint, dst.fingerprint, 0,    res.empty_i,
                       res.empty_j,     add_weight(0, w)};
    return;
  }
  spill_.push_back(SpillEntry{src.fingerprint, dst.fingerprint,
                              src.base_address, dst.base_address,
                              add_weight(0, w)});
}

Weight CompressedMatrix::edge_lookup(
    const VertexDigest& src, const VertexDigest& dst,
    const std::optional<TemporalRange>& filter) const {
  require_level(src);
  require_level(dst);
  const CandidateSet rows(src.fingerprint, src.base_address, shape_.side,
                          shape_.candidates);
  const CandidateSet cols(dst.fingerprint, dst.base_address, shape_.side,
                          shape_.candidates);
  const bool use_filter = is_leaf() && filter.has_value();
  Weight total = sum_candidates(
      grid_, rows, cols, src.fingerprint, dst.fingerprint,
      [&](const Entry& e) {
        return !use_filter || filter->contains(start_time_ + e.offset);
      });
  for (const OverflowBlock& block : overflow_) {
    if (use_filter && !filter->contains(block.time)) continue;
    total += sum_candidates(block.grid, rows, cols, src.fingerprint,
                            dst.fingerprint, [](const Entry&) { return true; });
  }
  for (const SpillEntry& s : spill_) {
    if (spill_matches(s, src, dst)) total += s.weight;
  }
  return total;
}

Weight CompressedMatrix::vertex_scan(
    const VertexDigest& v, Direction dir,
    const std::optional<TemporalRange>& filter) const {
  require_level(v);
  const CandidateSet lines(v.fingerprint, v.base_address, shape_.side,
                           shape_.candidates);
  const bool use_filter = is_leaf() && filter.has_value();
  Weight total = scan_lines(grid_, lines, v.fingerprint, dir, [&](const Entry& e) {
    return !use_filter || filter->contains(start_time_ + e.offset);
  });
  for (const OverflowBlock& block : overflow_) {
    if (use_filter && !filter->contains(block.time)) continue;
    total += scan_lines(block.grid, lines, v.fingerprint, dir,
                        [](const Entry&) { return true; });
  }
  for (const SpillEntry& s : spill_) {
    const bool hit = dir == Direction::kOut
                         ? (s.src_fp == v.fingerprint &&
                            s.src_address == v.base_address)
                         : (s.dst_fp == v.fingerprint &&
                            s.dst_address == v.base_address);
    if (hit) total += s.weight;
  }
  return total;
}

std::size_t CompressedMatrix::aggregate_child(const CompressedMatrix& child,
                                              const HashConfig& cfg) {
  if (child.level() + 1 != level() ||
      side() != (child.side() << cfg.r_bits)) {
    throw std::invalid_argument("aggregation requires a child one level down");
  }
  std::size_t migrated = 0;
  const std::uint32_t child_side = child.side();
  const std::uint32_t child_level = child.level();
  auto migrate_grid = [&](const BucketGrid& grid) {
    for (std::uint32_t row = 0; row < child_side; ++row) {
      for (std::uint32_t col = 0; col < child_side; ++col) {
        for (const Entry& e : grid.bucket(row, col)) {
          if (!e.occupied()) continue;
          VertexDigest s{0, e.src_fp,
                         base_from_candidate(e.src_fp, row, e.src_index,
                                             child_side),
                         child_level};
          VertexDigest d{0, e.dst_fp,
                         base_from_candidate(e.dst_fp, col, e.dst_index,
                                             child_side),
                         child_level};
          insert_identity(lift_digest(s, cfg), lift_digest(d, cfg), e.weight);
          ++migrated;
        }
      }
    }
  };
  migrate_grid(child.grid_);
  for (const OverflowBlock& block : child.overflow_) migrate_grid(block.grid);
  for (const SpillEntry& sp : child.spill_) {
    VertexDigest s{0, sp.src_fp, sp.src_address, child_level};
    VertexDigest d{0, sp.dst_fp, sp.dst_address, child_level};
    insert_identity(lift_digest(s, cfg), lift_digest(d, cfg), sp.weight);
    ++migrated;
  }
  if (child.saturated()) saturated_ = true;
  return migrated;
}

Weight CompressedMatrix::removable(const VertexDigest& src,
                                   const VertexDigest& dst,
                                   std::optional<Timestamp> t) const {
  if (is_leaf()) {
    if (!t) throw std::invalid_argument("leaf removal requires a timestamp");
    return edge_lookup(src, dst, TemporalRange(*t, *t));
  }
  return edge_lookup(src, dst, std::nullopt);
}

void CompressedMatrix::remove(const VertexDigest& src, const VertexDigest& dst,
                              std::optional<Timestamp> t, Weight w) {
  const Weight available = removable(src, dst, t);
  if (available == 0) throw NotFoundError("no entry matches the deleted edge");
  if (available < w) {
    throw UnderflowError("deleting more weight than was inserted");
  }
  const CandidateSet rows(src.fingerprint, src.base_address, shape_.side,
                          shape_.candidates);
  const CandidateSet cols(dst.fingerprint, dst.base_address, shape_.side,
                          shape_.candidates);
  Weight left = w;
  auto drain = [&left](Weight& slot_weight) {
    const Weight take = std::min(left, slot_weight);
    slot_weight -= take;
    left -= take;
  };
  auto drain_grid = [&](BucketGrid& grid, bool check_offset) {
    for (std::uint32_t i = 0; i < rows.size() && left > 0; ++i) {
      for (std::uint32_t j = 0; j < cols.size() && left > 0; ++j) {
        for (Entry& e : grid.bucket(rows[i], cols[j])) {
          if (left == 0) break;
          if (!e.occupied() || e.src_fp != src.fingerprint ||
              e.dst_fp != dst.fingerprint || e.src_index != i ||
              e.dst_index != j) {
            continue;
          }
          if (check_offset && start_time_ + e.offset != *t) continue;
          drain(e.weight);
          if (e.weight == 0) e = Entry{};
        }
      }
    }
  };
  drain_grid(grid_, is_leaf());
  for (OverflowBlock& block : overflow_) {
    if (left == 0) break;
    if (is_leaf() && block.time != *t) continue;
    drain_grid(block.grid, false);
  }
  for (auto it = spill_.begin(); it != spill_.end() && left > 0;) {
    if (spill_matches(*it, src, dst)) {
      drain(it->weight);
      if (it->weight == 0) {
        it = spill_.erase(it);
        continue;
      }
    }
    ++it;
  }
}

std::uint64_t CompressedMatrix::occupied_slots() const {
  std::uint64_t n = 0;
  for (const Entry& e : grid_.slots()) n += e.occupied() ? 1 : 0;
  return n;
}

std::uint64_t CompressedMatrix::entry_count() const {
  std::uint64_t n = occupied_slots() + spill_.size();
  for (const OverflowBlock& b : overflow_) {
    for (const Entry& e : b.grid.slots()) n += e.occupied() ? 1 : 0;
  }
  return n;
}

Weight CompressedMatrix::total_weight() const {
  Weight w = 0;
  for (const Entry& e : grid_.slots()) w += e.weight;
  for (const OverflowBlock& b : overflow_) {
    for (const Entry& e : b.grid.slots()) w += e.weight;
  }
  for (const SpillEntry& s : spill_) w += s.weight;
  return w;
}

std::uint64_t CompressedMatrix::spill_entry_bits(const MatrixShape& shape) {
  const auto addr_bits =
      static_cast<std::uint64_t>(std::countr_zero(shape.side));
  return 2ull * shape.layout.fp_bits + 2 * addr_bits +
         shape.layout.weight_bits;
}

std::uint64_t CompressedMatrix::space_bits() const {
  const std::uint64_t entry = shape_.layout.entry_bits();
  std::uint64_t bits = shape_.slot_count() * entry;
  for (const OverflowBlock& b : overflow_) {
    (void)b;
    bits += shape_.slot_count() * entry + 64;
  }
  bits += spill_.size() * spill_entry_bits(shape_);
  return bits;
}

void CompressedMatrix::for_each_entry(
    const std::function<void(const Entry&, std::uint32_t, std::uint32_t)>& fn)
    const {
  for (std::uint32_t row = 0; row < shape_.side; ++row) {
    for (std::uint32_t col = 0; col < shape_.side; ++col) {
      for (const Entry& e : grid_.bucket(row, col)) {
        if (e.occupied()) fn(e, row, col);
      }
    }
  }
}

}  // namespace higgs
