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

#include "higgs/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace higgs {
namespace {

constexpr std::uint8_t kSealed = 1;
constexpr std::uint8_t kFiller = 2;
constexpr std::uint8_t kHasMatrix = 4;

constexpr std::uint64_t kNodeHeaderBytes = 4 + 1 + 8 + 8 + 4 + 4;
constexpr std::uint64_t kMatrixHeaderBytes = 8 + 1 + 4 + 8;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(v) >> (8 * i));
    }
    out_.write(reinterpret_cast<const char*>(buf), sizeof(T));
  }

  // Appends the low `bits` bits of `v` to the packed region.
  void bits(std::uint64_t v, std::uint32_t n) {
    for (std::uint32_t i = 0; i < n; ++i) {
      if ((v >> i) & 1u) acc_ |= static_cast<std::uint8_t>(1u << fill_);
      if (++fill_ == 8) flush_byte();
    }
  }
  void end_packed() {
    if (fill_ > 0) flush_byte();
  }

 private:
  void flush_byte() {
    out_.put(static_cast<char>(acc_));
    acc_ = 0;
    fill_ = 0;
  }

  std::ostream& out_;
  std::uint8_t acc_ = 0;
  std::uint32_t fill_ = 0;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T get() {
    unsigned char buf[sizeof(T)];
    if (!in_.read(reinterpret_cast<char*>(buf), sizeof(T))) {
      throw FormatError("snapshot is truncated");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    }
    return static_cast<T>(v);
  }

  std::uint64_t bits(std::uint32_t n) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (fill_ == 0) {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
          throw FormatError("snapshot is truncated");
        }
        acc_ = static_cast<std::uint8_t>(c);
        fill_ = 8;
      }
      v |= static_cast<std::uint64_t>(acc_ & 1u) << i;
      acc_ >>= 1;
      --fill_;
    }
    return v;
  }
  void end_packed() {
    acc_ = 0;
    fill_ = 0;
  }

 private:
  std::istream& in_;
  std::uint8_t acc_ = 0;
  std::uint32_t fill_ = 0;
};

std::uint32_t address_bits(const MatrixShape& s) {
  return static_cast<std::uint32_t>(std::countr_zero(s.side));
}

void write_grid(Writer& w, const BucketGrid& grid, const EntryLayout& lay) {
  for (const Entry& e : grid.slots()) {
    w.bits(e.src_fp, lay.fp_bits);
    w.bits(e.dst_fp, lay.fp_bits);
    w.bits(e.src_index, lay.index_bits);
    w.bits(e.dst_index, lay.index_bits);
    w.bits(e.offset, lay.offset_bits);
    w.bits(e.weight, lay.weight_bits);
  }
  w.end_packed();
}

void read_grid(Reader& r, BucketGrid& grid, const EntryLayout& lay) {
  for (Entry& e : grid.slots()) {
    e.src_fp = static_cast<std::uint32_t>(r.bits(lay.fp_bits));
    e.dst_fp = static_cast<std::uint32_t>(r.bits(lay.fp_bits));
    e.src_index = static_cast<std::uint8_t>(r.bits(lay.index_bits));
    e.dst_index = static_cast<std::uint8_t>(r.bits(lay.index_bits));
    e.offset = static_cast<std::uint32_t>(r.bits(lay.offset_bits));
    e.weight = r.bits(lay.weight_bits);
    if (e.weight == 0) e = Entry{};
  }
  r.end_packed();
}

void write_matrix(Writer& w, const CompressedMatrix& m) {
  const MatrixShape& s = m.shape();
  w.put<std::uint64_t>(m.start_time());
  w.put<std::uint8_t>(m.saturated() ? 1 : 0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.overflow().size()));
  w.put<std::uint64_t>(m.spill().size());
  write_grid(w, m.grid(), s.layout);
  for (const OverflowBlock& b : m.overflow()) {
    w.put<std::uint64_t>(b.time);
    write_grid(w, b.grid, s.layout);
  }
  const std::uint32_t ab = address_bits(s);
  for (const SpillEntry& e : m.spill()) {
    w.bits(e.src_fp, s.layout.fp_bits);
    w.bits(e.dst_fp, s.layout.fp_bits);
    w.bits(e.src_address, ab);
    w.bits(e.dst_address, ab);
    w.bits(e.weight, s.layout.weight_bits);
  }
  w.end_packed();
}

std::unique_ptr<CompressedMatrix> read_matrix(Reader& r,
                                              const MatrixShape& s) {
  const auto start = r.get<std::uint64_t>();
  const auto saturated = r.get<std::uint8_t>();
  const auto blocks = r.get<std::uint32_t>();
  const auto spills = r.get<std::uint64_t>();
  auto m = std::make_unique<CompressedMatrix>(s, start);
  m->set_saturated(saturated != 0);
  read_grid(r, m->mutable_grid(), s.layout);
  // Bound allocations by what a well-formed file could hold before trusting
  // the counts.
  if (!s.is_leaf() && blocks != 0) {
    throw FormatError("overflow blocks on a non-leaf matrix");
  }
  if (blocks > (1u << 24)) throw FormatError("implausible overflow count");
  for (std::uint32_t i = 0; i < blocks; ++i) {
    OverflowBlock b;
    b.time = r.get<std::uint64_t>();
    b.grid = BucketGrid(s.side, s.bucket_entries);
    read_grid(r, b.grid, s.layout);
    m->mutable_overflow().push_back(std::move(b));
  }
  if (spills > s.slot_count() * 64) throw FormatError("implausible spill count");
  const std::uint32_t ab = address_bits(s);
  auto& spill = m->mutable_spill();
  spill.reserve(spills);
  for (std::uint64_t i = 0; i < spills; ++i) {
    SpillEntry e;
    e.src_fp = static_cast<std::uint32_t>(r.bits(s.layout.fp_bits));
    e.dst_fp = static_cast<std::uint32_t>(r.bits(s.layout.fp_bits));
    e.src_address = static_cast<std::uint32_t>(r.bits(ab));
    e.dst_address = static_cast<std::uint32_t>(r.bits(ab));
    e.weight = r.bits(s.layout.weight_bits);
    spill.push_back(e);
  }
  r.end_packed();
  return m;
}

void write_node(Writer& w, const TreeNode& n) {
  std::uint8_t flags = 0;
  if (n.sealed) flags |= kSealed;
  if (n.filler) flags |= kFiller;
  if (n.matrix) flags |= kHasMatrix;
  w.put<std::uint32_t>(n.level);
  w.put<std::uint8_t>(flags);
  w.put<std::uint64_t>(n.start);
  w.put<std::uint64_t>(n.end);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(n.keys.size()));
  for (Timestamp k : n.keys) w.put<std::uint64_t>(k);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(n.children.size()));
  if (n.matrix) write_matrix(w, *n.matrix);
  for (const auto& c : n.children) write_node(w, *c);
}

std::unique_ptr<TreeNode> read_node(Reader& r, const TreeConfig& cfg,
                                    std::uint32_t expected_level,
                                    std::uint32_t matrix_levels) {
  auto n = std::make_unique<TreeNode>();
  n->level = r.get<std::uint32_t>();
  if (expected_level != 0 && n->level != expected_level) {
    throw FormatError("node level does not match its parent");
  }
  if (n->level < 1 || n->level > SummaryTree::kMaxTreeLevels) {
    throw FormatError("node level out of range");
  }
  const auto flags = r.get<std::uint8_t>();
  n->sealed = (flags & kSealed) != 0;
  n->filler = (flags & kFiller) != 0;
  n->start = r.get<std::uint64_t>();
  n->end = r.get<std::uint64_t>();
  const auto keys = r.get<std::uint32_t>();
  const std::uint32_t theta = cfg.theta();
  if (keys >= theta) throw FormatError("node has too many keys");
  for (std::uint32_t i = 0; i < keys; ++i) n->keys.push_back(r.get<std::uint64_t>());
  const auto children = r.get<std::uint32_t>();
  if (n->level == 1 ? children != 0 : (children == 0 || children > theta ||
                                       children != keys + 1)) {
    throw FormatError("inconsistent child count");
  }
  if ((flags & kHasMatrix) != 0) {
    if (n->level > matrix_levels) {
      throw FormatError("matrix stored above the level cap");
    }
    n->matrix = read_matrix(r, cfg.shape_at(n->level));
  } else if (n->level == 1) {
    throw FormatError("leaf without a matrix");
  }
  for (std::uint32_t i = 0; i < children; ++i) {
    n->children.push_back(read_node(r, cfg, n->level - 1, matrix_levels));
  }
  return n;
}

std::uint64_t count_node_overhead(const TreeNode& n) {
  std::uint64_t bytes = kNodeHeaderBytes;
  if (n.matrix) bytes += kMatrixHeaderBytes;
  for (const auto& c : n.children) bytes += count_node_overhead(*c);
  return bytes;
}

std::uint32_t matrix_level_count(const SummaryTree& tree) {
  return std::min(tree.level_count(), tree.config().hash.max_levels());
}

}  // namespace

void write_snapshot(const SummaryTree& tree, std::ostream& out) {
  if (!tree.finalized()) {
    throw OrderingError("only finalized trees can be snapshotted");
  }
  const TreeConfig& cfg = tree.config();
  const auto st = tree.restore_state();
  Writer w(out);
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  w.put<std::uint32_t>(kSnapshotVersion);
  w.put<std::uint64_t>(cfg.hash.seed);
  w.put<std::uint32_t>(cfg.hash.f1);
  w.put<std::uint32_t>(cfg.hash.d1);
  w.put<std::uint32_t>(cfg.hash.r_bits);
  w.put<std::uint32_t>(cfg.theta());
  w.put<std::uint32_t>(cfg.hash.candidates);
  w.put<std::uint32_t>(cfg.bucket_entries);
  w.put<std::uint32_t>(cfg.offset_bits);
  w.put<std::uint32_t>(cfg.weight_bits);
  w.put<std::uint64_t>(st.edge_count);
  w.put<std::uint64_t>(st.deleted_count);
  w.put<std::uint64_t>(st.first_time);
  w.put<std::uint64_t>(st.last_time);
  w.put<std::uint32_t>(st.level_count);
  w.put<std::uint8_t>(st.finalized ? 1 : 0);
  w.put<std::uint8_t>(tree.root() != nullptr ? 1 : 0);
  const std::uint32_t levels = matrix_level_count(tree);
  w.put<std::uint32_t>(levels);
  for (std::uint32_t l = 1; l <= levels; ++l) {
    const MatrixShape s = cfg.shape_at(l);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.layout.fp_bits));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.layout.index_bits));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.layout.offset_bits));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(s.layout.weight_bits));
    w.put<std::uint32_t>(s.side);
  }
  if (tree.root() != nullptr) write_node(w, *tree.root());
  if (!out) throw FormatError("failed to write snapshot");
}

void write_snapshot_file(const SummaryTree& tree, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_snapshot(tree, out);
}

std::unique_ptr<SummaryTree> read_snapshot(std::istream& in) {
  char magic[sizeof(kSnapshotMagic)];
  if (!in.read(magic, sizeof(magic))) throw FormatError("snapshot is truncated");
  if (std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw FormatError("bad snapshot magic");
  }
  Reader r(in);
  if (r.get<std::uint32_t>() != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version");
  }
  TreeConfig cfg;
  cfg.hash.seed = r.get<std::uint64_t>();
  cfg.hash.f1 = r.get<std::uint32_t>();
  cfg.hash.d1 = r.get<std::uint32_t>();
  cfg.hash.r_bits = r.get<std::uint32_t>();
  const auto theta = r.get<std::uint32_t>();
  cfg.hash.candidates = r.get<std::uint32_t>();
  cfg.bucket_entries = r.get<std::uint32_t>();
  cfg.offset_bits = r.get<std::uint32_t>();
  cfg.weight_bits = r.get<std::uint32_t>();
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("incompatible snapshot config: ") + e.what());
  }
  if (theta != cfg.theta()) throw FormatError("theta disagrees with r_bits");

  SummaryTree::RestoreState st;
  st.edge_count = r.get<std::uint64_t>();
  st.deleted_count = r.get<std::uint64_t>();
  st.first_time = r.get<std::uint64_t>();
  st.last_time = r.get<std::uint64_t>();
  st.level_count = r.get<std::uint32_t>();
  st.finalized = r.get<std::uint8_t>() != 0;
  const bool has_root = r.get<std::uint8_t>() != 0;
  const auto levels = r.get<std::uint32_t>();
  if (!st.finalized) throw FormatError("snapshot of an unfinalized tree");
  if (st.level_count > SummaryTree::kMaxTreeLevels ||
      levels != std::min(st.level_count, cfg.hash.max_levels())) {
    throw FormatError("inconsistent level count");
  }
  for (std::uint32_t l = 1; l <= levels; ++l) {
    const MatrixShape s = cfg.shape_at(l);
    const auto fp = r.get<std::uint8_t>();
    const auto idx = r.get<std::uint8_t>();
    const auto off = r.get<std::uint8_t>();
    const auto wt = r.get<std::uint8_t>();
    const auto side = r.get<std::uint32_t>();
    if (fp != s.layout.fp_bits || idx != s.layout.index_bits ||
        off != s.layout.offset_bits || wt != s.layout.weight_bits ||
        side != s.side) {
      throw FormatError("stored field widths disagree with the config");
    }
  }
  std::unique_ptr<TreeNode> root;
  if (has_root) {
    root = read_node(r, cfg, 0, levels);
    if (root->level != st.level_count) {
      throw FormatError("root level does not match the level count");
    }
  }
  auto tree = std::make_unique<SummaryTree>(cfg);
  tree->restore(std::move(root), st);
  return tree;
}

std::unique_ptr<SummaryTree> read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot '" + path + "'");
  return read_snapshot(in);
}

std::uint64_t snapshot_overhead_bytes(const SummaryTree& tree) {
  const std::uint64_t header = 4 + 4 + 8 + 8 * 4 + 4 * 8 + 4 + 1 + 1 + 4 +
                               8ull * matrix_level_count(tree);
  return header + (tree.root() ? count_node_overhead(*tree.root()) : 0);
}

}  // namespace higgs
