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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "higgs/hashing.hpp"
#include "higgs/matrix.hpp"
#include "higgs/types.hpp"

namespace higgs {

/// Everything needed to size the summary.
struct TreeConfig {
  HashConfig hash;
  std::uint32_t bucket_entries = 3;
  std::uint32_t offset_bits = 32;
  std::uint32_t weight_bits = 32;

  void validate() const;
  std::uint32_t theta() const { return hash.theta(); }
  MatrixShape shape_at(std::uint32_t level) const {
    return MatrixShape::for_level(hash, level, bucket_entries, offset_bits,
                                  weight_bits);
  }

  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

/// A node of the aggregated B-tree. Leaves sit at level 1.
///
/// With k children a node holds k-1 keys; key i is the start time of child
/// i+1. `end` is inclusive and valid once the node is sealed.
struct TreeNode {
  std::uint32_t level = 1;
  std::uint64_t ordinal = 0;  // 1-based creation order within the level
  Timestamp start = 0;
  Timestamp end = 0;
  std::vector<Timestamp> keys;
  std::vector<std::unique_ptr<TreeNode>> children;
  std::unique_ptr<CompressedMatrix> matrix;
  bool sealed = false;
  bool filler = false;

  bool is_leaf() const { return level == 1; }
};

struct TreeStats {
  std::uint64_t edge_count = 0;
  std::uint64_t deleted_count = 0;
  std::uint64_t leaf_count = 0;
  std::uint32_t level_count = 0;
  std::vector<std::uint64_t> nodes_per_level;
  std::vector<double> utilization;  // occupied / total main-grid slots
  std::uint64_t matrix_bytes = 0;
  std::uint64_t key_bytes = 0;
  std::uint64_t bytes = 0;
  std::uint64_t overflow_blocks = 0;
  std::uint64_t spill_entries = 0;
  Weight leaf_weight = 0;
  double span_per_leaf = 0.0;
  bool saturated = false;
};

class PipelinedIngest;

/// The hierarchical summary. Appends on the right only; a single writer.
class SummaryTree {
 public:
  static constexpr std::uint32_t kMaxTreeLevels = 64;

  explicit SummaryTree(const TreeConfig& cfg);
  SummaryTree(SummaryTree&&) = delete;
  SummaryTree& operator=(SummaryTree&&) = delete;

  /// Inserts an edge. Timestamps must be non-decreasing.
  void insert(const StreamEdge& e);

  /// Removes a previously inserted edge (same endpoints, timestamp, and at
  /// most the inserted weight) from its leaf and every sealed ancestor.
  void remove(const StreamEdge& e);

  /// Seals the open spine so the whole stream is served by sealed matrices.
  /// No inserts are accepted afterwards.
  void finalize();

  bool finalized() const { return finalized_; }
  bool empty() const { return root_ == nullptr; }
  const TreeConfig& config() const { return cfg_; }
  const TreeNode* root() const { return root_.get(); }
  std::uint32_t level_count() const { return level_count_; }
  std::optional<TemporalRange> stream_span() const;
  /// Inclusive end of a node's time span (the newest timestamp for the open
  /// spine).
  Timestamp span_end(const TreeNode& n) const {
    return n.sealed ? n.end : last_time_;
  }

  TreeStats stats() const;

  // Restoration hooks used by the snapshot reader.
  struct RestoreState {
    std::uint64_t edge_count = 0;
    std::uint64_t deleted_count = 0;
    Timestamp first_time = 0;
    Timestamp last_time = 0;
    std::uint32_t level_count = 0;
    bool finalized = false;
  };
  RestoreState restore_state() const;
  void restore(std::unique_ptr<TreeNode> root, const RestoreState& st);

 private:
  friend class PipelinedIngest;

  struct Attach {
    std::uint32_t level = 0;  // level of the node receiving `child`
    std::unique_ptr<TreeNode> child;
    Timestamp key = 0;
  };

  std::optional<Attach> insert_at_leaf(const StreamEdge& e);
  std::optional<Attach> attach(Attach a);
  void seal(TreeNode& node);
  std::unique_ptr<TreeNode> make_node(std::uint32_t level, Timestamp start);
  void check_writable(const StreamEdge& e) const;

  TreeConfig cfg_;
  std::unique_ptr<TreeNode> root_;
  std::array<TreeNode*, kMaxTreeLevels + 1> spine_{};  // indexed by level
  std::array<std::uint64_t, kMaxTreeLevels + 1> ordinals_{};
  std::uint32_t level_count_ = 0;
  std::uint64_t edge_count_ = 0;
  std::uint64_t deleted_count_ = 0;
  Timestamp first_time_ = 0;
  Timestamp last_time_ = 0;
  bool finalized_ = false;
};

/// Per-level pipelined construction: the calling thread performs leaf
/// inserts while one worker per upper level attaches nodes and aggregates.
/// An element is applied at level 1 before any upper-level effect it causes.
/// Queries must wait for finish().
class PipelinedIngest {
 public:
  explicit PipelinedIngest(SummaryTree& tree);
  ~PipelinedIngest();
  PipelinedIngest(const PipelinedIngest&) = delete;
  PipelinedIngest& operator=(const PipelinedIngest&) = delete;

  void insert(const StreamEdge& e);
  /// Drains every level and joins the workers. Idempotent.
  void finish();

 private:
  struct Worker {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<SummaryTree::Attach> queue;
    bool stop = false;
    std::exception_ptr error;
    std::thread thread;
  };

  void dispatch(SummaryTree::Attach a);
  void run(std::uint32_t level);
  Worker& worker_for(std::uint32_t level);

  SummaryTree& tree_;
  std::array<std::unique_ptr<Worker>, SummaryTree::kMaxTreeLevels + 1>
      workers_{};
  bool finished_ = false;
};

}  // namespace higgs
