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

#include "higgs/tree.hpp"

#include <algorithm>
#include <exception>
#include <functional>

namespace higgs {

void TreeConfig::validate() const {
  hash.validate();
  if (bucket_entries < 1 || bucket_entries > 64) {
    throw ConfigError("bucket_entries must lie in [1, 64]");
  }
  if (offset_bits < 1 || offset_bits > 32) {
    throw ConfigError("offset_bits must lie in [1, 32]");
  }
  if (weight_bits < 1 || weight_bits > 64) {
    throw ConfigError("weight_bits must lie in [1, 64]");
  }
}

SummaryTree::SummaryTree(const TreeConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

std::unique_ptr<TreeNode> SummaryTree::make_node(std::uint32_t level,
                                                 Timestamp start) {
  if (level > kMaxTreeLevels) throw LevelCapError("tree height limit reached");
  auto node = std::make_unique<TreeNode>();
  node->level = level;
  node->start = start;
  node->ordinal = ++ordinals_[level];
  if (level == 1) {
    node->matrix =
        std::make_unique<CompressedMatrix>(cfg_.shape_at(1), start);
  }
  return node;
}

void SummaryTree::check_writable(const StreamEdge& e) const {
  if (finalized_) throw OrderingError("tree is finalized");
  if (root_ != nullptr && e.time < last_time_) {
    throw OrderingError("timestamp " + std::to_string(e.time) +
                        " precedes previous timestamp " +
                        std::to_string(last_time_));
  }
}

std::optional<SummaryTree::Attach> SummaryTree::insert_at_leaf(
    const StreamEdge& e) {
  check_writable(e);
  if (e.weight == 0) return std::nullopt;
  if (root_ == nullptr) {
    root_ = make_node(1, e.time);
    spine_[1] = root_.get();
    level_count_ = 1;
    first_time_ = e.time;
    last_time_ = e.time;
  }
  const VertexDigest src = digest(e.src, cfg_.hash);
  const VertexDigest dst = digest(e.dst, cfg_.hash);
  TreeNode& leaf = *spine_[1];
  const std::uint64_t max_offset =
      cfg_.offset_bits >= 32 ? 0xFFFFFFFFull
                             : ((std::uint64_t{1} << cfg_.offset_bits) - 1);
  const std::uint64_t offset = e.time - leaf.start;
  const bool same_time = edge_count_ > 0 && e.time == last_time_;

  std::optional<Attach> out;
  bool stored = false;
  if (offset <= max_offset) {
    const InsertOutcome res = leaf.matrix->insert(
        src, dst, static_cast<std::uint32_t>(offset), e.weight);
    if (res.status != InsertStatus::kFull) {
      stored = true;
    } else if (same_time) {
      leaf.matrix->overflow_insert(src, dst, e.time, e.weight);
      stored = true;
    }
  }
  if (!stored) {
    leaf.sealed = true;
    leaf.end = e.time - 1;
    auto fresh = make_node(1, e.time);
    fresh->matrix->insert(src, dst, 0u, e.weight);
    spine_[1] = fresh.get();
    out = Attach{2, std::move(fresh), e.time};
  }
  last_time_ = e.time;
  ++edge_count_;
  return out;
}

std::optional<SummaryTree::Attach> SummaryTree::attach(Attach a) {
  const std::uint32_t level = a.level;
  TreeNode* parent = spine_[level];
  if (parent == nullptr) {
    // The previous root just received a sibling: grow a new root above it.
    auto root = make_node(level, root_->start);
    root->keys.push_back(a.key);
    root->children.push_back(std::move(root_));
    root->children.push_back(std::move(a.child));
    spine_[level] = root.get();
    root_ = std::move(root);
    level_count_ = level;
    return std::nullopt;
  }
  if (parent->children.size() < cfg_.theta()) {
    parent->keys.push_back(a.key);
    parent->children.push_back(std::move(a.child));
    parent->filler = false;
    return std::nullopt;
  }
  seal(*parent);
  auto next = make_node(level, a.key);
  next->filler = true;
  next->children.push_back(std::move(a.child));
  spine_[level] = next.get();
  return Attach{level + 1, std::move(next), a.key};
}

void SummaryTree::seal(TreeNode& node) {
  node.sealed = true;
  if (node.is_leaf()) return;
  node.end = node.children.back()->end;
  if (node.level > cfg_.hash.max_levels()) return;  // served by its children
  auto m = std::make_unique<CompressedMatrix>(cfg_.shape_at(node.level),
                                              node.start);
  for (const auto& child : node.children) {
    if (child->matrix) m->aggregate_child(*child->matrix, cfg_.hash);
  }
  node.matrix = std::move(m);
}

void SummaryTree::insert(const StreamEdge& e) {
  auto pending = insert_at_leaf(e);
  while (pending) pending = attach(std::move(*pending));
}

void SummaryTree::finalize() {
  if (finalized_) return;
  if (root_ != nullptr) {
    TreeNode& leaf = *spine_[1];
    leaf.sealed = true;
    leaf.end = last_time_;
    for (std::uint32_t l = 2; l <= level_count_; ++l) seal(*spine_[l]);
  }
  finalized_ = true;
}

void SummaryTree::remove(const StreamEdge& e) {
  if (root_ == nullptr || e.time < first_time_ || e.time > last_time_) {
    throw NotFoundError("no edge at timestamp " + std::to_string(e.time));
  }
  if (e.weight == 0) return;
  std::vector<TreeNode*> path;
  TreeNode* node = root_.get();
  while (!node->is_leaf()) {
    path.push_back(node);
    const auto it =
        std::upper_bound(node->keys.begin(), node->keys.end(), e.time);
    node = node->children[static_cast<std::size_t>(it - node->keys.begin())]
               .get();
  }
  const VertexDigest src = digest(e.src, cfg_.hash);
  const VertexDigest dst = digest(e.dst, cfg_.hash);

  struct Target {
    CompressedMatrix* matrix;
    VertexDigest src, dst;
  };
  std::vector<Target> targets;
  targets.push_back({node->matrix.get(), src, dst});
  for (TreeNode* anc : path) {
    if (!anc->sealed || !anc->matrix) continue;
    targets.push_back({anc->matrix.get(),
                       digest_at_level(src, anc->level, cfg_.hash),
                       digest_at_level(dst, anc->level, cfg_.hash)});
  }
  // Validate every level before mutating any of them.
  for (const Target& t : targets) {
    const bool leaf = t.matrix->is_leaf();
    const Weight avail = t.matrix->removable(
        t.src, t.dst, leaf ? std::optional<Timestamp>(e.time) : std::nullopt);
    if (avail == 0) throw NotFoundError("no entry matches the deleted edge");
    if (avail < e.weight) {
      throw UnderflowError("deleting more weight than was inserted");
    }
  }
  for (const Target& t : targets) {
    const bool leaf = t.matrix->is_leaf();
    t.matrix->remove(t.src, t.dst,
                     leaf ? std::optional<Timestamp>(e.time) : std::nullopt,
                     e.weight);
  }
  ++deleted_count_;
}

std::optional<TemporalRange> SummaryTree::stream_span() const {
  if (root_ == nullptr) return std::nullopt;
  return TemporalRange(first_time_, last_time_);
}

TreeStats SummaryTree::stats() const {
  TreeStats s;
  s.edge_count = edge_count_;
  s.deleted_count = deleted_count_;
  s.level_count = std::max<std::uint32_t>(1, level_count_);
  s.nodes_per_level.assign(s.level_count, 0);
  std::vector<std::uint64_t> occupied(s.level_count, 0), total(s.level_count, 0);
  std::function<void(const TreeNode&)> visit = [&](const TreeNode& n) {
    s.nodes_per_level[n.level - 1]++;
    s.key_bytes += n.keys.size() * sizeof(Timestamp);
    if (n.matrix) {
      s.matrix_bytes += n.matrix->space_bytes();
      occupied[n.level - 1] += n.matrix->occupied_slots();
      total[n.level - 1] += n.matrix->total_slots();
      s.overflow_blocks += n.matrix->overflow().size();
      s.spill_entries += n.matrix->spill().size();
      s.saturated = s.saturated || n.matrix->saturated();
      if (n.is_leaf()) s.leaf_weight += n.matrix->total_weight();
    }
    for (const auto& c : n.children) visit(*c);
  };
  if (root_ != nullptr) visit(*root_);
  s.leaf_count = s.nodes_per_level[0];
  s.bytes = s.matrix_bytes + s.key_bytes;
  s.utilization.resize(s.level_count, 0.0);
  for (std::uint32_t l = 0; l < s.level_count; ++l) {
    if (total[l] > 0) {
      s.utilization[l] =
          static_cast<double>(occupied[l]) / static_cast<double>(total[l]);
    }
  }
  if (root_ != nullptr && s.leaf_count > 0) {
    s.span_per_leaf = static_cast<double>(last_time_ - first_time_ + 1) /
                      static_cast<double>(s.leaf_count);
  }
  return s;
}

SummaryTree::RestoreState SummaryTree::restore_state() const {
  return {edge_count_, deleted_count_, first_time_, last_time_, level_count_,
          finalized_};
}

void SummaryTree::restore(std::unique_ptr<TreeNode> root,
                          const RestoreState& st) {
  root_ = std::move(root);
  edge_count_ = st.edge_count;
  deleted_count_ = st.deleted_count;
  first_time_ = st.first_time;
  last_time_ = st.last_time;
  level_count_ = st.level_count;
  finalized_ = st.finalized;
  spine_.fill(nullptr);
  ordinals_.fill(0);
  // Ordinals follow time order within a level, which is a per-level
  // left-to-right walk.
  std::vector<std::vector<TreeNode*>> by_level(kMaxTreeLevels + 1);
  std::function<void(TreeNode&)> collect = [&](TreeNode& n) {
    by_level[n.level].push_back(&n);
    for (auto& c : n.children) collect(*c);
  };
  if (root_ != nullptr) {
    collect(*root_);
    for (std::uint32_t l = 1; l <= kMaxTreeLevels; ++l) {
      for (TreeNode* n : by_level[l]) n->ordinal = ++ordinals_[l];
    }
    for (TreeNode* n = root_.get(); n != nullptr;
         n = n->children.empty() ? nullptr : n->children.back().get()) {
      spine_[n->level] = n;
    }
  }
}

// ---------------------------------------------------------------------------
// PipelinedIngest

PipelinedIngest::PipelinedIngest(SummaryTree& tree) : tree_(tree) {
  if (tree.finalized()) throw OrderingError("tree is finalized");
}

PipelinedIngest::~PipelinedIngest() {
  try {
    finish();
  } catch (...) {
  }
}

PipelinedIngest::Worker& PipelinedIngest::worker_for(std::uint32_t level) {
  if (level > SummaryTree::kMaxTreeLevels) {
    throw LevelCapError("tree height limit reached");
  }
  auto& slot = workers_[level];
  if (!slot) {
    slot = std::make_unique<Worker>();
    slot->thread = std::thread([this, level] { run(level); });
  }
  return *slot;
}

void PipelinedIngest::dispatch(SummaryTree::Attach a) {
  Worker& w = worker_for(a.level);
  {
    std::lock_guard<std::mutex> lock(w.mu);
    w.queue.push_back(std::move(a));
  }
  w.cv.notify_one();
}

void PipelinedIngest::run(std::uint32_t level) {
  Worker& w = *workers_[level];
  for (;;) {
    SummaryTree::Attach a;
    {
      std::unique_lock<std::mutex> lock(w.mu);
      w.cv.wait(lock, [&] { return w.stop || !w.queue.empty(); });
      if (w.queue.empty()) return;
      a = std::move(w.queue.front());
      w.queue.pop_front();
    }
    if (w.error) continue;
    try {
      auto next = tree_.attach(std::move(a));
      if (next) dispatch(std::move(*next));
    } catch (...) {
      w.error = std::current_exception();
    }
  }
}

void PipelinedIngest::insert(const StreamEdge& e) {
  if (finished_) throw OrderingError("pipeline already finished");
  auto pending = tree_.insert_at_leaf(e);
  if (pending) dispatch(std::move(*pending));
}

void PipelinedIngest::finish() {
  if (finished_) return;
  finished_ = true;
  std::exception_ptr first_error;
  // A worker may only spawn the next level up, so joining bottom-up sees
  // every worker that will ever exist.
  for (std::uint32_t level = 2; level <= SummaryTree::kMaxTreeLevels; ++level) {
    auto& slot = workers_[level];
    if (!slot) break;
    {
      std::lock_guard<std::mutex> lock(slot->mu);
      slot->stop = true;
    }
    slot->cv.notify_one();
    slot->thread.join();
    if (slot->error && !first_error) first_error = slot->error;
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace higgs
