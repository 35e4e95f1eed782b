#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "geocomm/kernels.hpp"
#include "geocomm/locality.hpp"
#include "geocomm/modularity.hpp"
#include "geocomm/network.hpp"

namespace geocomm {

struct MergeRecord {
  std::size_t step = 0;
  CommunityId survivor = 0;  // keeps its id
  CommunityId absorbed = 0;
  double delta_q = 0.0;
  double q_after = 0.0;
};

struct Dendrogram {
  std::vector<MergeRecord> merges;
  Partition partition;
  double q_initial = 0.0;
  double q_final = 0.0;
};

struct DetectOptions {
  /// Pair sample used to estimate sigma (exact when n(n-1)/2 fits).
  std::uint64_t sigma_sample = kDefaultPairSample;
  std::uint64_t seed = 1;
  /// Merges between from-scratch recomputations of Q; 0 disables.
  std::size_t recompute_interval = 1024;
  /// Throw std::logic_error when a recomputation disagrees with the running
  /// Q by more than drift_tolerance.
#ifdef NDEBUG
  bool verify_drift = false;
#else
  bool verify_drift = true;
#endif
  double drift_tolerance = 1e-6;
};

/// Incremental merge-gain state for greedy agglomeration.
///
/// Every community starts as one node. For each pair of communities joined by
/// at least one edge the ledger stores the exact change in the active
/// modularity functional if the two were merged. Rows are ordered maps; the
/// global maximum is a binary heap with lazily invalidated entries (each
/// stored gain carries a stamp, heap entries with an old stamp are skipped).
///
/// Gains are exact differences of the from-scratch functional, so the running
/// Q always equals the evaluator's value for the current partition.
class DeltaQLedger {
 public:
  /// Builds the singleton state (one community per node, one entry per edge).
  DeltaQLedger(const Network& net, const WeightContext& ctx,
               const DetectOptions& options = DetectOptions{});

  /// Merges the best pair, or returns nullopt when the best gain is <= 0 or
  /// no adjacent pair is left.
  std::optional<MergeRecord> merge_step();

  /// Gain of merging two live, non-adjacent communities: only the null-model
  /// term contributes, so the value is <= 0. Throws std::logic_error when an
  /// edge joins them.
  double cross_penalty(CommunityId j, CommunityId k) const;

  std::optional<double> delta_q(CommunityId i, CommunityId j) const;
  bool alive(CommunityId c) const { return alive_[c]; }
  std::span<const NodeIndex> members(CommunityId c) const { return members_[c]; }
  std::size_t live_count() const { return live_; }
  std::size_t merge_count() const { return merges_; }
  /// Live communities adjacent to c, ascending.
  std::vector<CommunityId> neighbors(CommunityId c) const;

  double q() const { return q_; }
  /// (merge step, Q) after every merge; step 0 is the singleton state.
  const std::vector<std::pair<std::size_t, double>>& q_trace() const { return trace_; }

  /// Compacted partition of the current state.
  Partition partition() const;

  /// Checks symmetry and entry/edge consistency; throws std::logic_error.
  void validate() const;

 private:
  struct Entry {
    double dq;
    std::uint64_t stamp;
  };
  struct HeapItem {
    double dq;
    CommunityId a;  // a < b
    CommunityId b;
    std::uint64_t stamp;
  };
  struct HeapOrder {
    bool operator()(const HeapItem& x, const HeapItem& y) const {
      if (x.dq != y.dq) return x.dq < y.dq;
      if (x.a != y.a) return x.a > y.a;
      return x.b > y.b;
    }
  };

  void set_entry(CommunityId i, CommunityId j, double dq);
  bool current(const HeapItem& item) const;
  void rebuild_heap();
  std::vector<double> penalties(CommunityId from, std::span<const CommunityId> to) const;

  const Network* net_;
  const WeightContext* ctx_;
  DetectOptions options_;
  double normalizer_ = 1.0;   // Z in Q = (1/Z) sum [A W - P]
  double null_scale_ = 0.0;   // P_vw = null_scale * g_v * g_w * L_vw

  std::vector<std::map<CommunityId, Entry>> rows_;
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapOrder> heap_;
  std::uint64_t next_stamp_ = 0;
  std::size_t entry_count_ = 0;  // unordered pairs

  std::vector<std::vector<NodeIndex>> members_;
  std::vector<kernels::MemberBlock> blocks_;
  std::vector<double> weight_sums_;
  std::vector<bool> alive_;
  std::size_t live_ = 0;
  std::size_t merges_ = 0;

  double q_ = 0.0;
  std::vector<std::pair<std::size_t, double>> trace_;
};

/// Runs greedy agglomeration to the first non-positive best gain.
Dendrogram detect(const Network& net, const WeightContext& ctx,
                  const DetectOptions& options = DetectOptions{});

/// Builds the weight context (sigma from the seeded pair sample) and runs
/// detection. A network without edges yields singletons and no merges.
Dendrogram detect(const Network& net, Variant variant,
                  const DetectOptions& options = DetectOptions{});

}  // namespace geocomm
