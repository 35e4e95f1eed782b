#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geocomm/network.hpp"

namespace geocomm {

using CommunityId = std::uint32_t;

/// Node-to-community assignment with dense community ids.
class Partition {
 public:
  Partition() = default;

  /// Relabels arbitrary labels to 0..k-1 in order of first appearance.
  static Partition from_labels(std::span<const std::uint32_t> labels);
  static Partition singletons(std::size_t n);
  static Partition single_community(std::size_t n);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t community_count() const { return members_.size(); }
  CommunityId label(NodeIndex v) const { return labels_[v]; }
  std::span<const CommunityId> labels() const { return labels_; }
  std::span<const NodeIndex> members(CommunityId c) const { return members_[c]; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> labels_;
  std::vector<std::vector<NodeIndex>> members_;
};

enum class Variant { kBaseline, kLocality, kSimilarity };

Variant parse_variant(const std::string& name);
const char* variant_name(Variant variant);

/// L = exp(-dis/sigma). Throws std::invalid_argument unless sigma > 0 and
/// dis >= 0.
double connection_locality(double dis_km, double sigma_km);

/// |N(v) ∩ N(w)| / sqrt(k_v k_w). Throws std::logic_error on a zero-degree
/// endpoint.
double node_similarity(const Network& net, NodeIndex v, NodeIndex w);

/// Edge weights and normalizers for one modularity variant on one network.
///
/// omega sums over ordered pairs: 2m for the baseline, sum A*L for the
/// locality variant, sum A*S*L for the similarity variant. With sigma == 0
/// (all nodes coincide) L is identically 1.
class WeightContext {
 public:
  /// Throws InputError on an edgeless network and InfeasibleError when the
  /// similarity variant has omega == 0 (no edge closes a triangle).
  static WeightContext build(const Network& net, Variant variant, double sigma_km);

  Variant variant() const { return variant_; }
  double sigma_km() const { return sigma_km_; }
  double omega() const { return omega_; }
  double tau() const { return tau_; }
  double two_m() const { return two_m_; }
  /// True when every L is 1 (baseline, or all nodes at one location).
  bool unit_locality() const { return variant_ == Variant::kBaseline || sigma_km_ == 0.0; }

  /// L for an arbitrary distance under this context.
  double locality(double dis_km) const;
  double locality_between(const Network& net, NodeIndex v, NodeIndex w) const;

  /// Cached per-edge values, indexed by adjacency slot.
  double edge_locality(std::size_t slot) const { return edge_l_[slot]; }
  double edge_similarity(std::size_t slot) const { return edge_s_[slot]; }

 private:
  Variant variant_ = Variant::kBaseline;
  double sigma_km_ = 0.0;
  double omega_ = 0.0;
  double tau_ = 0.0;
  double two_m_ = 0.0;
  std::vector<double> edge_l_;
  std::vector<double> edge_s_;
};

// From-scratch evaluators. Each sums over all ordered node pairs (v, w),
// including v == w, exactly as the modularity definitions are written. They
// are O(n^2) and serve as reference oracles.

double q_baseline(const Network& net, const Partition& p);
double c_g(const Network& net, const WeightContext& ctx, const Partition& p);
double p_g(const Network& net, const WeightContext& ctx, const Partition& p);
double q_locality(const Network& net, const WeightContext& ctx, const Partition& p);
double q_similarity(const Network& net, const WeightContext& ctx, const Partition& p);

/// Brute-force evaluator matching ctx.variant().
double q_oracle(const Network& net, const WeightContext& ctx, const Partition& p);

/// Same value as q_oracle, restricted to pairs inside a community: O(sum |c|^2)
/// and parallel over communities.
double modularity(const Network& net, const WeightContext& ctx, const Partition& p);

}  // namespace geocomm
