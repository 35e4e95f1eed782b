#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geocomm/modularity.hpp"
#include "geocomm/network.hpp"

namespace geocomm {

struct CommunityScore {
  CommunityId community = 0;
  std::size_t size = 0;
  double span_km = 0.0;
  double avg_internal_degree = 0.0;
  GeoPoint centroid;
};

/// Centroid of a member set. Geo mode averages longitudes after unwrapping
/// them around the first member so communities straddling the antimeridian
/// stay together.
GeoPoint centroid(const Network& net, std::span<const NodeIndex> members);

/// Mean member distance to the centroid. Throws InputError on an empty list.
double geographic_span(const Network& net, std::span<const NodeIndex> members);

/// Mean number of same-community neighbors over the members of c.
double average_internal_degree(const Network& net, const Partition& p, CommunityId c);

std::vector<CommunityScore> score_communities(const Network& net, const Partition& p);

/// Maximum-weight one-to-one assignment of rows to columns of a non-negative
/// weight matrix (row-major, rows x cols). Returns for every row the assigned
/// column or -1.
std::vector<std::int64_t> max_weight_assignment(std::span<const double> weights, std::size_t rows,
                                                std::size_t cols);

/// Percentage of nodes covered by the best one-to-one matching between
/// detected communities and true labels. Throws InputError on a size mismatch.
double accuracy(const Partition& p, std::span<const std::uint32_t> truth);

/// Independent uniform labels in 0..community_count-1, then compacted.
Partition random_partition(const Network& net, std::size_t community_count, std::uint64_t seed);

struct SizeBucket {
  std::size_t size = 0;
  std::size_t communities = 0;
  double mean_span_km = 0.0;
  double mean_internal_degree = 0.0;
};

/// Communities grouped by exact size, ascending.
std::vector<SizeBucket> size_profile(std::span<const CommunityScore> scores);
std::vector<SizeBucket> size_profile(const Network& net, const Partition& p);

}  // namespace geocomm
