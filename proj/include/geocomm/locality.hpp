#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "geocomm/network.hpp"

namespace geocomm {

inline constexpr std::uint64_t kDefaultPairSample = 2'000'000;
inline constexpr std::size_t kLocalityGridPoints = 512;
inline constexpr double kSuitableTvd = 0.25;

/// Empirical CDF of a distance sample evaluated at fixed breakpoints.
struct EmpiricalCdf {
  std::vector<double> grid;
  std::vector<double> values;
  std::uint64_t sample_count = 0;
};

/// Evaluates the empirical CDF of `sample` on `grid` (non-empty, strictly
/// increasing). Throws std::invalid_argument on a bad grid.
EmpiricalCdf empirical_cdf(std::span<const double> sample, std::span<const double> grid);

/// Distances of a seeded pair sample (or all pairs when n(n-1)/2 <= sample_size).
/// Throws InputError for fewer than two nodes.
std::vector<double> pair_distance_sample(const Network& net, std::uint64_t sample_size,
                                         std::uint64_t seed);

/// One distance per undirected edge.
std::vector<double> edge_distances(const Network& net);

EmpiricalCdf all_pairs_cdf(const Network& net, std::uint64_t sample_size, std::uint64_t seed,
                           std::span<const double> grid);
EmpiricalCdf connected_pairs_cdf(const Network& net, std::span<const double> grid);

/// Mean pair distance; 0 means every node shares one location.
double mean_pair_distance(const Network& net, std::uint64_t sample_size, std::uint64_t seed);

/// Log-spaced breakpoints between the 0.1th and 100th percentile of each
/// sample, merged into one strictly increasing grid.
std::vector<double> locality_grid(std::span<const double> edge_dist,
                                  std::span<const double> pair_dist,
                                  std::size_t points = kLocalityGridPoints);

struct LocalityReport {
  double tvd = 0.0;
  double inflection_km = 0.0;
  double sigma_km = 0.0;
  EmpiricalCdf f_all;
  EmpiricalCdf f_connected;
  bool suitable = false;
  std::uint64_t pair_sample_size = 0;
  std::uint64_t rng_seed = 0;
  bool exhaustive = false;

  bool degenerate() const { return sigma_km == 0.0; }
};

LocalityReport locality_report(const Network& net, std::uint64_t sample_size = kDefaultPairSample,
                               std::uint64_t seed = 1);

/// Key-value lines followed by two "grid,value" CSV blocks.
void write_locality_report(std::ostream& out, const LocalityReport& report);

}  // namespace geocomm
