#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by the library and a plain serial reference kept for tests and the
// benchmark. Both produce bit-identical results for any thread count: work
// is split into fixed blocks (rows, sample blocks, neighbor lists) whose
// partial results are combined in a fixed order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "geocomm/network.hpp"

namespace geocomm::kernels {

/// Samples per RNG block in pair sampling.
inline constexpr std::size_t kSampleBlock = 1 << 16;

/// Structure-of-arrays view of a community's members for pairwise scans.
/// Geodesic blocks hold (longitude, latitude) in radians plus cos(latitude).
struct MemberBlock {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> cos_y;
  std::vector<double> weight;

  std::size_t size() const { return x.size(); }
  void push(const GeoPoint& p, double w, Metric metric);
  void append(const MemberBlock& other);
};

/// Planted-partition edge parameters for the synthetic generator.
struct EdgeModel {
  double p_same = 0.5;
  double p_diff = 0.1;
  /// Distance scale; +inf disables the distance factor.
  double omega = 3.0;

  double base_probability(std::uint32_t label_a, std::uint32_t label_b, double dist) const;
};

struct MassSum {
  double total = 0.0;  // sum over v<w of p_c * exp(-d/omega)
  double max = 0.0;    // largest single-pair value
};

/// Number of unordered pairs n(n-1)/2.
inline std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

namespace serial {

/// All unordered pair distances (row-major v<w) when n(n-1)/2 <= sample_size,
/// otherwise `sample_size` uniformly drawn unordered pairs.
std::vector<double> pair_distances(const Network& net, std::uint64_t sample_size,
                                   std::uint64_t seed);

MassSum edge_mass(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                  const EdgeModel& model);

/// Independent Bernoulli(alpha * base_probability) draw for every pair v<w,
/// using one RNG stream per row.
std::vector<std::pair<std::size_t, std::size_t>> draw_edges(
    std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
    const EdgeModel& model, double alpha, std::uint64_t seed);

/// For each block k: sum over (v in a, w in k) of weight_v * weight_w *
/// exp(-dist(v,w)/sigma). `sigma <= 0` means exp factor 1.
std::vector<double> cross_sums(const MemberBlock& a, std::span<const MemberBlock* const> others,
                               double sigma, Metric metric);

}  // namespace serial

namespace omp {

std::vector<double> pair_distances(const Network& net, std::uint64_t sample_size,
                                   std::uint64_t seed);

MassSum edge_mass(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                  const EdgeModel& model);

std::vector<std::pair<std::size_t, std::size_t>> draw_edges(
    std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
    const EdgeModel& model, double alpha, std::uint64_t seed);

std::vector<double> cross_sums(const MemberBlock& a, std::span<const MemberBlock* const> others,
                               double sigma, Metric metric);

}  // namespace omp

/// Sets the OpenMP worker count (no-op without OpenMP). Values < 1 are
/// treated as 1.
void set_threads(int threads);
int max_threads();

}  // namespace geocomm::kernels
