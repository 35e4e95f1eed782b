#pragma once

// Per-row / per-block bodies shared by the serial and OpenMP kernels, so the
// two differ only in loop scheduling.

#include <cmath>

#include "geocomm/kernels.hpp"
#include "geocomm/rng.hpp"

namespace geocomm::kernels::detail {

inline double planar(double ax, double ay, double bx, double by) {
  const double dx = ax - bx;
  const double dy = ay - by;
  return std::sqrt(dx * dx + dy * dy);
}

/// First output position of row v in the row-major v<w enumeration.
inline std::uint64_t row_start(std::uint64_t n, std::uint64_t v) {
  return v * n - v * (v + 1) / 2;
}

inline void pair_row(const Network& net, NodeIndex v, double* out) {
  const auto n = static_cast<NodeIndex>(net.node_count());
  for (NodeIndex w = v + 1; w < n; ++w) *out++ = distance(net, v, w);
}

inline void sample_block(const Network& net, std::uint64_t seed, std::uint64_t block,
                         std::uint64_t count, double* out) {
  Rng rng = make_stream(seed, block);
  const std::uint64_t n = net.node_count();
  for (std::uint64_t s = 0; s < count; ++s) {
    const auto v = static_cast<NodeIndex>(uniform_below(rng, n));
    auto w = static_cast<NodeIndex>(uniform_below(rng, n - 1));
    if (w >= v) ++w;
    out[s] = distance(net, v, w);
  }
}

inline MassSum mass_row(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                        const EdgeModel& model, std::size_t v) {
  MassSum row;
  for (std::size_t w = v + 1; w < points.size(); ++w) {
    const double p = model.base_probability(
        labels[v], labels[w], planar(points[v].x, points[v].y, points[w].x, points[w].y));
    row.total += p;
    if (p > row.max) row.max = p;
  }
  return row;
}

inline void edge_row(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                     const EdgeModel& model, double alpha, std::uint64_t seed, std::size_t v,
                     std::vector<std::pair<std::size_t, std::size_t>>& out) {
  Rng rng = make_stream(seed, v);
  for (std::size_t w = v + 1; w < points.size(); ++w) {
    const double p = alpha * model.base_probability(
        labels[v], labels[w], planar(points[v].x, points[v].y, points[w].x, points[w].y));
    if (uniform01(rng) < p) out.emplace_back(v, w);
  }
}

inline double cross_sum(const MemberBlock& a, const MemberBlock& b, double sigma,
                        Metric metric) {
  double total = 0.0;
  if (sigma <= 0.0) {
    double wa = 0.0;
    double wb = 0.0;
    for (double w : a.weight) wa += w;
    for (double w : b.weight) wb += w;
    return wa * wb;
  }
  const double inv_sigma = 1.0 / sigma;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    if (metric == Metric::kPlanar) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        row += b.weight[j] * std::exp(-planar(a.x[i], a.y[i], b.x[j], b.y[j]) * inv_sigma);
      }
    } else {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double s_lat = std::sin((b.y[j] - a.y[i]) / 2.0);
        const double s_lon = std::sin((b.x[j] - a.x[i]) / 2.0);
        const double h = s_lat * s_lat + a.cos_y[i] * b.cos_y[j] * s_lon * s_lon;
        const double d = 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
        row += b.weight[j] * std::exp(-d * inv_sigma);
      }
    }
    total += a.weight[i] * row;
  }
  return total;
}

}  // namespace geocomm::kernels::detail
