#pragma once

// Fixtures and independent reference computations shared by the test suites.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "geocomm/modularity.hpp"
#include "geocomm/network.hpp"
#include "geocomm/rng.hpp"

namespace geocomm::testing {

inline std::string node_name(std::size_t i) {
  std::string digits = std::to_string(i);
  return "v" + std::string(4 - std::min<std::size_t>(4, digits.size()), '0') + digits;
}

/// Ids sort in index order, so node i of the result is points[i].
inline Network make_network(const std::vector<GeoPoint>& points,
                            const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                            Metric metric = Metric::kPlanar) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < points.size(); ++i) ids.push_back(node_name(i));
  return Network::build(ids, points, edges, metric);
}

inline Network complete_graph(std::size_t n, double spacing = 1.0) {
  std::vector<GeoPoint> pts;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({spacing * static_cast<double>(i), 0.0});
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return make_network(pts, edges);
}

/// Triangles {0,1,2} and {3,4,5}; `bridge` adds the edge 2-3. Triangle
/// vertices sit near (0,0) and (gap,0).
inline Network two_triangles(double gap, bool bridge, double size = 1.0) {
  std::vector<GeoPoint> pts{{0, 0}, {size, 0}, {0, size}, {gap, 0}, {gap + size, 0},
                            {gap, size}};
  std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 2}, {0, 2},
                                                         {3, 4}, {4, 5}, {3, 5}};
  if (bridge) edges.emplace_back(2, 3);
  return make_network(pts, edges);
}

/// Random points in the unit box with independent edges of probability p.
inline Network random_geometric(Rng& rng, std::size_t n, double p) {
  std::vector<GeoPoint> pts(n);
  for (auto& q : pts) q = {uniform01(rng), uniform01(rng)};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.emplace_back(i, j);
    }
  }
  return make_network(pts, edges);
}

inline Partition random_labels(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint32_t>(uniform_below(rng, k));
  return Partition::from_labels(labels);
}

/// Dense reference: Q = (1/Z) sum_{v,w} [A_vw W_vw - N_vw] delta(c_v, c_w)
/// built directly from adjacency/distance matrices, without WeightContext.
struct DenseOracle {
  std::size_t n = 0;
  std::vector<double> a, l, s, k;
  double two_m = 0.0;

  DenseOracle(const Network& net, double sigma) : n(net.node_count()) {
    a.assign(n * n, 0.0);
    l.assign(n * n, 1.0);
    s.assign(n * n, 0.0);
    k.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (NodeIndex w : net.neighbors(static_cast<NodeIndex>(v))) a[v * n + w] = 1.0;
      k[v] = static_cast<double>(net.degree(static_cast<NodeIndex>(v)));
      two_m += k[v];
    }
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        const GeoPoint& p = net.point(static_cast<NodeIndex>(v));
        const GeoPoint& q = net.point(static_cast<NodeIndex>(w));
        const double d = distance_km(p, q, net.metric());
        if (sigma > 0) l[v * n + w] = std::exp(-d / sigma);
        double common = 0.0;
        for (std::size_t x = 0; x < n; ++x) common += a[v * n + x] * a[w * n + x];
        if (a[v * n + w] > 0) s[v * n + w] = common / std::sqrt(k[v] * k[w]);
      }
    }
  }

  double tau() const {
    double sum = 0.0;
    for (double kv : k) sum += kv * kv;
    return sum / (two_m * two_m);
  }

  /// include_diagonal=false drops v == w terms.
  double q(Variant variant, const Partition& p, bool include_diagonal = true) const {
    double omega = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      if (variant == Variant::kBaseline) omega += a[i];
      if (variant == Variant::kLocality) omega += a[i] * l[i];
      if (variant == Variant::kSimilarity) omega += a[i] * s[i] * l[i];
    }
    const double t = tau();
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (!include_diagonal && v == w) continue;
        if (p.label(static_cast<NodeIndex>(v)) != p.label(static_cast<NodeIndex>(w))) continue;
        const std::size_t i = v * n + w;
        const double kk = k[v] * k[w];
        switch (variant) {
          case Variant::kBaseline: sum += a[i] - kk / two_m; break;
          case Variant::kLocality: sum += a[i] * l[i] - kk / two_m * l[i]; break;
          case Variant::kSimilarity:
            sum += a[i] * s[i] * l[i] - l[i] * kk / two_m * t * std::sqrt(kk);
            break;
        }
      }
    }
    if (variant == Variant::kSimilarity) return sum / (2.0 * omega);
    return sum / omega;
  }
};

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("geocomm_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
}

}  // namespace geocomm::testing
