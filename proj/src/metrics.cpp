#include "geocomm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "geocomm/error.hpp"
#include "geocomm/rng.hpp"

namespace geocomm {

GeoPoint centroid(const Network& net, std::span<const NodeIndex> members) {
  if (members.empty()) throw InputError("centroid of an empty community");
  const double count = static_cast<double>(members.size());
  GeoPoint c;
  if (net.metric() == Metric::kPlanar) {
    for (NodeIndex v : members) {
      c.x += net.point(v).x;
      c.y += net.point(v).y;
    }
    c.x /= count;
    c.y /= count;
    return c;
  }
  const double ref = net.point(members.front()).x;
  for (NodeIndex v : members) {
    double lon = net.point(v).x;
    while (lon - ref > 180.0) lon -= 360.0;
    while (lon - ref < -180.0) lon += 360.0;
    c.x += lon;
    c.y += net.point(v).y;
  }
  c.x /= count;
  c.y /= count;
  while (c.x > 180.0) c.x -= 360.0;
  while (c.x < -180.0) c.x += 360.0;
  return c;
}

double geographic_span(const Network& net, std::span<const NodeIndex> members) {
  const GeoPoint c = centroid(net, members);
  double total = 0.0;
  for (NodeIndex v : members) total += distance_km(net.point(v), c, net.metric());
  return total / static_cast<double>(members.size());
}

double average_internal_degree(const Network& net, const Partition& p, CommunityId c) {
  if (c >= p.community_count()) throw InputError("no such community");
  const auto members = p.members(c);
  std::size_t internal = 0;
  for (NodeIndex v : members) {
    for (NodeIndex w : net.neighbors(v)) {
      if (p.label(w) == c) ++internal;
    }
  }
  return static_cast<double>(internal) / static_cast<double>(members.size());
}

std::vector<CommunityScore> score_communities(const Network& net, const Partition& p) {
  std::vector<CommunityScore> out(p.community_count());
  for (CommunityId c = 0; c < p.community_count(); ++c) {
    auto& s = out[c];
    s.community = c;
    s.size = p.members(c).size();
    s.centroid = centroid(net, p.members(c));
    s.span_km = geographic_span(net, p.members(c));
    s.avg_internal_degree = average_internal_degree(net, p, c);
  }
  return out;
}

// Hungarian algorithm (shortest augmenting path with potentials) on the
// negated weights, iterating over the smaller side.
std::vector<std::int64_t> max_weight_assignment(std::span<const double> weights, std::size_t rows,
                                                std::size_t cols) {
  if (weights.size() != rows * cols) throw std::invalid_argument("weight matrix size mismatch");
  std::vector<std::int64_t> result(rows, -1);
  if (rows == 0 || cols == 0) return result;

  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;  // left side, n <= m
  const std::size_t m = transposed ? rows : cols;
  const auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -weights[j * cols + i] : -weights[i * cols + j];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0);  // column -> row (1-based), 0 = free
  std::vector<std::size_t> way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    const std::size_t i = match[j] - 1;
    if (transposed) {
      result[j - 1] = static_cast<std::int64_t>(i);
    } else {
      result[i] = static_cast<std::int64_t>(j - 1);
    }
  }
  return result;
}

double accuracy(const Partition& p, std::span<const std::uint32_t> truth) {
  if (truth.size() != p.node_count()) {
    throw InputError("label count does not match node count");
  }
  if (truth.empty()) return 100.0;
  const auto truth_p = Partition::from_labels(truth);
  const std::size_t rows = p.community_count();
  const std::size_t cols = truth_p.community_count();
  std::vector<double> contingency(rows * cols, 0.0);
  for (NodeIndex v = 0; v < truth.size(); ++v) {
    contingency[p.label(v) * cols + truth_p.label(v)] += 1.0;
  }
  const auto assignment = max_weight_assignment(contingency, rows, cols);
  double matched = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (assignment[r] >= 0) matched += contingency[r * cols + static_cast<std::size_t>(assignment[r])];
  }
  return 100.0 * matched / static_cast<double>(truth.size());
}

Partition random_partition(const Network& net, std::size_t community_count, std::uint64_t seed) {
  if (community_count == 0) throw InputError("community count must be positive");
  Rng rng = make_stream(seed, 0);
  std::vector<std::uint32_t> labels(net.node_count());
  for (auto& label : labels) label = static_cast<std::uint32_t>(uniform_below(rng, community_count));
  return Partition::from_labels(labels);
}

std::vector<SizeBucket> size_profile(std::span<const CommunityScore> scores) {
  std::map<std::size_t, SizeBucket> buckets;
  for (const auto& s : scores) {
    auto& b = buckets[s.size];
    b.size = s.size;
    ++b.communities;
    b.mean_span_km += s.span_km;
    b.mean_internal_degree += s.avg_internal_degree;
  }
  std::vector<SizeBucket> out;
  out.reserve(buckets.size());
  for (auto& [size, b] : buckets) {
    b.mean_span_km /= static_cast<double>(b.communities);
    b.mean_internal_degree /= static_cast<double>(b.communities);
    out.push_back(b);
  }
  return out;
}

std::vector<SizeBucket> size_profile(const Network& net, const Partition& p) {
  const auto scores = score_communities(net, p);
  return size_profile(scores);
}

}  // namespace geocomm
