#include <algorithm>
#include <cmath>
#include <numbers>

#include "kernel_rows.hpp"

namespace geocomm::kernels {

void MemberBlock::push(const GeoPoint& p, double w, Metric metric) {
  if (metric == Metric::kPlanar) {
    x.push_back(p.x);
    y.push_back(p.y);
    cos_y.push_back(1.0);
  } else {
    constexpr double kDegToRad = std::numbers::pi / 180.0;
    x.push_back(p.x * kDegToRad);
    y.push_back(p.y * kDegToRad);
    cos_y.push_back(std::cos(p.y * kDegToRad));
  }
  weight.push_back(w);
}

void MemberBlock::append(const MemberBlock& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
  cos_y.insert(cos_y.end(), other.cos_y.begin(), other.cos_y.end());
  weight.insert(weight.end(), other.weight.begin(), other.weight.end());
}

double EdgeModel::base_probability(std::uint32_t label_a, std::uint32_t label_b,
                                   double dist) const {
  const double pc = label_a == label_b ? p_same : p_diff;
  if (std::isinf(omega)) return pc;
  return pc * std::exp(-dist / omega);
}

namespace serial {

std::vector<double> pair_distances(const Network& net, std::uint64_t sample_size,
                                   std::uint64_t seed) {
  const std::uint64_t n = net.node_count();
  const std::uint64_t pairs = pair_count(n);
  if (pairs <= sample_size) {
    std::vector<double> out(pairs);
    for (NodeIndex v = 0; v + 1 < n; ++v) {
      detail::pair_row(net, v, out.data() + detail::row_start(n, v));
    }
    return out;
  }
  std::vector<double> out(sample_size);
  const std::uint64_t blocks = (sample_size + kSampleBlock - 1) / kSampleBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t begin = b * kSampleBlock;
    detail::sample_block(net, seed, b, std::min<std::uint64_t>(kSampleBlock, sample_size - begin),
                         out.data() + begin);
  }
  return out;
}

MassSum edge_mass(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                  const EdgeModel& model) {
  MassSum sum;
  for (std::size_t v = 0; v < points.size(); ++v) {
    const MassSum row = detail::mass_row(points, labels, model, v);
    sum.total += row.total;
    sum.max = std::max(sum.max, row.max);
  }
  return sum;
}

std::vector<std::pair<std::size_t, std::size_t>> draw_edges(
    std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
    const EdgeModel& model, double alpha, std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < points.size(); ++v) {
    detail::edge_row(points, labels, model, alpha, seed, v, edges);
  }
  return edges;
}

std::vector<double> cross_sums(const MemberBlock& a, std::span<const MemberBlock* const> others,
                               double sigma, Metric metric) {
  std::vector<double> out(others.size());
  for (std::size_t k = 0; k < others.size(); ++k) {
    out[k] = detail::cross_sum(a, *others[k], sigma, metric);
  }
  return out;
}

}  // namespace serial
}  // namespace geocomm::kernels
