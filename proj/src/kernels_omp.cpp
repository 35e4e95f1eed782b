#include <algorithm>

#include "kernel_rows.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geocomm::kernels {

void set_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, threads));
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

std::vector<double> pair_distances(const Network& net, std::uint64_t sample_size,
                                   std::uint64_t seed) {
  const std::uint64_t n = net.node_count();
  const std::uint64_t pairs = pair_count(n);
  if (pairs <= sample_size) {
    std::vector<double> out(pairs);
    const auto rows = static_cast<std::int64_t>(n > 0 ? n - 1 : 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t v = 0; v < rows; ++v) {
      detail::pair_row(net, static_cast<NodeIndex>(v),
                       out.data() + detail::row_start(n, static_cast<std::uint64_t>(v)));
    }
    return out;
  }
  std::vector<double> out(sample_size);
  const auto blocks = static_cast<std::int64_t>((sample_size + kSampleBlock - 1) / kSampleBlock);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kSampleBlock;
    detail::sample_block(net, seed, static_cast<std::uint64_t>(b),
                         std::min<std::uint64_t>(kSampleBlock, sample_size - begin),
                         out.data() + begin);
  }
  return out;
}

MassSum edge_mass(std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
                  const EdgeModel& model) {
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<MassSum> rows(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t v = 0; v < n; ++v) {
    rows[static_cast<std::size_t>(v)] =
        detail::mass_row(points, labels, model, static_cast<std::size_t>(v));
  }
  MassSum sum;
  for (const MassSum& row : rows) {
    sum.total += row.total;
    sum.max = std::max(sum.max, row.max);
  }
  return sum;
}

std::vector<std::pair<std::size_t, std::size_t>> draw_edges(
    std::span<const GeoPoint> points, std::span<const std::uint32_t> labels,
    const EdgeModel& model, double alpha, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rows(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t v = 0; v < n; ++v) {
    detail::edge_row(points, labels, model, alpha, seed, static_cast<std::size_t>(v),
                     rows[static_cast<std::size_t>(v)]);
  }
  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(total);
  for (const auto& row : rows) edges.insert(edges.end(), row.begin(), row.end());
  return edges;
}

std::vector<double> cross_sums(const MemberBlock& a, std::span<const MemberBlock* const> others,
                               double sigma, Metric metric) {
  std::vector<double> out(others.size());
  const auto count = static_cast<std::int64_t>(others.size());
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
  for (std::int64_t k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        detail::cross_sum(a, *others[static_cast<std::size_t>(k)], sigma, metric);
  }
  return out;
}

}  // namespace omp
}  // namespace geocomm::kernels
