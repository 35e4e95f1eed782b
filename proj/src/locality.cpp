#include "geocomm/locality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "geocomm/error.hpp"
#include "geocomm/kernels.hpp"

namespace geocomm {
namespace {

// Value at quantile q (0..1) of a sorted sample, nearest-rank.
double quantile(std::span<const double> sorted, double q) {
  const auto last = sorted.size() - 1;
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(last)));
  return sorted[std::min(idx, last)];
}

void append_log_grid(std::vector<double> sample, std::size_t points, std::vector<double>& grid) {
  if (sample.empty()) return;
  std::sort(sample.begin(), sample.end());
  double lo = quantile(sample, 0.001);
  const double hi = sample.back();
  if (lo <= 0.0) {
    const auto pos = std::upper_bound(sample.begin(), sample.end(), 0.0);
    if (pos == sample.end()) {
      grid.push_back(0.0);
      return;
    }
    lo = *pos;
    // zero distances still need a breakpoint of their own
    grid.push_back(0.0);
  }
  if (points < 2 || lo >= hi) {
    grid.push_back(hi);
    return;
  }
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i + 1 < points; ++i) {
    grid.push_back(lo * std::exp(step * static_cast<double>(i)));
  }
  grid.push_back(hi);
}

}  // namespace

EmpiricalCdf empirical_cdf(std::span<const double> sample, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty CDF grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("CDF grid not strictly increasing");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  EmpiricalCdf cdf;
  cdf.grid.assign(grid.begin(), grid.end());
  cdf.sample_count = sorted.size();
  cdf.values.reserve(grid.size());
  const auto total = static_cast<double>(sorted.size());
  for (double g : grid) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), g) - sorted.begin();
    cdf.values.push_back(total > 0 ? static_cast<double>(below) / total : 0.0);
  }
  return cdf;
}

std::vector<double> pair_distance_sample(const Network& net, std::uint64_t sample_size,
                                         std::uint64_t seed) {
  if (net.node_count() < 2) throw InputError("pair distances need at least two nodes");
  if (sample_size == 0) throw std::invalid_argument("sample size must be positive");
  return kernels::omp::pair_distances(net, sample_size, seed);
}

std::vector<double> edge_distances(const Network& net) {
  std::vector<double> out;
  out.reserve(net.edge_count());
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    for (NodeIndex w : net.neighbors(v)) {
      if (v < w) out.push_back(distance(net, v, w));
    }
  }
  return out;
}

EmpiricalCdf all_pairs_cdf(const Network& net, std::uint64_t sample_size, std::uint64_t seed,
                           std::span<const double> grid) {
  return empirical_cdf(pair_distance_sample(net, sample_size, seed), grid);
}

EmpiricalCdf connected_pairs_cdf(const Network& net, std::span<const double> grid) {
  if (net.edge_count() == 0) throw InputError("connected-pair CDF needs at least one edge");
  return empirical_cdf(edge_distances(net), grid);
}

double mean_pair_distance(const Network& net, std::uint64_t sample_size, std::uint64_t seed) {
  const auto sample = pair_distance_sample(net, sample_size, seed);
  double total = 0.0;
  for (double d : sample) total += d;
  return total / static_cast<double>(sample.size());
}

std::vector<double> locality_grid(std::span<const double> edge_dist,
                                  std::span<const double> pair_dist, std::size_t points) {
  std::vector<double> grid;
  append_log_grid({edge_dist.begin(), edge_dist.end()}, points, grid);
  append_log_grid({pair_dist.begin(), pair_dist.end()}, points, grid);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

LocalityReport locality_report(const Network& net, std::uint64_t sample_size,
                               std::uint64_t seed) {
  if (net.edge_count() == 0) throw InputError("locality report needs at least one edge");
  const auto pairs = pair_distance_sample(net, sample_size, seed);
  const auto edges = edge_distances(net);
  const auto grid = locality_grid(edges, pairs);

  LocalityReport report;
  report.f_all = empirical_cdf(pairs, grid);
  report.f_connected = empirical_cdf(edges, grid);
  report.pair_sample_size = pairs.size();
  report.rng_seed = seed;
  report.exhaustive = kernels::pair_count(net.node_count()) <= sample_size;

  double total = 0.0;
  for (double d : pairs) total += d;
  report.sigma_km = total / static_cast<double>(pairs.size());

  report.tvd = report.f_connected.values[0] - report.f_all.values[0];
  report.inflection_km = grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double diff = report.f_connected.values[i] - report.f_all.values[i];
    if (diff > report.tvd) {
      report.tvd = diff;
      report.inflection_km = grid[i];
    }
  }
  report.suitable = report.tvd > kSuitableTvd;
  return report;
}

void write_locality_report(std::ostream& out, const LocalityReport& report) {
  out.precision(17);
  out << "tvd=" << report.tvd << '\n'
      << "inflection_km=" << report.inflection_km << '\n'
      << "sigma_km=" << report.sigma_km << '\n'
      << "suitable=" << (report.suitable ? "true" : "false") << '\n'
      << "degenerate=" << (report.degenerate() ? "true" : "false") << '\n'
      << "pair_sample_size=" << report.pair_sample_size << '\n'
      << "exhaustive=" << (report.exhaustive ? "true" : "false") << '\n'
      << "rng_seed=" << report.rng_seed << '\n'
      << "edge_count=" << report.f_connected.sample_count << '\n';
  const auto block = [&out](const char* name, const EmpiricalCdf& cdf) {
    out << "\n# " << name << '\n' << "grid,value\n";
    for (std::size_t i = 0; i < cdf.grid.size(); ++i) {
      out << cdf.grid[i] << ',' << cdf.values[i] << '\n';
    }
  };
  block("F_all", report.f_all);
  block("F_connected", report.f_connected);
}

}  // namespace geocomm
