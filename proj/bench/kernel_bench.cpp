// Times each kernel in its serial and OpenMP form on a synthetic lattice.
//
//   geocomm_bench [nodes] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "geocomm/kernels.hpp"
#include "geocomm/synth.hpp"

namespace k = geocomm::kernels;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const char* name, double serial_s, double omp_s, bool same) {
  std::printf("%-16s %10.4f %10.4f %8.2fx %s\n", name, serial_s, omp_s, serial_s / omp_s,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t nodes = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 10000;
  const int threads = argc > 2 ? std::atoi(argv[2]) : 0;
  if (threads > 0) k::set_threads(threads);

  geocomm::SynthConfig cfg;
  cfg.grid_side = 1;
  while (cfg.grid_side * cfg.grid_side < nodes) ++cfg.grid_side;
  cfg.node_count = nodes;
  const auto synth = geocomm::generate(cfg);
  const auto points = geocomm::lattice_points(cfg);
  const auto labels = geocomm::assign_labels(cfg);
  const k::EdgeModel model{cfg.p_same, cfg.p_diff, cfg.omega};

  std::printf("nodes=%zu edges=%zu threads=%d\n", nodes, synth.network.edge_count(),
              k::max_threads());
  std::printf("%-16s %10s %10s %9s\n", "kernel", "serial_s", "omp_s", "speedup");

  {
    std::vector<double> a, b;
    const double s = best_of(3, [&] { a = k::serial::pair_distances(synth.network, 2'000'000, 1); });
    const double o = best_of(3, [&] { b = k::omp::pair_distances(synth.network, 2'000'000, 1); });
    report("pair_distances", s, o, a == b);
  }
  {
    k::MassSum a, b;
    const double s = best_of(3, [&] { a = k::serial::edge_mass(points, labels, model); });
    const double o = best_of(3, [&] { b = k::omp::edge_mass(points, labels, model); });
    report("edge_mass", s, o, a.total == b.total && a.max == b.max);
  }
  {
    std::vector<std::pair<std::size_t, std::size_t>> a, b;
    const double s = best_of(3, [&] { a = k::serial::draw_edges(points, labels, model, synth.alpha, 7); });
    const double o = best_of(3, [&] { b = k::omp::draw_edges(points, labels, model, synth.alpha, 7); });
    report("draw_edges", s, o, a == b);
  }
  {
    // One large block against many small ones, as in a late merge step.
    k::MemberBlock big;
    std::vector<k::MemberBlock> small(256);
    for (std::size_t v = 0; v < points.size(); ++v) {
      if (v % 4 == 0) {
        big.push(points[v], 1.0 + static_cast<double>(v % 7), geocomm::Metric::kPlanar);
      } else {
        small[v % small.size()].push(points[v], 1.0, geocomm::Metric::kPlanar);
      }
    }
    std::vector<const k::MemberBlock*> others;
    for (const auto& b : small) others.push_back(&b);
    std::vector<double> a, b;
    const double s = best_of(3, [&] { a = k::serial::cross_sums(big, others, 3.0, geocomm::Metric::kPlanar); });
    const double o = best_of(3, [&] { b = k::omp::cross_sums(big, others, 3.0, geocomm::Metric::kPlanar); });
    report("cross_sums", s, o, a == b);
  }
  return 0;
}
