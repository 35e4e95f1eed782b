#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "geocomm/network.hpp"

namespace geocomm {

/// Planted-partition network on an integer lattice. Edge probability for a
/// pair is alpha * p_c * exp(-dist / omega), with p_c = p_same for equal
/// labels and p_diff otherwise; alpha is solved from target_avg_degree.
struct SynthConfig {
  std::size_t grid_side = 50;
  /// 0 means grid_side^2. Cells are filled row-major.
  std::size_t node_count = 0;
  std::size_t label_count = 10;
  double omega = 3.0;  // +inf: no distance effect
  double p_same = 0.5;
  double p_diff = 0.1;
  double target_avg_degree = 15.0;
  std::uint64_t seed = 1;

  std::size_t nodes() const { return node_count == 0 ? grid_side * grid_side : node_count; }
  /// Throws InputError when any field is out of range.
  void validate() const;
};

inline constexpr double kInfiniteOmega = std::numeric_limits<double>::infinity();

struct SynthNetwork {
  Network network;
  /// Ground-truth label per node index.
  std::vector<std::uint32_t> true_labels;
  double alpha = 0.0;
};

/// Lattice coordinates of the configured nodes, row-major.
std::vector<GeoPoint> lattice_points(const SynthConfig& cfg);

/// Uniform seeded label assignment.
std::vector<std::uint32_t> assign_labels(const SynthConfig& cfg);

/// Expected average degree is linear in alpha below the clipping point, so
/// alpha = target / (2/n * sum_{v<w} p_c e^{-d/omega}). Throws
/// InfeasibleError when that alpha would push some pair probability above 1.
double calibrate_alpha(const SynthConfig& cfg, const std::vector<GeoPoint>& points,
                       const std::vector<std::uint32_t>& labels);

SynthNetwork generate(const SynthConfig& cfg);

/// Zero-padded ids so lexicographic order matches lattice order.
std::string synth_node_id(std::size_t index, std::size_t node_count);

/// Writes edges.tsv, locations.tsv and labels.tsv into `dir`, each with the
/// configuration echoed as '#' key=value header lines.
void write_synth_files(const SynthNetwork& synth, const SynthConfig& cfg,
                       const std::filesystem::path& dir);

std::string format_omega(double omega);
double parse_omega(const std::string& text);

}  // namespace geocomm
