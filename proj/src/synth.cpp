#include "geocomm/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "geocomm/error.hpp"
#include "geocomm/kernels.hpp"
#include "geocomm/rng.hpp"

namespace geocomm {
namespace {

// Stream indices kept apart from the per-row edge streams.
constexpr std::uint64_t kLabelStream = 0xA5A5'0000'0000'0001ULL;
constexpr std::uint64_t kEdgeSeedSalt = 0x5EED'0000'0000'0002ULL;

kernels::EdgeModel edge_model(const SynthConfig& cfg) {
  return kernels::EdgeModel{cfg.p_same, cfg.p_diff, cfg.omega};
}

std::string config_header(const SynthConfig& cfg, double alpha) {
  std::ostringstream out;
  out.precision(17);
  out << "# grid_side=" << cfg.grid_side << '\n'
      << "# node_count=" << cfg.nodes() << '\n'
      << "# label_count=" << cfg.label_count << '\n'
      << "# omega=" << format_omega(cfg.omega) << '\n'
      << "# p_same=" << cfg.p_same << '\n'
      << "# p_diff=" << cfg.p_diff << '\n'
      << "# target_avg_degree=" << cfg.target_avg_degree << '\n'
      << "# alpha=" << alpha << '\n'
      << "# seed=" << cfg.seed << '\n';
  return out.str();
}

}  // namespace

void SynthConfig::validate() const {
  if (grid_side == 0) throw InputError("grid side must be positive");
  if (node_count > grid_side * grid_side) throw InputError("more nodes than grid cells");
  if (nodes() < 2) throw InputError("need at least two nodes");
  if (label_count == 0) throw InputError("label count must be positive");
  if (!(p_diff > 0.0 && p_diff < p_same && p_same <= 1.0)) {
    throw InputError("probabilities must satisfy 0 < p_diff < p_same <= 1");
  }
  if (!(omega > 0.0)) throw InputError("omega must be positive or inf");
  if (!(target_avg_degree >= 0.0) || !std::isfinite(target_avg_degree)) {
    throw InputError("target average degree must be finite and non-negative");
  }
}

std::vector<GeoPoint> lattice_points(const SynthConfig& cfg) {
  std::vector<GeoPoint> points;
  points.reserve(cfg.nodes());
  for (std::size_t i = 0; i < cfg.nodes(); ++i) {
    points.push_back({static_cast<double>(i % cfg.grid_side),
                      static_cast<double>(i / cfg.grid_side)});
  }
  return points;
}

std::vector<std::uint32_t> assign_labels(const SynthConfig& cfg) {
  Rng rng = make_stream(cfg.seed, kLabelStream);
  std::vector<std::uint32_t> labels(cfg.nodes());
  for (auto& label : labels) {
    label = static_cast<std::uint32_t>(uniform_below(rng, cfg.label_count));
  }
  return labels;
}

double calibrate_alpha(const SynthConfig& cfg, const std::vector<GeoPoint>& points,
                       const std::vector<std::uint32_t>& labels) {
  if (cfg.target_avg_degree == 0.0) return 0.0;
  const auto mass = kernels::omp::edge_mass(points, labels, edge_model(cfg));
  const double per_alpha = 2.0 * mass.total / static_cast<double>(points.size());
  const double alpha = cfg.target_avg_degree / per_alpha;
  if (!(per_alpha > 0.0) || alpha * mass.max > 1.0) {
    std::ostringstream msg;
    msg << "target average degree " << cfg.target_avg_degree
        << " is unreachable: the largest pair probability would exceed 1 (max reachable "
        << (mass.max > 0.0 ? per_alpha / mass.max : 0.0) << ")";
    throw InfeasibleError(msg.str());
  }
  return alpha;
}

std::string synth_node_id(std::size_t index, std::size_t node_count) {
  const std::size_t width = std::to_string(node_count > 0 ? node_count - 1 : 0).size();
  std::string digits = std::to_string(index);
  return "n" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

SynthNetwork generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto points = lattice_points(cfg);
  auto labels = assign_labels(cfg);
  const double alpha = calibrate_alpha(cfg, points, labels);
  const auto edges = kernels::omp::draw_edges(points, labels, edge_model(cfg), alpha,
                                              mix_seed(cfg.seed, kEdgeSeedSalt));
  std::vector<std::string> ids;
  ids.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) ids.push_back(synth_node_id(i, points.size()));
  SynthNetwork out;
  // Ids sort in lattice order, so node index == lattice index.
  out.network = Network::build(std::move(ids), points, edges, Metric::kPlanar);
  out.true_labels = std::move(labels);
  out.alpha = alpha;
  return out;
}

void write_synth_files(const SynthNetwork& synth, const SynthConfig& cfg,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string header = config_header(cfg, synth.alpha);
  const Network& net = synth.network;
  const auto open = [&dir](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("edges.tsv");
    out << header;
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      for (NodeIndex w : net.neighbors(v)) {
        if (v < w) out << net.id(v) << '\t' << net.id(w) << '\n';
      }
    }
  }
  {
    auto out = open("locations.tsv");
    out << header;
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      out << net.id(v) << '\t' << net.point(v).x << '\t' << net.point(v).y << '\n';
    }
  }
  {
    auto out = open("labels.tsv");
    out << header;
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      out << net.id(v) << '\t' << synth.true_labels[v] << '\n';
    }
  }
}

std::string format_omega(double omega) {
  if (std::isinf(omega)) return "inf";
  std::ostringstream out;
  out << omega;
  return out.str();
}

double parse_omega(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return kInfiniteOmega;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw InputError("bad omega '" + text + "'");
    return value;
  } catch (const std::logic_error&) {
    throw InputError("bad omega '" + text + "'");
  }
}

}  // namespace geocomm
