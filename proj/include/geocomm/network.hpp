#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace geocomm {

using NodeIndex = std::uint32_t;

/// Planar coordinates are kilometres; geo coordinates are (longitude, latitude)
/// in degrees.
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class Metric { kPlanar, kGeodesic };

inline constexpr double kEarthRadiusKm = 6371.0;

/// Distance in kilometres between two points under the given metric.
/// Geodesic distances use the haversine formula.
double distance_km(const GeoPoint& a, const GeoPoint& b, Metric metric);

struct LoadDiagnostics {
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_duplicates = 0;
  std::size_t isolated_nodes = 0;
};

/// Immutable undirected location-tagged graph in compressed adjacency form.
///
/// Nodes are indexed densely in lexicographic order of their external ids.
/// Adjacency lists are sorted, free of self-loops and duplicates, and
/// symmetric.
class Network {
 public:
  Network() = default;

  /// Builds a network from external ids, locations, and an edge list over
  /// positions in `ids`. Self-loops and duplicate edges are dropped and
  /// counted in `diag` when given. Throws InputError on duplicate ids,
  /// non-finite coordinates, out-of-range geo coordinates, or bad endpoints.
  static Network build(std::vector<std::string> ids, std::vector<GeoPoint> points,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       Metric metric, LoadDiagnostics* diag = nullptr);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  Metric metric() const { return metric_; }

  std::span<const NodeIndex> neighbors(NodeIndex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Offset of v's adjacency block in the flat neighbor array; per-edge data
  /// aligned with that array is indexed by `adjacency_offset(v) + k`.
  std::size_t adjacency_offset(NodeIndex v) const { return offsets_[v]; }

  /// Position of w in the flat neighbor array within v's block, or npos.
  std::size_t edge_slot(NodeIndex v, NodeIndex w) const;
  bool has_edge(NodeIndex v, NodeIndex w) const { return edge_slot(v, w) != npos; }

  const GeoPoint& point(NodeIndex v) const { return points_[v]; }
  std::span<const GeoPoint> points() const { return points_; }
  const std::string& id(NodeIndex v) const { return ids_[v]; }
  std::span<const std::string> ids() const { return ids_; }

  /// Dense index of an external id, or npos.
  std::size_t index_of(const std::string& id) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<GeoPoint> points_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> neighbors_;
  Metric metric_ = Metric::kPlanar;
};

/// Reads a tab-separated edge file ("u<TAB>v") and location file
/// ("id<TAB>x<TAB>y"). Lines starting with '#' and blank lines are skipped.
Network load_network(const std::filesystem::path& edge_file,
                     const std::filesystem::path& location_file, Metric metric,
                     LoadDiagnostics* diag = nullptr);

double distance(const Network& net, NodeIndex v, NodeIndex w);

/// |N(v) ∩ N(w)| via a merge of the sorted adjacency lists.
std::size_t common_neighbor_count(const Network& net, NodeIndex v, NodeIndex w);

Metric parse_metric(const std::string& name);
const char* metric_name(Metric metric);

}  // namespace geocomm
