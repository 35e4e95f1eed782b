#include "geocomm/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "geocomm/error.hpp"

namespace geocomm {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void validate_point(const GeoPoint& p, Metric metric, const std::string& id) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw InputError("non-finite coordinate for node '" + id + "'");
  }
  if (metric == Metric::kGeodesic &&
      (p.x < -180.0 || p.x > 180.0 || p.y < -90.0 || p.y > 90.0)) {
    throw InputError("coordinate out of range for node '" + id +
                     "' (expected lon in [-180,180], lat in [-90,90])");
  }
}

// Splits on runs of tabs/spaces; strips a trailing '\r'.
std::vector<std::string_view> split_fields(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool skip_line(const std::vector<std::string_view>& fields) {
  return fields.empty() || fields.front().starts_with('#');
}

std::string where(const std::filesystem::path& file, std::size_t line_no) {
  return file.string() + ":" + std::to_string(line_no);
}

double parse_double(std::string_view text, const std::filesystem::path& file,
                    std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(where(file, line_no) + ": cannot parse number '" +
                     std::string(text) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  return in;
}

}  // namespace

double distance_km(const GeoPoint& a, const GeoPoint& b, Metric metric) {
  if (metric == Metric::kPlanar) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
  }
  const double lat1 = a.y * kDegToRad;
  const double lat2 = b.y * kDegToRad;
  const double sin_dlat = std::sin((lat2 - lat1) / 2.0);
  const double sin_dlon = std::sin((b.x - a.x) * kDegToRad / 2.0);
  const double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

Network Network::build(std::vector<std::string> ids, std::vector<GeoPoint> points,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       Metric metric, LoadDiagnostics* diag) {
  if (ids.size() != points.size()) {
    throw InputError("id and location counts differ");
  }
  const std::size_t n = ids.size();
  for (std::size_t i = 0; i < n; ++i) validate_point(points[i], metric, ids[i]);

  // Lexicographic node order; `rank[old] = new`.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

  Network net;
  net.metric_ = metric;
  net.ids_.reserve(n);
  net.points_.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && ids[order[r]] == ids[order[r - 1]]) {
      throw InputError("duplicate node id '" + ids[order[r]] + "'");
    }
    net.ids_.push_back(std::move(ids[order[r]]));
    net.points_.push_back(points[order[r]]);
  }

  LoadDiagnostics local;
  std::vector<std::pair<NodeIndex, NodeIndex>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) {
      ++local.dropped_self_loops;
      continue;
    }
    const auto u = static_cast<NodeIndex>(rank[a]);
    const auto v = static_cast<NodeIndex>(rank[b]);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  const auto before = arcs.size();
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  local.dropped_duplicates = (before - arcs.size()) / 2;

  net.offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : arcs) ++net.offsets_[u + 1];
  for (std::size_t v = 0; v < n; ++v) net.offsets_[v + 1] += net.offsets_[v];
  net.neighbors_.reserve(arcs.size());
  for (const auto& arc : arcs) net.neighbors_.push_back(arc.second);
  for (std::size_t v = 0; v < n; ++v) {
    if (net.offsets_[v + 1] == net.offsets_[v]) ++local.isolated_nodes;
  }
  if (diag != nullptr) *diag = local;
  return net;
}

std::size_t Network::edge_slot(NodeIndex v, NodeIndex w) const {
  const auto nb = neighbors(v);
  const auto it = std::lower_bound(nb.begin(), nb.end(), w);
  if (it == nb.end() || *it != w) return npos;
  return offsets_[v] + static_cast<std::size_t>(it - nb.begin());
}

std::size_t Network::index_of(const std::string& id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return npos;
  return static_cast<std::size_t>(it - ids_.begin());
}

Network load_network(const std::filesystem::path& edge_file,
                     const std::filesystem::path& location_file, Metric metric,
                     LoadDiagnostics* diag) {
  std::vector<std::string> ids;
  std::vector<GeoPoint> points;
  std::unordered_map<std::string, std::size_t> slot;
  {
    auto in = open_input(location_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = split_fields(line);
      if (skip_line(fields)) continue;
      if (fields.size() != 3) {
        throw InputError(where(location_file, line_no) +
                         ": expected '<id><TAB><x><TAB><y>'");
      }
      std::string id(fields[0]);
      GeoPoint p{parse_double(fields[1], location_file, line_no),
                 parse_double(fields[2], location_file, line_no)};
      if (!slot.emplace(id, ids.size()).second) {
        throw InputError(where(location_file, line_no) + ": duplicate node id '" + id + "'");
      }
      ids.push_back(std::move(id));
      points.push_back(p);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  {
    auto in = open_input(edge_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = split_fields(line);
      if (skip_line(fields)) continue;
      if (fields.size() != 2) {
        throw InputError(where(edge_file, line_no) + ": expected '<id_u><TAB><id_v>'");
      }
      std::size_t ends[2];
      for (int e = 0; e < 2; ++e) {
        const auto it = slot.find(std::string(fields[e]));
        if (it == slot.end()) {
          throw InputError(where(edge_file, line_no) + ": node '" + std::string(fields[e]) +
                           "' has no location");
        }
        ends[e] = it->second;
      }
      edges.emplace_back(ends[0], ends[1]);
    }
  }
  return Network::build(std::move(ids), std::move(points), edges, metric, diag);
}

double distance(const Network& net, NodeIndex v, NodeIndex w) {
  return distance_km(net.point(v), net.point(w), net.metric());
}

std::size_t common_neighbor_count(const Network& net, NodeIndex v, NodeIndex w) {
  const auto a = net.neighbors(v);
  const auto b = net.neighbors(w);
  std::size_t count = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

Metric parse_metric(const std::string& name) {
  if (name == "planar") return Metric::kPlanar;
  if (name == "geo" || name == "geodesic") return Metric::kGeodesic;
  throw InputError("unknown metric '" + name + "' (expected planar or geo)");
}

const char* metric_name(Metric metric) {
  return metric == Metric::kPlanar ? "planar" : "geo";
}

}  // namespace geocomm
