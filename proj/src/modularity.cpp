#include "geocomm/modularity.hpp"

#include <cmath>
#include <stdexcept>

#include "geocomm/error.hpp"

namespace geocomm {

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  Partition p;
  p.labels_.resize(labels.size());
  std::vector<std::int64_t> remap;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const auto raw = labels[v];
    if (raw >= remap.size()) remap.resize(static_cast<std::size_t>(raw) + 1, -1);
    if (remap[raw] < 0) {
      remap[raw] = static_cast<std::int64_t>(p.members_.size());
      p.members_.emplace_back();
    }
    const auto c = static_cast<CommunityId>(remap[raw]);
    p.labels_[v] = c;
    p.members_[c].push_back(static_cast<NodeIndex>(v));
  }
  return p;
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::uint32_t> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = static_cast<std::uint32_t>(v);
  return from_labels(labels);
}

Partition Partition::single_community(std::size_t n) {
  return from_labels(std::vector<std::uint32_t>(n, 0));
}

Variant parse_variant(const std::string& name) {
  if (name == "baseline") return Variant::kBaseline;
  if (name == "locality") return Variant::kLocality;
  if (name == "similarity") return Variant::kSimilarity;
  throw InputError("unknown variant '" + name + "' (expected baseline, locality or similarity)");
}

const char* variant_name(Variant variant) {
  switch (variant) {
    case Variant::kBaseline: return "baseline";
    case Variant::kLocality: return "locality";
    case Variant::kSimilarity: return "similarity";
  }
  return "?";
}

double connection_locality(double dis_km, double sigma_km) {
  if (!(sigma_km > 0.0)) throw std::invalid_argument("connection locality needs sigma > 0");
  if (!(dis_km >= 0.0)) throw std::invalid_argument("negative distance");
  return std::exp(-dis_km / sigma_km);
}

double node_similarity(const Network& net, NodeIndex v, NodeIndex w) {
  const auto kv = net.degree(v);
  const auto kw = net.degree(w);
  if (kv == 0 || kw == 0) throw std::logic_error("node similarity on a zero-degree node");
  return static_cast<double>(common_neighbor_count(net, v, w)) /
         std::sqrt(static_cast<double>(kv) * static_cast<double>(kw));
}

WeightContext WeightContext::build(const Network& net, Variant variant, double sigma_km) {
  if (net.edge_count() == 0) throw InputError("modularity is undefined on a graph without edges");
  if (!(sigma_km >= 0.0) || !std::isfinite(sigma_km)) {
    throw std::invalid_argument("sigma must be finite and non-negative");
  }
  WeightContext ctx;
  ctx.variant_ = variant;
  ctx.sigma_km_ = variant == Variant::kBaseline ? 0.0 : sigma_km;
  ctx.two_m_ = 2.0 * static_cast<double>(net.edge_count());

  double sum_k2 = 0.0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    const auto k = static_cast<double>(net.degree(v));
    sum_k2 += k * k;
  }
  ctx.tau_ = sum_k2 / (ctx.two_m_ * ctx.two_m_);

  const std::size_t slots = 2 * net.edge_count();
  ctx.edge_l_.assign(slots, 1.0);
  ctx.edge_s_.assign(slots, 0.0);
  double omega = 0.0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    const auto nb = net.neighbors(v);
    const std::size_t base = net.adjacency_offset(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeIndex w = nb[k];
      double l = 1.0;
      if (!ctx.unit_locality()) l = connection_locality(distance(net, v, w), ctx.sigma_km_);
      const double s = node_similarity(net, v, w);
      ctx.edge_l_[base + k] = l;
      ctx.edge_s_[base + k] = s;
      switch (variant) {
        case Variant::kBaseline: omega += 1.0; break;
        case Variant::kLocality: omega += l; break;
        case Variant::kSimilarity: omega += s * l; break;
      }
    }
  }
  ctx.omega_ = omega;
  if (variant == Variant::kSimilarity && omega == 0.0) {
    throw InfeasibleError(
        "similarity modularity is undefined: no edge has a common neighbor (omega = 0); "
        "use the locality variant instead");
  }
  return ctx;
}

double WeightContext::locality(double dis_km) const {
  if (unit_locality()) return 1.0;
  return connection_locality(dis_km, sigma_km_);
}

double WeightContext::locality_between(const Network& net, NodeIndex v, NodeIndex w) const {
  return locality(distance(net, v, w));
}

namespace {

void require_variant(const WeightContext& ctx, Variant expected, const char* what) {
  if (ctx.variant() != expected) {
    throw std::invalid_argument(std::string(what) + " requires the " + variant_name(expected) +
                                " weight context");
  }
}

double adjacency_weight(const Network& net, const WeightContext& ctx, NodeIndex v, NodeIndex w,
                        bool with_similarity) {
  const auto slot = net.edge_slot(v, w);
  if (slot == Network::npos) return 0.0;
  const double l = ctx.edge_locality(slot);
  return with_similarity ? ctx.edge_similarity(slot) * l : l;
}

}  // namespace

double q_baseline(const Network& net, const Partition& p) {
  if (net.edge_count() == 0) throw InputError("modularity is undefined on a graph without edges");
  // Integer numerator sum [A 2m - k_v k_w], so the result is exactly rounded.
  const auto two_m = static_cast<__int128>(2 * net.edge_count());
  const auto n = static_cast<NodeIndex>(net.node_count());
  __int128 sum = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w = 0; w < n; ++w) {
      if (p.label(v) != p.label(w)) continue;
      const __int128 a = net.has_edge(v, w) ? 1 : 0;
      sum += a * two_m - static_cast<__int128>(net.degree(v)) * net.degree(w);
    }
  }
  return static_cast<double>(sum) / static_cast<double>(two_m * two_m);
}

double c_g(const Network& net, const WeightContext& ctx, const Partition& p) {
  require_variant(ctx, Variant::kLocality, "C_G");
  const auto n = static_cast<NodeIndex>(net.node_count());
  double inside = 0.0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w = 0; w < n; ++w) {
      if (p.label(v) == p.label(w)) inside += adjacency_weight(net, ctx, v, w, false);
    }
  }
  return inside / ctx.omega();
}

double p_g(const Network& net, const WeightContext& ctx, const Partition& p) {
  require_variant(ctx, Variant::kLocality, "P_G");
  const auto n = static_cast<NodeIndex>(net.node_count());
  double expected = 0.0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w = 0; w < n; ++w) {
      if (p.label(v) != p.label(w)) continue;
      const double kv = static_cast<double>(net.degree(v));
      const double kw = static_cast<double>(net.degree(w));
      expected += kv * kw / ctx.two_m() * ctx.locality_between(net, v, w);
    }
  }
  return expected / ctx.omega();
}

double q_locality(const Network& net, const WeightContext& ctx, const Partition& p) {
  require_variant(ctx, Variant::kLocality, "locality modularity");
  const auto n = static_cast<NodeIndex>(net.node_count());
  double sum = 0.0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w = 0; w < n; ++w) {
      if (p.label(v) != p.label(w)) continue;
      const double l = ctx.locality_between(net, v, w);
      const double a = net.has_edge(v, w) ? 1.0 : 0.0;
      const double kv = static_cast<double>(net.degree(v));
      const double kw = static_cast<double>(net.degree(w));
      sum += a * l - kv * kw / ctx.two_m() * l;
    }
  }
  return sum / ctx.omega();
}

double q_similarity(const Network& net, const WeightContext& ctx, const Partition& p) {
  require_variant(ctx, Variant::kSimilarity, "similarity modularity");
  const auto n = static_cast<NodeIndex>(net.node_count());
  double sum = 0.0;
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w = 0; w < n; ++w) {
      if (p.label(v) != p.label(w)) continue;
      const double l = ctx.locality_between(net, v, w);
      const double asl = adjacency_weight(net, ctx, v, w, true);
      const double kk = static_cast<double>(net.degree(v)) * static_cast<double>(net.degree(w));
      sum += asl - l * kk / ctx.two_m() * ctx.tau() * std::sqrt(kk);
    }
  }
  return sum / (2.0 * ctx.omega());
}

double q_oracle(const Network& net, const WeightContext& ctx, const Partition& p) {
  switch (ctx.variant()) {
    case Variant::kBaseline: return q_baseline(net, p);
    case Variant::kLocality: return q_locality(net, ctx, p);
    case Variant::kSimilarity: return q_similarity(net, ctx, p);
  }
  return 0.0;
}

double modularity(const Network& net, const WeightContext& ctx, const Partition& p) {
  const bool similarity = ctx.variant() == Variant::kSimilarity;
  const double scale = similarity ? ctx.tau() / ctx.two_m() : 1.0 / ctx.two_m();
  const double normalizer = similarity ? 2.0 * ctx.omega() : ctx.omega();
  const auto null_weight = [&](NodeIndex v) {
    const auto k = static_cast<double>(net.degree(v));
    return similarity ? k * std::sqrt(k) : k;
  };

  const auto communities = static_cast<std::int64_t>(p.community_count());
  std::vector<double> part(p.community_count(), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < communities; ++ci) {
    const auto c = static_cast<CommunityId>(ci);
    const auto members = p.members(c);
    double observed = 0.0;
    for (NodeIndex v : members) {
      const auto nb = net.neighbors(v);
      const std::size_t base = net.adjacency_offset(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (p.label(nb[k]) != c) continue;
        const double l = ctx.edge_locality(base + k);
        observed += similarity ? ctx.edge_similarity(base + k) * l : l;
      }
    }
    double expected = 0.0;
    if (ctx.unit_locality()) {
      double g = 0.0;
      for (NodeIndex v : members) g += null_weight(v);
      expected = g * g;
    } else {
      for (NodeIndex v : members) {
        double row = 0.0;
        for (NodeIndex w : members) row += null_weight(w) * ctx.locality_between(net, v, w);
        expected += null_weight(v) * row;
      }
    }
    part[static_cast<std::size_t>(ci)] = observed - scale * expected;
  }
  double total = 0.0;
  for (double x : part) total += x;
  return total / normalizer;
}

}  // namespace geocomm
