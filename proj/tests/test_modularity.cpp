#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geocomm/error.hpp"
#include "geocomm/modularity.hpp"
#include "support.hpp"

using namespace geocomm;
using namespace geocomm::testing;

namespace {

Partition triangles_partition() { return Partition::from_labels(std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}); }

double sum_degree_power(const Network& net, double power) {
  double s = 0.0;
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    s += std::pow(static_cast<double>(net.degree(v)), power);
  }
  return s;
}

// Random graph guaranteed to contain at least one triangle.
Network random_with_triangle(Rng& rng, std::size_t n, double p) {
  for (;;) {
    Network net = random_geometric(rng, n, p);
    for (NodeIndex v = 0; v < n; ++v) {
      for (NodeIndex w : net.neighbors(v)) {
        if (common_neighbor_count(net, v, w) > 0) return net;
      }
    }
  }
}

}  // namespace

TEST_SUITE("geo-modularity") {
  TEST_CASE("connection locality") {
    CHECK(connection_locality(0.0, 7.0) == 1.0);
    CHECK(connection_locality(7.0, 7.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(connection_locality(14.0, 7.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(std::exp(-2.0) == doctest::Approx(0.135335).epsilon(1e-6));
    CHECK(connection_locality(3.0, 7.0) > connection_locality(3.5, 7.0));
    CHECK_THROWS_AS(connection_locality(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(connection_locality(1.0, -2.0), std::invalid_argument);
  }

  TEST_CASE("node similarity") {
    const Network k3 = complete_graph(3);
    CHECK(node_similarity(k3, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    const Network path = make_network({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}});
    CHECK(node_similarity(path, 0, 1) == 0.0);
    const Network k4 = complete_graph(4);
    CHECK(node_similarity(k4, 1, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const Network lonely = make_network({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}});
    CHECK_THROWS_AS(node_similarity(lonely, 0, 2), std::logic_error);
  }

  TEST_CASE("baseline modularity identities") {
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
      const Network net = random_geometric(rng, 3 + uniform_below(rng, 20), 0.4);
      if (net.edge_count() == 0) continue;
      const double m = static_cast<double>(net.edge_count());
      CHECK(q_baseline(net, Partition::single_community(net.node_count())) ==
            doctest::Approx(0.0).epsilon(1e-15));
      CHECK(q_baseline(net, Partition::singletons(net.node_count())) ==
            doctest::Approx(-sum_degree_power(net, 2) / (4 * m * m)).epsilon(1e-13));
      CHECK(q_baseline(net, random_labels(rng, net.node_count(), 3)) <= 1.0);
    }
    const Network disjoint = two_triangles(10.0, false);
    CHECK(q_baseline(disjoint, triangles_partition()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(q_baseline(disjoint, triangles_partition()) - 0.5) <= 1e-12);
    CHECK_THROWS_AS(q_baseline(make_network({{0, 0}}, {}), Partition::singletons(1)), InputError);
  }

  TEST_CASE("C_G and P_G") {
    const Network bridged = two_triangles(0.0, true, 0.0);  // all nodes coincide
    const auto ctx = WeightContext::build(bridged, Variant::kLocality, 1.0);
    CHECK(c_g(bridged, ctx, Partition::single_community(6)) == doctest::Approx(1.0));
    CHECK(c_g(bridged, ctx, Partition::singletons(6)) == 0.0);
    CHECK(c_g(bridged, ctx, triangles_partition()) == doctest::Approx(6.0 / 7.0).epsilon(1e-15));

    const double two_m = 14.0;
    CHECK(p_g(bridged, ctx, Partition::singletons(6)) ==
          doctest::Approx(sum_degree_power(bridged, 2) / (two_m * ctx.omega())).epsilon(1e-15));
    CHECK(p_g(bridged, ctx, Partition::single_community(6)) ==
          doctest::Approx(1.0).epsilon(1e-15));

    const auto sim = WeightContext::build(bridged, Variant::kSimilarity, 1.0);
    CHECK_THROWS_AS(c_g(bridged, sim, triangles_partition()), std::invalid_argument);
    CHECK_THROWS_AS(p_g(bridged, sim, triangles_partition()), std::invalid_argument);
    CHECK_THROWS_AS(q_locality(bridged, sim, triangles_partition()), std::invalid_argument);
  }

  TEST_CASE("locality modularity") {
    const Network same = two_triangles(0.0, true, 0.0);
    const auto ctx = WeightContext::build(same, Variant::kLocality, 1.0);
    CHECK(q_locality(same, ctx, Partition::single_community(6)) ==
          doctest::Approx(0.0).epsilon(1e-15));

    Rng rng(6);
    const Network net = random_geometric(rng, 20, 0.3);
    const auto lctx = WeightContext::build(net, Variant::kLocality, 0.4);
    CHECK(q_locality(net, lctx, Partition::singletons(20)) ==
          doctest::Approx(-sum_degree_power(net, 2) / (lctx.two_m() * lctx.omega()))
              .epsilon(1e-13));

    const Network far = two_triangles(50.0, true);
    const auto fctx = WeightContext::build(far, Variant::kLocality, 2.0);
    const DenseOracle oracle(far, 2.0);
    CHECK(std::abs(q_locality(far, fctx, triangles_partition()) -
                   oracle.q(Variant::kLocality, triangles_partition())) <= 1e-12);
  }

  TEST_CASE("similarity modularity") {
    Rng rng(9);
    const Network net = random_with_triangle(rng, 15, 0.4);
    const auto ctx = WeightContext::build(net, Variant::kSimilarity, 0.5);
    const double expected =
        -ctx.tau() * sum_degree_power(net, 3) / (ctx.two_m() * 2.0 * ctx.omega());
    CHECK(q_similarity(net, ctx, Partition::singletons(15)) ==
          doctest::Approx(expected).epsilon(1e-13));

    const Network tree = make_network({{0, 0}, {1, 0}, {2, 0}, {1, 1}}, {{0, 1}, {1, 2}, {1, 3}});
    try {
      WeightContext::build(tree, Variant::kSimilarity, 1.0);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("locality") != std::string::npos);
    }

    const Network far = two_triangles(50.0, true);
    const auto fctx = WeightContext::build(far, Variant::kSimilarity, 2.0);
    const DenseOracle oracle(far, 2.0);
    CHECK(std::abs(q_similarity(far, fctx, triangles_partition()) -
                   oracle.q(Variant::kSimilarity, triangles_partition())) <= 1e-12);
  }

  TEST_CASE("weight context invariants") {
    Rng rng(13);
    const Network net = random_geometric(rng, 25, 0.35);
    const auto ctx = WeightContext::build(net, Variant::kSimilarity, 0.3);
    CHECK(ctx.omega() > 0.0);
    CHECK(ctx.tau() > 0.0);
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      for (NodeIndex w : net.neighbors(v)) {
        const auto vw = net.edge_slot(v, w);
        const auto wv = net.edge_slot(w, v);
        CHECK(ctx.edge_locality(vw) == ctx.edge_locality(wv));
        CHECK(ctx.edge_similarity(vw) == ctx.edge_similarity(wv));
        CHECK(ctx.edge_locality(vw) > 0.0);
        CHECK(ctx.edge_locality(vw) <= 1.0);
        CHECK(ctx.edge_similarity(vw) >= 0.0);
        CHECK(ctx.edge_similarity(vw) <= 1.0);
      }
    }
    CHECK_THROWS_AS(WeightContext::build(make_network({{0, 0}, {1, 1}}, {}), Variant::kLocality, 1.0),
                    InputError);
  }

  TEST_CASE("tau depends only on the degree sequence") {
    // 6-cycle vs two triangles: both 2-regular on 6 nodes.
    std::vector<GeoPoint> pts(6);
    for (std::size_t i = 0; i < 6; ++i) pts[i] = {static_cast<double>(i), 0.0};
    const Network cycle = make_network(pts, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    const Network tris = two_triangles(3.0, false);
    CHECK(WeightContext::build(cycle, Variant::kLocality, 1.0).tau() ==
          WeightContext::build(tris, Variant::kLocality, 1.0).tau());

    // Degree-preserving double edge swaps on random graphs.
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const Network net = random_geometric(rng, 12, 0.4);
      if (net.edge_count() < 2) continue;
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (NodeIndex v = 0; v < 12; ++v) {
        for (NodeIndex w : net.neighbors(v)) {
          if (v < w) edges.emplace_back(v, w);
        }
      }
      for (int swap = 0; swap < 30; ++swap) {
        auto& e1 = edges[uniform_below(rng, edges.size())];
        auto& e2 = edges[uniform_below(rng, edges.size())];
        const auto [a, b] = e1;
        const auto [c, d] = e2;
        if (a == c || a == d || b == c || b == d) continue;
        if (net.has_edge(static_cast<NodeIndex>(a), static_cast<NodeIndex>(d)) ||
            net.has_edge(static_cast<NodeIndex>(c), static_cast<NodeIndex>(b))) {
          continue;
        }
        const bool clash = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
          return e == std::pair{std::min(a, d), std::max(a, d)} ||
                 e == std::pair{std::min(c, b), std::max(c, b)};
        });
        if (clash) continue;
        e1 = {std::min(a, d), std::max(a, d)};
        e2 = {std::min(c, b), std::max(c, b)};
      }
      std::vector<GeoPoint> p(12);
      for (NodeIndex v = 0; v < 12; ++v) p[v] = net.point(v);
      const Network rewired = make_network(p, edges);
      REQUIRE(rewired.edge_count() == net.edge_count());
      for (NodeIndex v = 0; v < 12; ++v) REQUIRE(rewired.degree(v) == net.degree(v));
      CHECK(WeightContext::build(rewired, Variant::kLocality, 1.0).tau() ==
            WeightContext::build(net, Variant::kLocality, 1.0).tau());
    }
  }

  TEST_CASE("evaluators agree with the dense oracle on random graphs") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 4 + uniform_below(rng, 16);
      const Network net = random_with_triangle(rng, n, 0.2 + 0.5 * uniform01(rng));
      const double sigma = 0.1 + uniform01(rng);
      const DenseOracle oracle(net, sigma);
      const Partition p = random_labels(rng, n, 1 + uniform_below(rng, 4));
      for (Variant variant : {Variant::kBaseline, Variant::kLocality, Variant::kSimilarity}) {
        const auto ctx = WeightContext::build(net, variant, sigma);
        const double dense = oracle.q(variant, p);
        CHECK(std::abs(q_oracle(net, ctx, p) - dense) <= 1e-12);
        CHECK(std::abs(modularity(net, ctx, p) - dense) <= 1e-12);
      }
      const auto lctx = WeightContext::build(net, Variant::kLocality, sigma);
      CHECK(q_locality(net, lctx, p) ==
            doctest::Approx(c_g(net, lctx, p) - p_g(net, lctx, p)).epsilon(1e-13));
      CHECK(c_g(net, lctx, p) >= 0.0);
      CHECK(c_g(net, lctx, p) <= 1.0 + 1e-15);
    }
  }

  TEST_CASE("coincident locations reduce the locality variant to the baseline") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 3 + uniform_below(rng, 20);
      std::vector<GeoPoint> pts(n, GeoPoint{4.0, 4.0});
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w = v + 1; w < n; ++w) {
          if (uniform01(rng) < 0.3) edges.emplace_back(v, w);
        }
      }
      const Network net = make_network(pts, edges);
      if (net.edge_count() == 0) continue;
      const auto ctx = WeightContext::build(net, Variant::kLocality, 0.0);
      const Partition p = random_labels(rng, n, 3);
      CHECK(std::abs(q_locality(net, ctx, p) - q_baseline(net, p)) <= 1e-12);
    }
  }

  TEST_CASE("self-pair terms do not depend on the partition") {
    Rng rng(41);
    const Network net = random_with_triangle(rng, 12, 0.4);
    const DenseOracle oracle(net, 0.5);
    for (Variant variant : {Variant::kBaseline, Variant::kLocality, Variant::kSimilarity}) {
      const Partition a = random_labels(rng, 12, 3);
      const Partition b = random_labels(rng, 12, 5);
      const double diag_a = oracle.q(variant, a) - oracle.q(variant, a, false);
      const double diag_b = oracle.q(variant, b) - oracle.q(variant, b, false);
      CHECK(diag_a == doctest::Approx(diag_b).epsilon(1e-12));
    }
  }

  TEST_CASE("partition compaction") {
    const Partition p = Partition::from_labels(std::vector<std::uint32_t>{7, 3, 7, 9, 3});
    CHECK(p.community_count() == 3);
    CHECK(p.label(0) == 0);
    CHECK(p.label(1) == 1);
    CHECK(p.label(3) == 2);
    CHECK(p.members(0).size() == 2);
    CHECK(parse_variant("locality") == Variant::kLocality);
    CHECK_THROWS_AS(parse_variant("louvain"), InputError);
  }
}
