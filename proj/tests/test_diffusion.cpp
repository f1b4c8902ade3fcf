#include <catch2/catch_amalgamated.hpp>

#include "mtefim/diffusion.hpp"
#include "oracles.hpp"

using namespace mtefim;

namespace {

Network triangle(double p) {
  return Network::build(3, {{0, 1, -1.0}, {1, 2, -1.0}, {0, 2, -1.0}}, false, p);
}

} // namespace

TEST_CASE("exact spread on hand-checkable graphs", "[diffusion]") {
  // Path a-b-c, seed a, p=0.5: 1 + p + p^2.
  const Network path =
      Network::build(3, {{0, 1, -1.0}, {1, 2, -1.0}}, false, 0.5);
  const std::vector<node_id> a{0};
  REQUIRE(exact_spread_small(path, a) == Catch::Approx(1.75).margin(1e-12));

  // Triangle, seed a, p=0.5: enumerate 8 live-edge patterns -> 18/8.
  const std::vector<node_id> s{0};
  REQUIRE(exact_spread_small(triangle(0.5), s) ==
          Catch::Approx(2.25).margin(1e-12));

  // Degenerate probabilities.
  REQUIRE(exact_spread_small(triangle(0.0), s) == Catch::Approx(1.0));
  REQUIRE(exact_spread_small(triangle(1.0), s) == Catch::Approx(3.0));

  // Directed arc only reaches downstream.
  const Network arc = Network::build(2, {{0, 1, 0.5}}, true, 0.1);
  const std::vector<node_id> b{1};
  REQUIRE(exact_spread_small(arc, a) == Catch::Approx(1.5).margin(1e-12));
  REQUIRE(exact_spread_small(arc, b) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("exact spread agrees with an independent enumerator", "[diffusion]") {
  rng_t rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    oracles::RandomGraphOptions opts;
    opts.max_nodes = 8;
    opts.max_edges = 12;
    opts.per_edge_probs = trial % 2 == 1;
    opts.directed = trial % 3 == 0;
    const Network net = oracles::random_graph(rng, opts);
    const auto k = static_cast<std::int32_t>(
        1 + rand_index(rng, std::min<std::uint64_t>(3, net.node_count())));
    const auto seeds = oracles::random_seed_set(rng, net.node_count(), k);
    REQUIRE(exact_spread_small(net, seeds) ==
            Catch::Approx(oracles::exact_spread_enum(net, seeds)).margin(1e-12));
  }
}

TEST_CASE("exact spread refuses too many edge coins", "[diffusion]") {
  // 7 nodes complete: 21 undirected coins.
  std::vector<std::tuple<node_id, node_id, double>> edges;
  for (node_id u = 0; u < 7; ++u)
    for (node_id v = u + 1; v < 7; ++v) edges.emplace_back(u, v, -1.0);
  const Network net = Network::build(7, edges, false, 0.3);
  const std::vector<node_id> s{0};
  REQUIRE_THROWS_AS(exact_spread_small(net, s), std::invalid_argument);
}

TEST_CASE("seed sets are validated", "[diffusion]") {
  const Network net = triangle(0.5);
  rng_t rng(1);
  std::vector<node_id> empty;
  std::vector<node_id> dup{0, 0};
  std::vector<node_id> oob{0, 5};
  REQUIRE_THROWS_AS(simulate_ic_once(net, empty, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(simulate_ic_once(net, dup, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(simulate_ic_once(net, oob, rng), std::out_of_range);
  REQUIRE_THROWS_AS(estimate_spread(net, dup, DiffusionConfig{10, 0, 1}),
                    std::invalid_argument);
  std::vector<node_id> ok{0};
  REQUIRE_THROWS_AS(estimate_spread(net, ok, DiffusionConfig{0, 0, 1}),
                    std::invalid_argument);
}

TEST_CASE("single cascades stay within bounds and hit them at the extremes",
          "[diffusion]") {
  const Network net = triangle(0.5);
  rng_t rng(17);
  const std::vector<node_id> seeds{0, 2};
  for (int i = 0; i < 200; ++i) {
    const auto size = simulate_ic_once(net, seeds, rng);
    REQUIRE(size >= 2);
    REQUIRE(size <= 3);
  }
  const Network all = triangle(1.0);
  REQUIRE(simulate_ic_once(all, seeds, rng) == 3);
  const Network none = triangle(0.0);
  REQUIRE(simulate_ic_once(none, seeds, rng) == 2);
}

TEST_CASE("estimates are deterministic and worker-count independent",
          "[diffusion]") {
  rng_t rng(41);
  const Network net = oracles::random_graph(rng);
  const std::vector<node_id> seeds{0, 1};
  const auto a = estimate_spread(net, seeds, DiffusionConfig{5000, 9, 1});
  const auto b = estimate_spread(net, seeds, DiffusionConfig{5000, 9, 4});
  const auto c = estimate_spread(net, seeds, DiffusionConfig{5000, 9, 3});
  REQUIRE(a.mean == b.mean);
  REQUIRE(a.std_error == b.std_error);
  REQUIRE(a.mean == c.mean);
  REQUIRE(a.replicas == 5000);
}

TEST_CASE("degenerate probabilities give zero-variance estimates", "[diffusion]") {
  const Network none = triangle(0.0);
  const std::vector<node_id> seeds{0, 1};
  const auto est0 = estimate_spread(none, seeds, DiffusionConfig{1000, 3, 2});
  REQUIRE(est0.mean == 2.0);
  REQUIRE(est0.std_error == 0.0);

  const Network all = triangle(1.0);
  const auto est1 = estimate_spread(all, seeds, DiffusionConfig{1000, 3, 2});
  REQUIRE(est1.mean == 3.0);
  REQUIRE(est1.std_error == 0.0);
}

TEST_CASE("Monte Carlo estimates match the exact oracle within noise",
          "[diffusion]") {
  rng_t rng(53);
  int within = 0, total = 0;
  for (int trial = 0; trial < 12; ++trial) {
    oracles::RandomGraphOptions opts;
    opts.max_nodes = 8;
    opts.max_edges = 14;
    opts.per_edge_probs = trial % 2 == 1;
    const Network net = oracles::random_graph(rng, opts);
    const auto seeds = oracles::random_seed_set(
        rng, net.node_count(),
        static_cast<std::int32_t>(1 + rand_index(rng, 2)));
    const double exact = exact_spread_small(net, seeds);
    const auto est = estimate_spread(
        net, seeds, DiffusionConfig{10000, 1000 + static_cast<std::uint64_t>(trial), 2});
    ++total;
    const double slack = 4.0 * est.std_error + 1e-12;
    if (std::abs(est.mean - exact) <= slack) ++within;
  }
  // 4 standard errors: essentially all trials must agree.
  REQUIRE(within >= total - 1);
}

TEST_CASE("estimate mean is invariant to seed order", "[diffusion]") {
  const Network net = triangle(0.5);
  const std::vector<node_id> fwd{0, 2};
  const std::vector<node_id> rev{2, 0};
  const auto a = estimate_spread(net, fwd, DiffusionConfig{2000, 5, 1});
  const auto b = estimate_spread(net, rev, DiffusionConfig{2000, 5, 1});
  REQUIRE(a.mean == b.mean); // internal set semantics
}
