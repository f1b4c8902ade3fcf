#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "mtefim/evo.hpp"
#include "oracles.hpp"

using namespace mtefim;

namespace {

Network complete(std::int32_t n) {
  std::vector<std::tuple<node_id, node_id, double>> edges;
  for (node_id u = 0; u < n; ++u)
    for (node_id v = u + 1; v < n; ++v) edges.emplace_back(u, v, -1.0);
  return Network::build(n, edges, false, 0.1);
}

bool valid_genome(const Network& net, const std::vector<node_id>& genes,
                  std::size_t k) {
  if (genes.size() != k) return false;
  std::set<node_id> seen;
  for (const node_id g : genes) {
    if (g < 0 || g >= net.node_count()) return false;
    if (!seen.insert(g).second) return false;
  }
  return true;
}

} // namespace

TEST_CASE("repair keeps first occurrences and resolves duplicates", "[evo]") {
  const Network net = complete(3);
  rng_t rng(3);
  // [1, 1, 2]: the only node outside {1, 2} is 0, so the result is forced.
  const Individual fixed = repair({1, 1, 2}, net, rng);
  REQUIRE(fixed.genes == std::vector<node_id>{1, 0, 2});
  REQUIRE_FALSE(fixed.fitness.has_value());

  // [1, 1, 1]: positions after the first become the two other nodes.
  const Individual spread = repair({1, 1, 1}, net, rng);
  REQUIRE(spread.genes[0] == 1);
  REQUIRE(valid_genome(net, spread.genes, 3));

  REQUIRE_THROWS_AS(repair({0, 0, 1, 2}, net, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(repair({}, net, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(repair({5}, net, rng), std::out_of_range);
}

TEST_CASE("deterministic crossover core swaps the inclusive cut range", "[evo]") {
  const Network net = complete(10);
  rng_t rng(5);
  const Individual p1{{1, 2, 3, 4, 5}, 10.0};
  const Individual p2{{6, 7, 8, 9, 0}, 20.0};
  const auto [c1, c2] = crossover_at(p1, p2, 2, 4, net, rng);
  REQUIRE(c1.genes == std::vector<node_id>{1, 7, 8, 9, 5});
  REQUIRE(c2.genes == std::vector<node_id>{6, 2, 3, 4, 0});
  // Disjoint parents never trigger repair, but the genomes changed, so the
  // caches are gone.
  REQUIRE_FALSE(c1.fitness.has_value());
  REQUIRE_FALSE(c2.fitness.has_value());

  REQUIRE_THROWS_AS(crossover_at(p1, p2, 0, 3, net, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(crossover_at(p1, p2, 3, 3, net, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(crossover_at(p1, p2, 2, 6, net, rng), std::invalid_argument);
}

TEST_CASE("identical parents pass through crossover unchanged", "[evo]") {
  const Network net = complete(8);
  rng_t rng(7);
  const Individual p{{0, 3, 5}, 4.5};
  const auto [c1, c2] = two_point_crossover(p, p, 1.0, net, rng);
  REQUIRE(c1.genes == p.genes);
  REQUIRE(c2.genes == p.genes);
  // Value-identical children keep the cached fitness.
  REQUIRE(c1.fitness == p.fitness);
  REQUIRE(c2.fitness == p.fitness);
}

TEST_CASE("pc = 0 and pm = 0 compose to the identity", "[evo]") {
  const Network net = complete(9);
  rng_t rng(11);
  const Individual p1{{0, 1, 2, 3}, 1.0};
  const Individual p2{{5, 6, 7, 8}, 2.0};
  const auto [c1, c2] = two_point_crossover(p1, p2, 0.0, net, rng);
  REQUIRE(c1.genes == p1.genes);
  REQUIRE(c2.genes == p2.genes);
  REQUIRE(c1.fitness == p1.fitness);
  const Individual m = mutate(c1, 0.0, net, rng);
  REQUIRE(m.genes == p1.genes);
  REQUIRE(m.fitness == p1.fitness);
}

TEST_CASE("crossover children are always valid seed sets", "[evo]") {
  rng_t rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    oracles::RandomGraphOptions opts;
    opts.min_nodes = 5;
    opts.max_nodes = 12;
    const Network net = oracles::random_graph(rng, opts);
    const auto k = static_cast<std::int32_t>(
        2 + rand_index(rng, static_cast<std::uint64_t>(net.node_count() - 1)));
    const Individual p1{oracles::random_seed_set(rng, net.node_count(), k), {}};
    const Individual p2{oracles::random_seed_set(rng, net.node_count(), k), {}};
    const auto [c1, c2] = two_point_crossover(p1, p2, 1.0, net, rng);
    REQUIRE(valid_genome(net, c1.genes, static_cast<std::size_t>(k)));
    REQUIRE(valid_genome(net, c2.genes, static_cast<std::size_t>(k)));
  }
}

TEST_CASE("single-gene genomes cannot be crossed", "[evo]") {
  const Network net = complete(5);
  rng_t rng(17);
  const Individual p1{{0}, 1.0};
  const Individual p2{{3}, 2.0};
  const auto [c1, c2] = two_point_crossover(p1, p2, 1.0, net, rng);
  REQUIRE(c1.genes == p1.genes);
  REQUIRE(c2.genes == p2.genes);
}

TEST_CASE("mutation replaces genes with absent nodes only", "[evo]") {
  rng_t rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    oracles::RandomGraphOptions opts;
    opts.min_nodes = 5;
    opts.max_nodes = 12;
    const Network net = oracles::random_graph(rng, opts);
    const auto k = static_cast<std::int32_t>(
        1 + rand_index(rng, static_cast<std::uint64_t>(net.node_count())));
    const Individual parent{oracles::random_seed_set(rng, net.node_count(), k), {}};
    const double pm = rand_u01(rng);
    const Individual child = mutate(parent, pm, net, rng);
    REQUIRE(valid_genome(net, child.genes, static_cast<std::size_t>(k)));
  }
}

TEST_CASE("mutation with one spare node is forced", "[evo]") {
  const Network net = complete(4);
  rng_t rng(23);
  const Individual parent{{0, 1, 2}, 7.0};
  // pm = 1: the first gene takes the only absent node (3); afterwards every
  // node is present, so the remaining genes must stay.
  const Individual child = mutate(parent, 1.0, net, rng);
  REQUIRE(child.genes == std::vector<node_id>{3, 1, 2});
  REQUIRE_FALSE(child.fitness.has_value());
}

TEST_CASE("mutation with a full genome is the identity", "[evo]") {
  const Network net = complete(3);
  rng_t rng(29);
  const Individual parent{{2, 0, 1}, 5.0};
  const Individual child = mutate(parent, 1.0, net, rng);
  REQUIRE(child.genes == parent.genes);
  REQUIRE(child.fitness == parent.fitness);
}

TEST_CASE("warm-start population seeds from top degrees", "[evo]") {
  // Star: node 0 has degree 4, leaves have degree 1; plus isolated node 5.
  const Network net = Network::build(
      6, {{0, 1, -1.0}, {0, 2, -1.0}, {0, 3, -1.0}, {0, 4, -1.0}}, false, 0.1);
  rng_t rng(31);
  const Population pop = init_population(net, 1, 50, rng);
  REQUIRE(pop.members.size() == 50);
  bool kept_centre = false, took_leaf = false;
  for (const auto& m : pop.members) {
    REQUIRE(m.genes.size() == 1);
    REQUIRE_FALSE(m.fitness.has_value());
    // Either the top-degree node itself or one of its neighbours.
    if (m.genes[0] == 0) kept_centre = true;
    else {
      REQUIRE(net.has_edge(0, m.genes[0]));
      took_leaf = true;
    }
  }
  // With 50 members and a fair coin both branches appear.
  REQUIRE(kept_centre);
  REQUIRE(took_leaf);
}

TEST_CASE("warm-start members are valid and deterministic", "[evo]") {
  rng_t rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = oracles::random_graph(rng);
    const auto k = static_cast<std::int32_t>(
        1 + rand_index(rng, std::min<std::uint64_t>(5, net.node_count())));
    rng_t r1(trial), r2(trial);
    const Population a = init_population(net, k, 10, r1);
    const Population b = init_population(net, k, 10, r2);
    for (std::size_t i = 0; i < a.members.size(); ++i) {
      REQUIRE(valid_genome(net, a.members[i].genes, static_cast<std::size_t>(k)));
      REQUIRE(a.members[i].genes == b.members[i].genes);
    }
  }
  const Network net = complete(4);
  rng_t r(1);
  REQUIRE_THROWS_AS(init_population(net, 0, 10, r), std::invalid_argument);
  REQUIRE_THROWS_AS(init_population(net, 5, 10, r), std::invalid_argument);
  REQUIRE_THROWS_AS(init_population(net, 2, 1, r), std::invalid_argument);
}

TEST_CASE("elitist selection keeps the best and prefers parents on ties",
          "[evo]") {
  Population parents, offspring;
  parents.owner = 2;
  parents.members = {Individual{{0, 1}, {}}, Individual{{2, 3}, {}}};
  offspring.members = {Individual{{4, 5}, {}}, Individual{{6, 7}, {}}};
  const std::vector<double> fitness{5.0, 3.0, 5.0, 4.0};
  const Population next = elitist_select(parents, offspring, fitness, 2);
  REQUIRE(next.owner == 2);
  REQUIRE(next.members.size() == 2);
  // Tie at 5.0: the parent comes first, the offspring copy second.
  REQUIRE(next.members[0].genes == std::vector<node_id>{0, 1});
  REQUIRE(next.members[1].genes == std::vector<node_id>{4, 5});
  REQUIRE(next.members[0].fitness == 5.0);
  REQUIRE(next.members[1].fitness == 5.0);

  const std::vector<double> with_nan{5.0, std::nan(""), 1.0, 2.0};
  REQUIRE_THROWS_AS(elitist_select(parents, offspring, with_nan, 2),
                    std::invalid_argument);
  const std::vector<double> short_fitness{1.0, 2.0};
  REQUIRE_THROWS_AS(elitist_select(parents, offspring, short_fitness, 2),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(elitist_select(parents, offspring, fitness, 9),
                    std::invalid_argument);
}

TEST_CASE("selection is monotone: survivors dominate the discarded", "[evo]") {
  rng_t rng(41);
  Population parents, offspring;
  std::vector<double> fitness;
  for (int i = 0; i < 6; ++i) {
    parents.members.push_back(Individual{{static_cast<node_id>(i)}, {}});
    fitness.push_back(rand_u01(rng));
  }
  for (int i = 0; i < 6; ++i) {
    offspring.members.push_back(Individual{{static_cast<node_id>(10 + i)}, {}});
    fitness.push_back(rand_u01(rng));
  }
  const Population next = elitist_select(parents, offspring, fitness, 4);
  auto sorted = fitness;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t i = 0; i < next.members.size(); ++i)
    REQUIRE(*next.members[i].fitness == sorted[i]);
}
