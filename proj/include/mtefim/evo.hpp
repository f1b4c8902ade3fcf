#pragma once

// Population representation and variation operators.
//
// An individual is a fixed-length genome of k distinct node ids (a candidate
// seed set; gene order is irrelevant to fitness but preserved by operators).
// Operators return fresh individuals; a returned individual keeps its parent
// fitness cache only when its genome is value-identical to that parent's.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtefim/graph.hpp"
#include "mtefim/rng.hpp"

namespace mtefim {

struct Individual {
  std::vector<node_id> genes;
  std::optional<double> fitness; // cache of the owner transformation's proxy
};

struct Population {
  std::vector<Individual> members;
  int owner = -1; // transformation index the cached fitnesses refer to
};

namespace detail {

struct GenomeMask {
  std::vector<std::int64_t> stamp;
  std::int64_t epoch = 0;

  void begin(std::size_t n) {
    if (stamp.size() < n) stamp.assign(n, -1);
    ++epoch;
  }
  bool contains(node_id v) const {
    return stamp[static_cast<std::size_t>(v)] == epoch;
  }
  void add(node_id v) { stamp[static_cast<std::size_t>(v)] = epoch; }
};

inline GenomeMask& genome_mask() {
  thread_local GenomeMask mask;
  return mask;
}

// Uniform draw from the nodes not currently in `mask`.  `present` is the
// number of marked nodes.  Rejection sampling; cheap while present << n.
inline node_id draw_absent_node(const Network& net, const GenomeMask& mask,
                                std::int32_t present, rng_t& rng) {
  const auto n = static_cast<std::uint64_t>(net.node_count());
  if (static_cast<std::uint64_t>(present) >= n)
    throw std::invalid_argument("variation: no replacement node available");
  for (;;) {
    const auto v = static_cast<node_id>(rand_index(rng, n));
    if (!mask.contains(v)) return v;
  }
}

inline void check_genome(const Network& net, std::span<const node_id> genes,
                         const char* who) {
  if (genes.empty())
    throw std::invalid_argument(std::string(who) + ": empty genome");
  auto& mask = genome_mask();
  mask.begin(static_cast<std::size_t>(net.node_count()));
  for (const node_id g : genes) {
    if (g < 0 || g >= net.node_count())
      throw std::out_of_range(std::string(who) + ": gene " + std::to_string(g) +
                              " out of range");
    if (mask.contains(g))
      throw std::invalid_argument(std::string(who) + ": duplicate gene " +
                                  std::to_string(g));
    mask.add(g);
  }
}

} // namespace detail

// Replaces duplicate genes (every occurrence after the first) with uniformly
// random nodes not currently present in the genome, preserving positions of
// first occurrences.  Throws if k exceeds the node count.
inline Individual repair(std::vector<node_id> genome, const Network& net,
                         rng_t& rng) {
  const auto k = static_cast<std::int32_t>(genome.size());
  if (k == 0) throw std::invalid_argument("repair: empty genome");
  if (k > net.node_count())
    throw std::invalid_argument("repair: genome longer than the node count");
  for (const node_id g : genome)
    if (g < 0 || g >= net.node_count())
      throw std::out_of_range("repair: gene " + std::to_string(g) +
                              " out of range");
  auto& mask = detail::genome_mask();
  mask.begin(static_cast<std::size_t>(net.node_count()));
  std::int32_t present = 0;
  for (const node_id g : genome)
    if (!mask.contains(g)) {
      mask.add(g);
      ++present;
    }
  detail::GenomeMask seen;
  seen.begin(static_cast<std::size_t>(net.node_count()));
  for (auto& g : genome) {
    if (!seen.contains(g)) {
      seen.add(g);
      continue;
    }
    const node_id fresh = detail::draw_absent_node(net, mask, present, rng);
    g = fresh;
    mask.add(fresh);
    seen.add(fresh);
    ++present;
  }
  return Individual{std::move(genome), std::nullopt};
}

// Deterministic two-point crossover core: swaps the inclusive gene range
// [x1, x2] (1-based cut positions, 1 <= x1 < x2 <= k) between the parents,
// then repairs each child.  Exposed separately so the swap/repair mechanics
// can be exercised without randomness in the cut choice.
inline std::pair<Individual, Individual> crossover_at(const Individual& p1,
                                                      const Individual& p2,
                                                      std::int32_t x1,
                                                      std::int32_t x2,
                                                      const Network& net,
                                                      rng_t& rng) {
  const auto k = static_cast<std::int32_t>(p1.genes.size());
  if (static_cast<std::int32_t>(p2.genes.size()) != k)
    throw std::invalid_argument("crossover: parents must have equal length");
  if (!(1 <= x1 && x1 < x2 && x2 <= k))
    throw std::invalid_argument("crossover: cut points must satisfy 1 <= x1 < x2 <= k");
  std::vector<node_id> g1 = p1.genes, g2 = p2.genes;
  for (std::int32_t i = x1 - 1; i <= x2 - 1; ++i)
    std::swap(g1[static_cast<std::size_t>(i)], g2[static_cast<std::size_t>(i)]);
  Individual c1 = repair(std::move(g1), net, rng);
  Individual c2 = repair(std::move(g2), net, rng);
  if (c1.genes == p1.genes) c1.fitness = p1.fitness;
  if (c2.genes == p2.genes) c2.fitness = p2.fitness;
  return {std::move(c1), std::move(c2)};
}

// Two-point crossover: with probability pc, draws cut points uniformly over
// {(x1, x2) : 1 <= x1 < x2 <= k}, swaps the inclusive range and repairs the
// children; otherwise returns copies of the parents (caches intact).
// Genomes of length < 2 admit no cut pair and always pass through unchanged.
inline std::pair<Individual, Individual> two_point_crossover(
    const Individual& p1, const Individual& p2, double pc, const Network& net,
    rng_t& rng) {
  if (!(pc >= 0.0 && pc <= 1.0))
    throw std::invalid_argument("crossover: pc must lie in [0, 1]");
  const auto k = static_cast<std::int32_t>(p1.genes.size());
  if (static_cast<std::int32_t>(p2.genes.size()) != k)
    throw std::invalid_argument("crossover: parents must have equal length");
  if (k < 2 || !(rand_u01(rng) < pc)) return {p1, p2};
  // Two distinct values in [1, k], sorted: uniform over cut pairs.
  const auto a = static_cast<std::int32_t>(rand_index(rng, static_cast<std::uint64_t>(k)));
  auto b = static_cast<std::int32_t>(rand_index(rng, static_cast<std::uint64_t>(k - 1)));
  if (b >= a) ++b;
  return crossover_at(p1, p2, std::min(a, b) + 1, std::max(a, b) + 1, net, rng);
}

// Per-gene mutation: each gene is independently replaced, with probability
// pm, by a uniformly random node not currently in the genome.  When every
// node is already present the gene is left unchanged.
inline Individual mutate(const Individual& parent, double pm,
                         const Network& net, rng_t& rng) {
  if (!(pm >= 0.0 && pm <= 1.0))
    throw std::invalid_argument("mutation: pm must lie in [0, 1]");
  detail::check_genome(net, parent.genes, "mutation");
  Individual child = parent;
  auto& mask = detail::genome_mask();
  mask.begin(static_cast<std::size_t>(net.node_count()));
  for (const node_id g : child.genes) mask.add(g);
  auto present = static_cast<std::int32_t>(child.genes.size());
  bool changed = false;
  for (auto& g : child.genes) {
    if (!(rand_u01(rng) < pm)) continue;
    if (present >= net.node_count()) continue; // no candidate exists
    const node_id fresh = detail::draw_absent_node(net, mask, present, rng);
    // The replaced value stays excluded for later positions; this keeps the
    // exclusion set equal to "values that appeared in the genome so far",
    // which is a superset of the current members and preserves distinctness.
    g = fresh;
    mask.add(fresh);
    ++present;
    changed = true;
  }
  if (changed) child.fitness.reset();
  return child;
}

// Warm-start initial population: the base genome holds the k nodes of
// highest degree (ties toward lower id); each member independently replaces
// each gene, with probability 1/2, by a uniformly random neighbour of that
// gene that is not already in the member's genome (genes with no eligible
// neighbour stay).  Requires n >= 2 members and 1 <= k <= |V|.
inline Population init_population(const Network& net, std::int32_t k,
                                  std::int32_t n, rng_t& rng) {
  if (k < 1 || k > net.node_count())
    throw std::invalid_argument("init: need 1 <= k <= node count");
  if (n < 2) throw std::invalid_argument("init: population size must be >= 2");

  std::vector<node_id> order(static_cast<std::size_t>(net.node_count()));
  for (node_id v = 0; v < net.node_count(); ++v)
    order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(), [&](node_id a, node_id b) {
    const auto da = net.degree(a), db = net.degree(b);
    return da != db ? da > db : a < b;
  });
  const std::vector<node_id> base(order.begin(), order.begin() + k);

  Population pop;
  pop.members.reserve(static_cast<std::size_t>(n));
  auto& mask = detail::genome_mask();
  std::vector<node_id> eligible;
  for (std::int32_t i = 0; i < n; ++i) {
    std::vector<node_id> genes = base;
    mask.begin(static_cast<std::size_t>(net.node_count()));
    for (const node_id g : genes) mask.add(g);
    for (auto& g : genes) {
      if (!(rand_u01(rng) < 0.5)) continue;
      eligible.clear();
      for (const node_id nb : net.neighbors(g))
        if (!mask.contains(nb)) eligible.push_back(nb);
      if (eligible.empty()) continue;
      g = eligible[static_cast<std::size_t>(rand_index(rng, eligible.size()))];
      mask.add(g); // the replaced value stays excluded, preserving distinctness
    }
    pop.members.push_back(Individual{std::move(genes), std::nullopt});
  }
  return pop;
}

// Elitist survivor selection: of the parents followed by the offspring,
// keeps the n individuals of highest fitness.  `fitness` lists the values in
// that same order (parents first).  Ties prefer parents over offspring and
// lower index within each group; survivors carry their fitness as cache.
inline Population elitist_select(const Population& parents,
                                 const Population& offspring,
                                 std::span<const double> fitness,
                                 std::int32_t n) {
  const std::size_t total = parents.members.size() + offspring.members.size();
  if (fitness.size() != total)
    throw std::invalid_argument("selection: fitness size must match candidates");
  if (n < 1 || static_cast<std::size_t>(n) > total)
    throw std::invalid_argument("selection: need 1 <= n <= candidate count");
  for (const double f : fitness)
    if (std::isnan(f))
      throw std::invalid_argument("selection: fitness contains NaN");

  std::vector<std::size_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return fitness[a] > fitness[b];
  });

  Population next;
  next.owner = parents.owner;
  next.members.reserve(static_cast<std::size_t>(n));
  const std::size_t np = parents.members.size();
  for (std::int32_t i = 0; i < n; ++i) {
    const std::size_t j = idx[static_cast<std::size_t>(i)];
    Individual ind =
        j < np ? parents.members[j] : offspring.members[j - np];
    ind.fitness = fitness[j];
    next.members.push_back(std::move(ind));
  }
  return next;
}

} // namespace mtefim
