#pragma once

// Multi-transformation evolutionary solver.
//
// The solver maintains one population per transformation (proxy fitness) and
// evolves all of them in lock-step generations.  Each generation it
// re-estimates how similar the populations currently are (the relationship
// matrix) from the parent populations, breeds offspring independently per
// population, then lets each population import a random slice of its most
// related peer's freshly bred offspring with a probability equal to that
// relationship, and only then evaluates the offspring and applies elitist
// survivor selection.
// Because imports replace offspring that have not been evaluated yet, a
// generation costs exactly N evaluations per population whether or not a
// transfer fired.  Every transformation owns an equal share of the global
// evaluation budget; a population stops evolving (but keeps donating) once a
// further generation would not fit in its share.
//
// Randomness is split into named per-population streams (init, variation,
// transfer), so disabling transfer does not shift any other draw and two
// runs that differ only in the transfer flag stay identical until the first
// transfer would have fired.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtefim/diffusion.hpp"
#include "mtefim/evo.hpp"
#include "mtefim/graph.hpp"
#include "mtefim/proxy.hpp"
#include "mtefim/rng.hpp"

namespace mtefim {

// Pairwise population-overlap ratios in [0, 1]; symmetric, zero diagonal.
struct RelationshipMatrix {
  std::int32_t size = 0;
  std::vector<double> values; // row-major size*size

  double at(std::int32_t i, std::int32_t j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) +
                  static_cast<std::size_t>(j)];
  }
  double& at(std::int32_t i, std::int32_t j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) +
                  static_cast<std::size_t>(j)];
  }
};

// Mean pairwise genome overlap between every pair of populations:
// r[i][j] = (sum over all member pairs of |genome intersection|) / (k*N*N).
// Populations must share the genome length k and the population size N.
inline RelationshipMatrix estimate_relationship(std::span<const Population> pops,
                                                std::int32_t k) {
  const auto S = static_cast<std::int32_t>(pops.size());
  if (S < 1) throw std::invalid_argument("relationship: need at least one population");
  const auto N = static_cast<std::int32_t>(pops[0].members.size());
  if (N < 1) throw std::invalid_argument("relationship: empty population");
  for (const auto& pop : pops) {
    if (static_cast<std::int32_t>(pop.members.size()) != N)
      throw std::invalid_argument("relationship: population sizes differ");
    for (const auto& m : pop.members)
      if (static_cast<std::int32_t>(m.genes.size()) != k)
        throw std::invalid_argument("relationship: genome length mismatch");
  }

  // Pre-sort genomes once; intersections then cost O(k) per pair.
  std::vector<std::vector<std::vector<node_id>>> sorted(
      static_cast<std::size_t>(S));
  for (std::int32_t i = 0; i < S; ++i) {
    sorted[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(N));
    for (const auto& m : pops[static_cast<std::size_t>(i)].members) {
      auto g = m.genes;
      std::sort(g.begin(), g.end());
      sorted[static_cast<std::size_t>(i)].push_back(std::move(g));
    }
  }
  auto overlap = [](const std::vector<node_id>& a, const std::vector<node_id>& b) {
    std::int64_t c = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) ++i;
      else if (a[i] > b[j]) ++j;
      else { ++c; ++i; ++j; }
    }
    return c;
  };

  RelationshipMatrix r;
  r.size = S;
  r.values.assign(static_cast<std::size_t>(S) * static_cast<std::size_t>(S), 0.0);
  const double denom = static_cast<double>(k) * N * N;
  for (std::int32_t i = 0; i < S; ++i) {
    for (std::int32_t j = i + 1; j < S; ++j) {
      std::int64_t total = 0;
      for (const auto& a : sorted[static_cast<std::size_t>(i)])
        for (const auto& b : sorted[static_cast<std::size_t>(j)])
          total += overlap(a, b);
      const double rij = static_cast<double>(total) / denom;
      r.at(i, j) = rij;
      r.at(j, i) = rij;
    }
  }
  return r;
}

// One attempted knowledge transfer (target population i importing from its
// most related peer).  `replaced` is 0 unless `fired`.
struct TransferEvent {
  std::int32_t generation = 0;
  std::int32_t target = 0;
  std::int32_t source = 0;
  double relationship = 0.0;
  double u = 0.0; // the uniform draw compared against `relationship`
  std::int32_t count_considered = 0; // floor(N * relationship)
  bool fired = false;
  std::int32_t replaced = 0;
};

// Transfer pass over all active targets (ascending index).  For target i the
// source is the peer with the largest relationship r (ties toward the lower
// index).  With probability r the target's offspring receives floor(N*r)
// distinct uniformly random members of the source pool, copied into
// floor(N*r) distinct uniformly random slots with their fitness caches
// cleared, so they are scored on the target's own transformation in the
// regular offspring evaluation pass.  Sampling donors uniformly (rather
// than by fitness) keeps the imports distributed like the source's own
// offspring, which is what makes the mixed offspring distribution of the
// receiving population a convex blend of the two search distributions.
// `rngs` holds one stream per target.
inline std::vector<TransferEvent> transfer(
    std::vector<Population>& offspring, std::span<const Population> donors,
    std::span<const char> target_active, const RelationshipMatrix& r,
    std::span<rng_t> rngs, std::int32_t generation) {
  const auto S = static_cast<std::int32_t>(offspring.size());
  if (S != r.size || donors.size() != static_cast<std::size_t>(S) ||
      target_active.size() != static_cast<std::size_t>(S) ||
      rngs.size() != static_cast<std::size_t>(S))
    throw std::invalid_argument("transfer: inconsistent argument sizes");

  std::vector<TransferEvent> events;
  if (S < 2) return events;
  for (std::int32_t i = 0; i < S; ++i) {
    if (!target_active[static_cast<std::size_t>(i)]) continue;
    auto& target = offspring[static_cast<std::size_t>(i)];
    const auto N = static_cast<std::int32_t>(target.members.size());

    std::int32_t best_j = -1;
    for (std::int32_t j = 0; j < S; ++j) {
      if (j == i) continue;
      if (best_j < 0 || r.at(i, j) > r.at(i, best_j)) best_j = j;
    }
    TransferEvent ev;
    ev.generation = generation;
    ev.target = i;
    ev.source = best_j;
    ev.relationship = r.at(i, best_j);
    ev.u = rand_u01(rngs[static_cast<std::size_t>(i)]);
    ev.count_considered = static_cast<std::int32_t>(
        std::floor(static_cast<double>(N) * ev.relationship));
    ev.fired = ev.u < ev.relationship && ev.count_considered >= 1;

    if (ev.fired) {
      const auto& donor = donors[static_cast<std::size_t>(best_j)];
      const auto M = static_cast<std::int32_t>(donor.members.size());
      if (ev.count_considered > M)
        throw std::invalid_argument("transfer: donor population too small");
      const auto picks = sample_distinct_positions(
          rngs[static_cast<std::size_t>(i)], M, ev.count_considered);
      const auto slots = sample_distinct_positions(
          rngs[static_cast<std::size_t>(i)], N, ev.count_considered);
      for (std::int32_t t = 0; t < ev.count_considered; ++t) {
        Individual imported =
            donor.members[static_cast<std::size_t>(picks[static_cast<std::size_t>(t)])];
        imported.fitness.reset(); // must be re-evaluated on the target proxy
        target.members[static_cast<std::size_t>(slots[static_cast<std::size_t>(t)])] =
            std::move(imported);
      }
      ev.replaced = ev.count_considered;
    }
    events.push_back(ev);
  }
  return events;
}

struct SolverConfig {
  std::int32_t seed_set_size = 10;        // k
  std::int32_t population_size = 100;     // N per transformation
  std::int64_t max_function_evaluations = 0; // 0 => 5000 per transformation
  double crossover_prob = 1.0;
  double mutation_prob = -1.0; // negative => 1/k
  bool transfer_enabled = true;
  std::uint64_t base_seed = 0;
};

// Per-generation snapshot: evaluation counters, best fitness per population,
// the relationship values used this generation (upper triangle, row-major),
// and how many immigrants each population received.
struct TraceRow {
  std::int32_t generation = 0;
  std::vector<std::int64_t> evals;
  std::vector<double> best;
  std::vector<double> relationship; // r(i, j) for i < j
  std::vector<std::int32_t> transferred;
};

struct RunTrace {
  std::vector<std::string> names; // transformation names, index order
  std::vector<TraceRow> rows;     // generation 0 = state right after init
  std::vector<TransferEvent> events;
};

struct RunResult {
  std::vector<Individual> best;              // per transformation
  std::vector<Transformation> transformations; // with final budget counters
  RunTrace trace;
};

namespace detail {

inline std::int32_t best_member_index(const Population& pop) {
  std::int32_t best = 0;
  for (std::int32_t i = 1; i < static_cast<std::int32_t>(pop.members.size()); ++i) {
    const double a = *pop.members[static_cast<std::size_t>(i)].fitness;
    const double b = *pop.members[static_cast<std::size_t>(best)].fitness;
    if (a > b) best = i;
  }
  return best;
}

inline void format_double(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

} // namespace detail

// Runs the multi-transformation solver.  Returns the best individual per
// transformation (under that transformation's own proxy) plus the full
// per-generation trace.  Deterministic given cfg.base_seed.
inline RunResult run(const Network& net,
                     std::span<const Transformation> transformations,
                     const SolverConfig& cfg) {
  const auto S = static_cast<std::int32_t>(transformations.size());
  if (S < 1) throw std::invalid_argument("solver: need at least one transformation");
  const auto k = cfg.seed_set_size;
  const auto N = cfg.population_size;
  if (k < 1 || k > net.node_count())
    throw std::invalid_argument("solver: need 1 <= k <= node count");
  if (N < 2) throw std::invalid_argument("solver: population size must be >= 2");
  const double pc = cfg.crossover_prob;
  if (!(pc >= 0.0 && pc <= 1.0))
    throw std::invalid_argument("solver: crossover probability must lie in [0, 1]");
  const double pm = cfg.mutation_prob < 0.0
                        ? 1.0 / static_cast<double>(k)
                        : cfg.mutation_prob;
  if (!(pm >= 0.0 && pm <= 1.0))
    throw std::invalid_argument("solver: mutation probability must lie in [0, 1]");
  const std::int64_t mfe = cfg.max_function_evaluations > 0
                               ? cfg.max_function_evaluations
                               : 5000ll * S;
  const std::int64_t budget = mfe / S; // equal share per transformation
  if (budget < N)
    throw std::invalid_argument(
        "solver: budget per transformation is below one population evaluation");

  std::vector<Transformation> trans(transformations.begin(), transformations.end());
  for (std::int32_t i = 0; i < S; ++i) {
    trans[static_cast<std::size_t>(i)].eval_budget = budget;
    trans[static_cast<std::size_t>(i)].eval_count = 0;
  }

  std::vector<rng_t> var_rngs, xfer_rngs;
  for (std::int32_t i = 0; i < S; ++i) {
    var_rngs.push_back(make_rng(cfg.base_seed, stream::variation,
                                static_cast<std::uint64_t>(i)));
    xfer_rngs.push_back(make_rng(cfg.base_seed, stream::transfer,
                                 static_cast<std::uint64_t>(i)));
  }

  auto evaluate_missing = [&](Population& pop, std::int32_t i) {
    for (auto& m : pop.members) {
      if (m.fitness) continue;
      m.fitness = evaluate_proxy(net, trans[static_cast<std::size_t>(i)].kind,
                                 m.genes);
      ++trans[static_cast<std::size_t>(i)].eval_count;
    }
  };

  std::vector<Population> pops;
  pops.reserve(static_cast<std::size_t>(S));
  for (std::int32_t i = 0; i < S; ++i) {
    rng_t init_rng = make_rng(cfg.base_seed, stream::init,
                              static_cast<std::uint64_t>(i));
    Population pop = init_population(net, k, N, init_rng);
    pop.owner = i;
    pops.push_back(std::move(pop));
  }
  for (std::int32_t i = 0; i < S; ++i) evaluate_missing(pops[static_cast<std::size_t>(i)], i);

  RunTrace trace;
  for (std::int32_t i = 0; i < S; ++i)
    trace.names.emplace_back(trans[static_cast<std::size_t>(i)].name());

  auto record_row = [&](std::int32_t generation, const RelationshipMatrix& r,
                        const std::vector<std::int32_t>& transferred) {
    TraceRow row;
    row.generation = generation;
    for (std::int32_t i = 0; i < S; ++i) {
      row.evals.push_back(trans[static_cast<std::size_t>(i)].eval_count);
      const auto& pop = pops[static_cast<std::size_t>(i)];
      row.best.push_back(
          *pop.members[static_cast<std::size_t>(detail::best_member_index(pop))]
               .fitness);
    }
    for (std::int32_t i = 0; i < S; ++i)
      for (std::int32_t j = i + 1; j < S; ++j)
        row.relationship.push_back(r.at(i, j));
    row.transferred = transferred;
    trace.rows.push_back(std::move(row));
  };

  record_row(0, estimate_relationship(pops, k),
             std::vector<std::int32_t>(static_cast<std::size_t>(S), 0));

  std::int32_t generation = 0;
  for (;;) {
    std::vector<char> active(static_cast<std::size_t>(S), 0);
    bool any_active = false;
    for (std::int32_t i = 0; i < S; ++i) {
      const auto& t = trans[static_cast<std::size_t>(i)];
      active[static_cast<std::size_t>(i)] = t.eval_count + N <= t.eval_budget;
      any_active |= active[static_cast<std::size_t>(i)] != 0;
    }
    if (!any_active) break;
    ++generation;

    const RelationshipMatrix r = estimate_relationship(pops, k);

    // Breed offspring per active population.  Evaluation is deferred until
    // after the transfer pass, so imports land in not-yet-evaluated slots
    // and each generation charges exactly N evaluations per transformation.
    std::vector<Population> offspring(static_cast<std::size_t>(S));
    for (std::int32_t i = 0; i < S; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      const auto& parents = pops[static_cast<std::size_t>(i)];
      auto& rng = var_rngs[static_cast<std::size_t>(i)];
      Population off;
      off.owner = i;
      off.members.reserve(static_cast<std::size_t>(N));
      for (std::int32_t j = 0; j + 1 < N; j += 2) {
        auto [c1, c2] = two_point_crossover(
            parents.members[static_cast<std::size_t>(j)],
            parents.members[static_cast<std::size_t>(j) + 1], pc, net, rng);
        off.members.push_back(mutate(c1, pm, net, rng));
        off.members.push_back(mutate(c2, pm, net, rng));
      }
      if (N % 2 == 1)
        off.members.push_back(
            mutate(parents.members[static_cast<std::size_t>(N) - 1], pm, net, rng));
      for (auto& m : off.members) m.fitness.reset();
      offspring[static_cast<std::size_t>(i)] = std::move(off);
    }

    // Knowledge transfer.  Donors are snapshots of this generation's freshly
    // bred offspring taken before any import (a stopped population, which
    // breeds nothing, donates its final members instead), so simultaneous
    // transfers never chain through each other.
    std::vector<std::int32_t> transferred(static_cast<std::size_t>(S), 0);
    if (cfg.transfer_enabled && S > 1) {
      std::vector<Population> donor_pool(static_cast<std::size_t>(S));
      for (std::int32_t j = 0; j < S; ++j)
        donor_pool[static_cast<std::size_t>(j)] =
            active[static_cast<std::size_t>(j)]
                ? offspring[static_cast<std::size_t>(j)]
                : pops[static_cast<std::size_t>(j)];
      auto events = transfer(offspring, donor_pool, active, r,
                             std::span<rng_t>(xfer_rngs), generation);
      for (const auto& ev : events) {
        transferred[static_cast<std::size_t>(ev.target)] = ev.replaced;
        trace.events.push_back(ev);
      }
    }

    // Evaluate every offspring member (including imports) on its own
    // transformation, then apply elitist survivor selection.
    for (std::int32_t i = 0; i < S; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      evaluate_missing(offspring[static_cast<std::size_t>(i)], i);
      const auto& parents = pops[static_cast<std::size_t>(i)];
      const auto& off = offspring[static_cast<std::size_t>(i)];
      std::vector<double> fitness;
      fitness.reserve(parents.members.size() + off.members.size());
      for (const auto& m : parents.members) fitness.push_back(*m.fitness);
      for (const auto& m : off.members) fitness.push_back(*m.fitness);
      pops[static_cast<std::size_t>(i)] = elitist_select(parents, off, fitness, N);
    }

    record_row(generation, r, transferred);
  }

  RunResult result;
  for (std::int32_t i = 0; i < S; ++i) {
    const auto& pop = pops[static_cast<std::size_t>(i)];
    result.best.push_back(
        pop.members[static_cast<std::size_t>(detail::best_member_index(pop))]);
  }
  result.transformations = std::move(trans);
  result.trace = std::move(trace);
  return result;
}

// ---------------------------------------------------------------------------
// Final seed-set selection across transformations.
// ---------------------------------------------------------------------------

struct SossReport {
  std::vector<std::vector<double>> values; // [candidate][transformation]
  std::vector<std::vector<double>> ranks;  // rank 1 = best, ties averaged
  std::vector<double> preferences;
  std::vector<double> composite; // preference-weighted rank sum
  std::int32_t chosen = -1;
};

// Rank-based solution selection: evaluates every candidate under every
// transformation, ranks candidates per transformation (rank 1 = highest
// value; exact-value ties share the average of their positions), and picks
// the candidate with the smallest preference-weighted rank sum (ties toward
// the lower candidate index).  Empty `preferences` means uniform 1/S.
inline SossReport soss_report(const Network& net,
                              std::span<const Individual> candidates,
                              std::span<const Transformation> transformations,
                              std::span<const double> preferences = {}) {
  const auto C = static_cast<std::int32_t>(candidates.size());
  const auto S = static_cast<std::int32_t>(transformations.size());
  if (C < 1) throw std::invalid_argument("soss: no candidates");
  if (S < 1) throw std::invalid_argument("soss: no transformations");
  SossReport rep;
  if (preferences.empty()) {
    rep.preferences.assign(static_cast<std::size_t>(S),
                           1.0 / static_cast<double>(S));
  } else {
    if (preferences.size() != static_cast<std::size_t>(S))
      throw std::invalid_argument("soss: need one preference per transformation");
    double sum = 0.0;
    for (const double c : preferences) {
      if (!(c > 0.0 && c <= 1.0))
        throw std::invalid_argument("soss: preferences must lie in (0, 1]");
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("soss: preferences must sum to 1");
    rep.preferences.assign(preferences.begin(), preferences.end());
  }

  rep.values.assign(static_cast<std::size_t>(C),
                    std::vector<double>(static_cast<std::size_t>(S), 0.0));
  for (std::int32_t c = 0; c < C; ++c)
    for (std::int32_t j = 0; j < S; ++j)
      rep.values[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] =
          evaluate_proxy(net, transformations[static_cast<std::size_t>(j)].kind,
                         candidates[static_cast<std::size_t>(c)].genes);

  rep.ranks.assign(static_cast<std::size_t>(C),
                   std::vector<double>(static_cast<std::size_t>(S), 0.0));
  for (std::int32_t j = 0; j < S; ++j) {
    std::vector<std::int32_t> order(static_cast<std::size_t>(C));
    for (std::int32_t c = 0; c < C; ++c) order[static_cast<std::size_t>(c)] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) {
                       return rep.values[static_cast<std::size_t>(a)]
                                        [static_cast<std::size_t>(j)] >
                              rep.values[static_cast<std::size_t>(b)]
                                        [static_cast<std::size_t>(j)];
                     });
    std::int32_t pos = 0;
    while (pos < C) {
      std::int32_t end = pos;
      const double v = rep.values[static_cast<std::size_t>(
          order[static_cast<std::size_t>(pos)])][static_cast<std::size_t>(j)];
      while (end < C &&
             rep.values[static_cast<std::size_t>(
                 order[static_cast<std::size_t>(end)])][static_cast<std::size_t>(j)] == v)
        ++end;
      const double avg_rank = (static_cast<double>(pos + 1) + end) / 2.0;
      for (std::int32_t t = pos; t < end; ++t)
        rep.ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]
                 [static_cast<std::size_t>(j)] = avg_rank;
      pos = end;
    }
  }

  rep.composite.assign(static_cast<std::size_t>(C), 0.0);
  for (std::int32_t c = 0; c < C; ++c)
    for (std::int32_t j = 0; j < S; ++j)
      rep.composite[static_cast<std::size_t>(c)] +=
          rep.preferences[static_cast<std::size_t>(j)] *
          rep.ranks[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
  rep.chosen = 0;
  for (std::int32_t c = 1; c < C; ++c)
    if (rep.composite[static_cast<std::size_t>(c)] <
        rep.composite[static_cast<std::size_t>(rep.chosen)])
      rep.chosen = c;
  return rep;
}

inline Individual soss(const Network& net, std::span<const Individual> candidates,
                       std::span<const Transformation> transformations,
                       std::span<const double> preferences = {}) {
  const auto rep = soss_report(net, candidates, transformations, preferences);
  return candidates[static_cast<std::size_t>(rep.chosen)];
}

// Monte Carlo solution selection: estimates every candidate's spread with
// the same configuration (shared replica streams make the comparison
// paired) and picks the highest mean (ties toward the lower index).
inline Individual mcss(const Network& net, std::span<const Individual> candidates,
                       const DiffusionConfig& cfg,
                       std::vector<SpreadEstimate>* estimates_out = nullptr) {
  if (candidates.empty()) throw std::invalid_argument("mcss: no candidates");
  std::int32_t best = 0;
  std::vector<SpreadEstimate> estimates;
  estimates.reserve(candidates.size());
  for (const auto& c : candidates)
    estimates.push_back(estimate_spread(net, c.genes, cfg));
  for (std::int32_t i = 1; i < static_cast<std::int32_t>(candidates.size()); ++i)
    if (estimates[static_cast<std::size_t>(i)].mean >
        estimates[static_cast<std::size_t>(best)].mean)
      best = i;
  if (estimates_out) *estimates_out = std::move(estimates);
  return candidates[static_cast<std::size_t>(best)];
}

// ---------------------------------------------------------------------------
// Trace serialisation.
// ---------------------------------------------------------------------------

// Plot-ready CSV: one row per generation with evaluation counters, best
// fitness per transformation, the relationship upper triangle, and received
// immigrant counts.
inline void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  const auto S = static_cast<std::int32_t>(trace.names.size());
  out << "generation";
  for (std::int32_t i = 0; i < S; ++i)
    out << ",evals_" << trace.names[static_cast<std::size_t>(i)];
  for (std::int32_t i = 0; i < S; ++i)
    out << ",best_" << trace.names[static_cast<std::size_t>(i)];
  for (std::int32_t i = 0; i < S; ++i)
    for (std::int32_t j = i + 1; j < S; ++j)
      out << ",r_" << trace.names[static_cast<std::size_t>(i)] << '_'
          << trace.names[static_cast<std::size_t>(j)];
  for (std::int32_t i = 0; i < S; ++i)
    out << ",transferred_" << trace.names[static_cast<std::size_t>(i)];
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.generation;
    for (const auto e : row.evals) out << ',' << e;
    for (const auto b : row.best) {
      out << ',';
      detail::format_double(out, b);
    }
    for (const auto r : row.relationship) {
      out << ',';
      detail::format_double(out, r);
    }
    for (const auto t : row.transferred) out << ',' << t;
    out << '\n';
  }
}

} // namespace mtefim
