#pragma once

// Independent cascade diffusion: stochastic simulation, Monte Carlo spread
// estimation, and an exact oracle for small graphs.
//
// Determinism contract: every replica draws from its own stream derived from
// (base_seed, replica index), and replica counts are accumulated as exact
// integers.  The estimate therefore depends only on (network, seed set,
// replicas, base_seed) — never on the number of worker threads or on
// scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mtefim/graph.hpp"
#include "mtefim/rng.hpp"

namespace mtefim {

struct DiffusionConfig {
  std::int64_t replicas = 10000;
  std::uint64_t base_seed = 0;
  int workers = 1;
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t replicas = 0;
};

namespace detail {

// Reusable cascade scratch.  `stamp` doubles as the activation flag array:
// a node is active in the current replica iff stamp[v] == epoch, which lets
// replicas reuse the buffer without clearing it.
struct IcWorkspace {
  std::vector<std::int64_t> stamp;
  std::vector<node_id> frontier;
  std::int64_t epoch = 0;

  void reset(std::size_t n) {
    if (stamp.size() < n) stamp.assign(n, -1);
  }
};

inline void check_seed_set(const Network& net, std::span<const node_id> seeds) {
  if (seeds.empty())
    throw std::invalid_argument("diffusion: seed set must be non-empty");
  std::vector<node_id> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= net.node_count())
      throw std::out_of_range("diffusion: seed id " + std::to_string(sorted[i]) +
                              " out of range");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw std::invalid_argument("diffusion: duplicate seed id " +
                                  std::to_string(sorted[i]));
  }
}

// One cascade.  Seeds activate at once; each newly active node gets a single
// chance to activate each currently inactive out-neighbour.  A coin is drawn
// only when the target is inactive at attempt time (skipping coins for
// already-active targets does not change the outcome distribution).
inline std::int32_t run_cascade(const Network& net,
                                std::span<const node_id> seeds, rng_t& rng,
                                IcWorkspace& ws) {
  ws.reset(static_cast<std::size_t>(net.node_count()));
  const std::int64_t epoch = ++ws.epoch;
  ws.frontier.clear();
  for (const node_id s : seeds) {
    ws.stamp[static_cast<std::size_t>(s)] = epoch;
    ws.frontier.push_back(s);
  }
  std::int32_t activated = static_cast<std::int32_t>(seeds.size());
  for (std::size_t head = 0; head < ws.frontier.size(); ++head) {
    const node_id u = ws.frontier[head];
    const auto row = net.neighbors(u);
    for (std::size_t s = 0; s < row.size(); ++s) {
      const node_id v = row[s];
      if (ws.stamp[static_cast<std::size_t>(v)] == epoch) continue;
      if (rand_u01(rng) < net.slot_probability(u, s)) {
        ws.stamp[static_cast<std::size_t>(v)] = epoch;
        ws.frontier.push_back(v);
        ++activated;
      }
    }
  }
  return activated;
}

} // namespace detail

// Simulates one independent cascade and returns the number of activated
// nodes (seeds included).  Seeds must be distinct, in-range, non-empty.
inline std::int32_t simulate_ic_once(const Network& net,
                                     std::span<const node_id> seeds,
                                     rng_t& rng) {
  detail::check_seed_set(net, seeds);
  detail::IcWorkspace ws;
  std::vector<node_id> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  return detail::run_cascade(net, sorted, rng, ws);
}

// Monte Carlo estimate of the expected spread of `seeds`.  Replica r draws
// from the stream derived from (base_seed, r); counts are accumulated as
// exact integers, so the result is identical for any worker count.
inline SpreadEstimate estimate_spread(const Network& net,
                                      std::span<const node_id> seeds,
                                      const DiffusionConfig& cfg) {
  if (cfg.replicas <= 0)
    throw std::invalid_argument("diffusion: replicas must be positive");
  detail::check_seed_set(net, seeds);
  std::vector<node_id> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());

  const std::int64_t R = cfg.replicas;
  const int workers = std::max(1, cfg.workers);

  auto run_range = [&](std::int64_t lo, std::int64_t hi, std::uint64_t& sum,
                       std::uint64_t& sum_sq) {
    detail::IcWorkspace ws;
    std::uint64_t s = 0, sq = 0;
    for (std::int64_t r = lo; r < hi; ++r) {
      rng_t rng = make_rng(cfg.base_seed, stream::replica, static_cast<std::uint64_t>(r));
      const auto count = static_cast<std::uint64_t>(
          detail::run_cascade(net, sorted, rng, ws));
      s += count;
      sq += count * count;
    }
    sum = s;
    sum_sq = sq;
  };

  std::uint64_t sum = 0, sum_sq = 0;
  if (workers == 1 || R < 2 * workers) {
    run_range(0, R, sum, sum_sq);
  } else {
    std::vector<std::uint64_t> sums(static_cast<std::size_t>(workers), 0);
    std::vector<std::uint64_t> sqs(static_cast<std::size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = R * w / workers;
      const std::int64_t hi = R * (w + 1) / workers;
      pool.emplace_back([&, w, lo, hi] {
        run_range(lo, hi, sums[static_cast<std::size_t>(w)],
                  sqs[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& t : pool) t.join();
    for (int w = 0; w < workers; ++w) {
      sum += sums[static_cast<std::size_t>(w)];
      sum_sq += sqs[static_cast<std::size_t>(w)];
    }
  }

  SpreadEstimate est;
  est.replicas = R;
  const long double mean = static_cast<long double>(sum) / R;
  est.mean = static_cast<double>(mean);
  if (R > 1) {
    long double var = (static_cast<long double>(sum_sq) -
                       static_cast<long double>(sum) * sum / R) /
                      (R - 1);
    if (var < 0) var = 0; // guard against rounding
    est.std_error = static_cast<double>(std::sqrt(var / R));
  }
  return est;
}

// Exact expected spread by live-edge enumeration.  Each undirected edge (or
// each arc, for directed networks) is an independent coin; the expected
// spread is the coin-weighted average of the number of nodes reachable from
// the seeds over live edges.  Cost is O(2^|coins| * (|V| + |E|)); refuses
// networks with more than 20 coins.
inline double exact_spread_small(const Network& net,
                                 std::span<const node_id> seeds) {
  detail::check_seed_set(net, seeds);

  struct Coin {
    node_id u, v;
    double p;
  };
  std::vector<Coin> coins;
  for (node_id u = 0; u < net.node_count(); ++u) {
    const auto row = net.neighbors(u);
    for (std::size_t s = 0; s < row.size(); ++s) {
      const node_id v = row[s];
      if (!net.directed() && v < u) continue; // one coin per undirected pair
      coins.push_back({u, v, net.slot_probability(u, s)});
    }
  }
  if (coins.size() > 20)
    throw std::invalid_argument(
        "exact_spread_small: more than 20 edge coins (got " +
        std::to_string(coins.size()) + ")");

  const std::size_t m = coins.size();
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<std::int8_t> active(n);
  std::vector<node_id> queue;
  std::vector<std::vector<std::pair<std::size_t, node_id>>> live_adj(n);

  long double total = 0.0L;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    long double weight = 1.0L;
    for (std::size_t e = 0; e < m; ++e)
      weight *= (mask >> e) & 1 ? coins[e].p : 1.0 - coins[e].p;
    if (weight == 0.0L) continue;

    for (auto& row : live_adj) row.clear();
    for (std::size_t e = 0; e < m; ++e) {
      if (!((mask >> e) & 1)) continue;
      live_adj[static_cast<std::size_t>(coins[e].u)].emplace_back(e, coins[e].v);
      if (!net.directed())
        live_adj[static_cast<std::size_t>(coins[e].v)].emplace_back(e, coins[e].u);
    }
    std::fill(active.begin(), active.end(), 0);
    queue.clear();
    for (const node_id s : seeds) {
      active[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
    std::size_t reached = seeds.size();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (const auto& [e, v] : live_adj[static_cast<std::size_t>(queue[head])]) {
        (void)e;
        if (!active[static_cast<std::size_t>(v)]) {
          active[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
          ++reached;
        }
      }
    }
    total += weight * static_cast<long double>(reached);
  }
  return static_cast<double>(total);
}

} // namespace mtefim
