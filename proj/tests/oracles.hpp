#pragma once

// Test-side reference implementations.  Everything here is deliberately
// written along different code paths than the library (dense scans, literal
// formula transcriptions, Gaussian elimination) so that agreement between
// the two is evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mtefim/diffusion.hpp"
#include "mtefim/graph.hpp"
#include "mtefim/rng.hpp"

namespace oracles {

using mtefim::Network;
using mtefim::node_id;
using mtefim::rng_t;

// --------------------------------------------------------------------------
// Random test-graph factory.
// --------------------------------------------------------------------------

struct RandomGraphOptions {
  std::int32_t min_nodes = 4;
  std::int32_t max_nodes = 12;
  double edge_prob = 0.3;
  bool directed = false;
  bool per_edge_probs = false; // else a uniform value drawn per graph
  std::int32_t max_edges = -1; // resample until |E| <= this when >= 0
};

inline Network random_graph(rng_t& rng, const RandomGraphOptions& opts = {}) {
  for (;;) {
    const auto n = static_cast<std::int32_t>(
        opts.min_nodes +
        mtefim::rand_index(rng, static_cast<std::uint64_t>(
                                    opts.max_nodes - opts.min_nodes + 1)));
    std::vector<std::tuple<node_id, node_id, double>> edges;
    for (node_id u = 0; u < n; ++u) {
      for (node_id v = opts.directed ? 0 : u + 1; v < n; ++v) {
        if (u == v) continue;
        if (mtefim::rand_u01(rng) < opts.edge_prob) {
          const double p =
              opts.per_edge_probs ? 0.05 + 0.9 * mtefim::rand_u01(rng) : -1.0;
          edges.emplace_back(u, v, p);
        }
      }
    }
    if (opts.max_edges >= 0 &&
        static_cast<std::int32_t>(edges.size()) > opts.max_edges)
      continue;
    const double uniform_p = 0.05 + 0.9 * mtefim::rand_u01(rng);
    return Network::build(n, edges, opts.directed, uniform_p);
  }
}

inline std::vector<node_id> random_seed_set(rng_t& rng, std::int32_t n,
                                            std::int32_t k) {
  return mtefim::sample_distinct_positions(rng, n, k);
}

// --------------------------------------------------------------------------
// Proxy oracles: literal formula transcriptions over dense all-pairs scans.
// --------------------------------------------------------------------------

inline double edv_oracle(const Network& net, std::span<const node_id> seeds,
                         double p) {
  std::set<node_id> seed_set(seeds.begin(), seeds.end());
  double value = static_cast<double>(seeds.size());
  for (node_id b = 0; b < net.node_count(); ++b) {
    if (seed_set.count(b)) continue;
    std::int32_t delta = 0;
    for (const node_id a : seeds)
      if (net.has_edge(a, b)) ++delta;
    if (delta > 0) value += 1.0 - std::pow(1.0 - p, delta);
  }
  return value;
}

inline double tis_oracle(const Network& net, std::span<const node_id> seeds) {
  std::set<node_id> seed_set(seeds.begin(), seeds.end());
  const auto n = net.node_count();
  auto prob = [&](node_id u, node_id v) { return net.probability_between(u, v); };
  auto alpha = [&](node_id b) {
    double s = 0.0;
    for (node_id c = 0; c < n; ++c) s += prob(b, c);
    return s;
  };

  double total = 0.0;
  for (const node_id a : seeds) {
    double sigma2 = 1.0;
    for (node_id b = 0; b < n; ++b)
      sigma2 += prob(a, b) * (1.0 + alpha(b) - prob(b, a));
    total += sigma2;
  }
  for (const node_id a : seeds)
    for (const node_id b : seeds)
      if (net.has_edge(a, b)) total -= prob(a, b) * (alpha(b) - prob(b, a));
  for (const node_id a : seeds) {
    for (node_id b = 0; b < n; ++b) {
      if (seed_set.count(b) || !net.has_edge(a, b)) continue;
      for (const node_id c : seeds)
        if (c != a && net.has_edge(b, c)) total -= prob(a, b) * prob(b, c);
    }
  }
  return total;
}

// --------------------------------------------------------------------------
// Exact spread by live-edge enumeration over a dense adjacency matrix.
// --------------------------------------------------------------------------

inline double exact_spread_enum(const Network& net,
                                std::span<const node_id> seeds) {
  struct Coin {
    node_id u, v;
    double p;
  };
  std::vector<Coin> coins;
  for (node_id u = 0; u < net.node_count(); ++u)
    for (node_id v = 0; v < net.node_count(); ++v) {
      if (u == v || !net.has_edge(u, v)) continue;
      if (!net.directed() && v < u) continue;
      coins.push_back({u, v, net.probability_between(u, v)});
    }
  if (coins.size() > 22)
    throw std::invalid_argument("exact_spread_enum: too many coins");

  const auto n = static_cast<std::size_t>(net.node_count());
  long double total = 0.0L;
  std::vector<char> live(n * n);
  std::vector<char> active(n);
  std::vector<node_id> queue;
  for (std::uint64_t mask = 0; mask < (1ull << coins.size()); ++mask) {
    long double w = 1.0L;
    for (std::size_t e = 0; e < coins.size(); ++e)
      w *= (mask >> e) & 1 ? coins[e].p : 1.0 - coins[e].p;
    if (w == 0.0L) continue;
    std::fill(live.begin(), live.end(), 0);
    for (std::size_t e = 0; e < coins.size(); ++e) {
      if (!((mask >> e) & 1)) continue;
      live[static_cast<std::size_t>(coins[e].u) * n +
           static_cast<std::size_t>(coins[e].v)] = 1;
      if (!net.directed())
        live[static_cast<std::size_t>(coins[e].v) * n +
             static_cast<std::size_t>(coins[e].u)] = 1;
    }
    std::fill(active.begin(), active.end(), 0);
    queue.clear();
    for (const node_id s : seeds) {
      active[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
    std::size_t reached = seeds.size();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = static_cast<std::size_t>(queue[head]);
      for (std::size_t v = 0; v < n; ++v) {
        if (live[u * n + v] && !active[v]) {
          active[v] = 1;
          queue.push_back(static_cast<node_id>(v));
          ++reached;
        }
      }
    }
    total += w * static_cast<long double>(reached);
  }
  return static_cast<double>(total);
}

// --------------------------------------------------------------------------
// Exhaustive and greedy selection references.
// --------------------------------------------------------------------------

template <typename SpreadFn>
inline std::pair<double, std::vector<node_id>> best_set_exhaustive(
    const Network& net, std::int32_t k, SpreadFn&& spread) {
  const auto n = net.node_count();
  std::vector<node_id> current, best_set;
  double best_value = -1.0;
  // Enumerate k-combinations in lexicographic order.
  std::vector<std::int32_t> idx(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    current.assign(idx.begin(), idx.end());
    const double value = spread(std::span<const node_id>(current));
    if (value > best_value) {
      best_value = value;
      best_set = current;
    }
    std::int32_t pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (std::int32_t i = pos + 1; i < k; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i) - 1] + 1;
  }
  return {best_value, best_set};
}

// Naive greedy: k passes of full marginal re-evaluation; ties toward the
// lower id.
template <typename SpreadFn>
inline std::vector<node_id> naive_greedy(const Network& net, std::int32_t k,
                                         SpreadFn&& spread) {
  std::vector<node_id> chosen;
  double current = 0.0;
  std::vector<node_id> probe;
  for (std::int32_t round = 0; round < k; ++round) {
    node_id best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (node_id v = 0; v < net.node_count(); ++v) {
      if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
      probe = chosen;
      probe.push_back(v);
      const double gain = spread(std::span<const node_id>(probe)) - current;
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    chosen.push_back(best);
    current += best_gain;
  }
  return chosen;
}

// --------------------------------------------------------------------------
// PageRank reference: dense linear solve of the stationary equations.
// --------------------------------------------------------------------------

inline std::vector<double> pagerank_dense(const Network& net, double damping) {
  const auto n = static_cast<std::size_t>(net.node_count());
  // x = (1-d)/n * 1 + d * (P^T x + dangling(x)/n * 1)
  // Rearranged into (I - d*M) x = (1-d)/n * 1 with M folding both the
  // link matrix and the dangling redistribution.
  std::vector<double> m(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    const auto deg = net.degree(static_cast<node_id>(u));
    if (deg == 0) {
      for (std::size_t v = 0; v < n; ++v)
        m[v * n + u] = 1.0 / static_cast<double>(n);
    } else {
      for (const node_id v : net.neighbors(static_cast<node_id>(u)))
        m[static_cast<std::size_t>(v) * n + u] = 1.0 / static_cast<double>(deg);
    }
  }
  std::vector<double> a(n * n, 0.0), b(n, (1.0 - damping) / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i * n + j] = (i == j ? 1.0 : 0.0) - damping * m[i * n + j];
  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

} // namespace oracles
