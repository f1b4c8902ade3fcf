#pragma once

// Reference seed-selection methods the evolutionary solver is compared
// against.  All of them are deterministic given their inputs (CELF's Monte
// Carlo mode is deterministic given the diffusion seed).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtefim/diffusion.hpp"
#include "mtefim/graph.hpp"
#include "mtefim/proxy.hpp"
#include "mtefim/solver.hpp"

namespace mtefim {

struct BaselineResult {
  std::string method;
  std::vector<node_id> seeds;
  std::vector<double> scores; // per-seed selection score, where one exists
};

namespace detail {

inline void check_k(const Network& net, std::int32_t k, const char* who) {
  if (k < 1 || k > net.node_count())
    throw std::invalid_argument(std::string(who) + ": need 1 <= k <= node count");
}

} // namespace detail

// The k nodes of highest degree (ties toward lower id).
inline BaselineResult degree_select(const Network& net, std::int32_t k) {
  detail::check_k(net, k, "degree_select");
  std::vector<node_id> order(static_cast<std::size_t>(net.node_count()));
  for (node_id v = 0; v < net.node_count(); ++v)
    order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(), [&](node_id a, node_id b) {
    const auto da = net.degree(a), db = net.degree(b);
    return da != db ? da > db : a < b;
  });
  BaselineResult res;
  res.method = "degree";
  for (std::int32_t i = 0; i < k; ++i) {
    res.seeds.push_back(order[static_cast<std::size_t>(i)]);
    res.scores.push_back(static_cast<double>(net.degree(order[static_cast<std::size_t>(i)])));
  }
  return res;
}

// The k nodes of highest PageRank score (power iteration with uniform
// teleport; dangling mass redistributed uniformly; ties toward lower id).
// Stops when the L1 change drops below `tol`; warns on stderr and keeps the
// last iterate if `max_iter` is reached first.
inline BaselineResult pagerank_select(const Network& net, std::int32_t k,
                                      double damping = 0.85, double tol = 1e-8,
                                      std::int32_t max_iter = 200) {
  detail::check_k(net, k, "pagerank_select");
  if (!(damping >= 0.0 && damping < 1.0))
    throw std::invalid_argument("pagerank_select: damping must lie in [0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("pagerank_select: tol must be positive");
  if (max_iter < 1)
    throw std::invalid_argument("pagerank_select: max_iter must be positive");

  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n, 0.0);
  bool converged = false;
  for (std::int32_t it = 0; it < max_iter; ++it) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (net.degree(static_cast<node_id>(v)) == 0) dangling += x[v];
    const double base =
        (1.0 - damping) / static_cast<double>(n) +
        damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t u = 0; u < n; ++u) {
      const auto deg = net.degree(static_cast<node_id>(u));
      if (deg == 0) continue;
      const double share = damping * x[u] / static_cast<double>(deg);
      for (const node_id v : net.neighbors(static_cast<node_id>(u)))
        next[static_cast<std::size_t>(v)] += share;
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - x[v]);
    x.swap(next);
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    std::cerr << "pagerank_select: no convergence within " << max_iter
              << " iterations; using the last iterate\n";

  std::vector<node_id> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<node_id>(v);
  std::sort(order.begin(), order.end(), [&](node_id a, node_id b) {
    const double sa = x[static_cast<std::size_t>(a)], sb = x[static_cast<std::size_t>(b)];
    return sa != sb ? sa > sb : a < b;
  });
  BaselineResult res;
  res.method = "pagerank";
  for (std::int32_t i = 0; i < k; ++i) {
    res.seeds.push_back(order[static_cast<std::size_t>(i)]);
    res.scores.push_back(x[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
  }
  return res;
}

// Degree discount heuristic for uniform-probability cascades: repeatedly
// takes the node with the highest discounted degree
//   dd(v) = d(v) - 2 t(v) - (d(v) - t(v)) t(v) p
// where t(v) counts already-selected neighbours.  Ties toward lower id.
inline BaselineResult degree_discount_select(const Network& net, std::int32_t k,
                                             double p) {
  detail::check_k(net, k, "degree_discount_select");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("degree_discount_select: p must lie in [0, 1]");
  const auto n = static_cast<std::size_t>(net.node_count());
  std::vector<double> dd(n);
  std::vector<std::int32_t> t(n, 0);
  std::vector<char> selected(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    dd[v] = static_cast<double>(net.degree(static_cast<node_id>(v)));

  BaselineResult res;
  res.method = "sdd";
  for (std::int32_t i = 0; i < k; ++i) {
    node_id pick = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (selected[v]) continue;
      if (pick < 0 || dd[v] > dd[static_cast<std::size_t>(pick)]) pick = static_cast<node_id>(v);
    }
    selected[static_cast<std::size_t>(pick)] = 1;
    res.seeds.push_back(pick);
    res.scores.push_back(dd[static_cast<std::size_t>(pick)]);
    for (const node_id u : net.neighbors(pick)) {
      const auto ui = static_cast<std::size_t>(u);
      if (selected[ui]) continue;
      ++t[ui];
      const double d = static_cast<double>(net.degree(u));
      const double tv = static_cast<double>(t[ui]);
      dd[ui] = d - 2.0 * tv - (d - tv) * tv * p;
    }
  }
  return res;
}

// Spread evaluator used by CELF: maps a seed set to a (possibly estimated)
// expected spread.
using SpreadFn = std::function<double(std::span<const node_id>)>;

// Lazy greedy seed selection (CELF).  Appends k times the node with the
// largest marginal spread gain, re-evaluating stale bounds only when they
// reach the top of the queue.  With a submodular evaluator this selects the
// same set as naive greedy.  Ties (equal gain) prefer the lower id.
inline BaselineResult celf_select(const Network& net, std::int32_t k,
                                  const SpreadFn& spread,
                                  const std::string& method_name = "celf") {
  detail::check_k(net, k, "celf_select");

  struct Entry {
    double gain;
    node_id v;
    std::int32_t round; // |seed set| when gain was computed
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.gain != b.gain) return a.gain < b.gain;
      return a.v > b.v; // lower id pops first among equal gains
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Worse> queue;
  std::vector<node_id> chosen;
  std::vector<node_id> probe;
  for (node_id v = 0; v < net.node_count(); ++v) {
    probe.assign(1, v);
    queue.push(Entry{spread(probe), v, 0});
  }

  BaselineResult res;
  res.method = method_name;
  double current = 0.0; // spread of the empty set
  while (static_cast<std::int32_t>(chosen.size()) < k) {
    Entry top = queue.top();
    queue.pop();
    const auto round = static_cast<std::int32_t>(chosen.size());
    if (top.round != round) {
      probe = chosen;
      probe.push_back(top.v);
      top.gain = spread(probe) - current;
      top.round = round;
      queue.push(top);
      continue;
    }
    chosen.push_back(top.v);
    current += top.gain;
    res.seeds.push_back(top.v);
    res.scores.push_back(top.gain);
  }
  return res;
}

// CELF with the Monte Carlo evaluator.  Estimates share the replica streams
// of `cfg`, which pairs the comparisons and keeps the selection
// deterministic for any worker count.  Emits a runtime warning for large
// networks, where |V| initial estimates are expensive.
inline BaselineResult celf_select(const Network& net, std::int32_t k,
                                  const DiffusionConfig& cfg) {
  if (net.node_count() > 2000)
    std::cerr << "celf_select: " << net.node_count()
              << " nodes x " << cfg.replicas
              << " replicas per estimate; this may take a while\n";
  return celf_select(net, k, [&](std::span<const node_id> set) {
    return estimate_spread(net, set, cfg).mean;
  });
}

// Single-proxy evolutionary baseline: the multi-transformation solver run
// with exactly one transformation (bit-for-bit identical to run() with a
// one-element transformation list and the same configuration).
inline BaselineResult single_transformation_ea(const Network& net,
                                               ProxyKind kind,
                                               const SolverConfig& cfg,
                                               RunResult* full_result = nullptr) {
  Transformation t;
  t.id = 1;
  t.kind = kind;
  RunResult rr = run(net, std::span<const Transformation>(&t, 1), cfg);
  BaselineResult res;
  res.method = kind == ProxyKind::edv ? "edvea" : "tisea";
  res.seeds = rr.best[0].genes;
  std::sort(res.seeds.begin(), res.seeds.end());
  if (full_result) *full_result = std::move(rr);
  return res;
}

} // namespace mtefim
