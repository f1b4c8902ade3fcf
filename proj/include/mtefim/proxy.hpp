#pragma once

// Cheap influence proxies used as fitness functions.
//
// Both proxies approximate the expected cascade size without simulation:
//
//   EDV  — expected one-hop diffusion value: counts the seeds plus, for each
//          non-seed neighbour b of the seed set, the probability
//          1 - (1-p)^delta(b) that at least one of its delta(b) adjacent
//          seeds activates it.  Uses a single uniform probability p.
//
//   TIS  — two-hop influence spread: sums each seed's individual two-hop
//          influence, then subtracts overlap corrections for seeds adjacent
//          to each other and for two-hop paths that land back inside the
//          seed set.  Uses per-edge probabilities when present.
//
// Both are pure read-only functions of (network, seed set) and are safe to
// call concurrently on the same network.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtefim/graph.hpp"

namespace mtefim {

enum class ProxyKind { edv, tis };

inline const char* proxy_name(ProxyKind kind) {
  return kind == ProxyKind::edv ? "edv" : "tis";
}

inline ProxyKind proxy_from_name(const std::string& name) {
  if (name == "edv") return ProxyKind::edv;
  if (name == "tis") return ProxyKind::tis;
  throw std::invalid_argument("unknown proxy '" + name + "'");
}

// One optimisation task: a proxy fitness plus its share of the evaluation
// budget.  The solver owns the counters.
struct Transformation {
  int id = 0;
  ProxyKind kind = ProxyKind::edv;
  std::int64_t eval_budget = 0;
  std::int64_t eval_count = 0;

  const char* name() const { return proxy_name(kind); }
};

namespace detail {

inline void check_proxy_seeds(const Network& net,
                              std::span<const node_id> seeds) {
  if (seeds.empty())
    throw std::invalid_argument("proxy: seed set must be non-empty");
  for (const node_id s : seeds)
    if (s < 0 || s >= net.node_count())
      throw std::out_of_range("proxy: seed id " + std::to_string(s) +
                              " out of range");
}

// Stamp-based membership/counter maps sized to the network, reused across
// calls from the same thread.
struct ProxyWorkspace {
  std::vector<std::int64_t> seed_stamp;
  std::vector<std::int64_t> count_stamp;
  std::vector<std::int32_t> count;
  std::int64_t epoch = 0;

  void begin(std::size_t n) {
    if (seed_stamp.size() < n) {
      seed_stamp.assign(n, -1);
      count_stamp.assign(n, -1);
      count.assign(n, 0);
    }
    ++epoch;
  }
  bool is_seed(node_id v) const {
    return seed_stamp[static_cast<std::size_t>(v)] == epoch;
  }
  void mark_seed(node_id v) { seed_stamp[static_cast<std::size_t>(v)] = epoch; }
  std::int32_t bump(node_id v) {
    const auto i = static_cast<std::size_t>(v);
    if (count_stamp[i] != epoch) {
      count_stamp[i] = epoch;
      count[i] = 0;
    }
    return ++count[i];
  }
  std::int32_t get_count(node_id v) const {
    const auto i = static_cast<std::size_t>(v);
    return count_stamp[i] == epoch ? count[i] : 0;
  }
};

inline ProxyWorkspace& proxy_workspace() {
  thread_local ProxyWorkspace ws;
  return ws;
}

} // namespace detail

// Sum of outgoing propagation probabilities of b: the expected number of
// direct activations if b alone were active.
inline double one_hop_influence(const Network& net, node_id b) {
  const auto row = net.neighbors(b);
  double total = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s)
    total += net.slot_probability(b, s);
  return total;
}

// Expected diffusion value of `seeds` under uniform probability p:
//   |A| + sum over non-seed neighbours b of (1 - (1-p)^delta(b))
// where delta(b) is the number of seeds adjacent to b.  Duplicate seeds are
// rejected; p must lie in [0, 1].
inline double edv(const Network& net, std::span<const node_id> seeds, double p) {
  detail::check_proxy_seeds(net, seeds);
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("edv: probability must lie in [0, 1]");
  auto& ws = detail::proxy_workspace();
  ws.begin(static_cast<std::size_t>(net.node_count()));
  for (const node_id a : seeds) {
    if (ws.is_seed(a))
      throw std::invalid_argument("edv: duplicate seed id " + std::to_string(a));
    ws.mark_seed(a);
  }
  // Accumulate delta(b) over the one-hop neighbourhood, then fold.
  std::vector<node_id> boundary;
  for (const node_id a : seeds) {
    for (const node_id b : net.neighbors(a)) {
      if (ws.is_seed(b)) continue;
      if (ws.bump(b) == 1) boundary.push_back(b);
    }
  }
  double value = static_cast<double>(seeds.size());
  for (const node_id b : boundary)
    value += 1.0 - std::pow(1.0 - p, static_cast<double>(ws.get_count(b)));
  return value;
}

// Two-hop influence spread of `seeds` using the network's probabilities
// (per-edge values when present, else the uniform value).
//
// With alpha(b) = one_hop_influence(b) and p(u,v) the arc probability:
//
//   sigma2(a)  = 1 + sum_{b in N(a)} p(a,b) * (1 + alpha(b) - p(b,a))
//   TIS(A)     = sum_{a in A} sigma2(a)
//              - sum_{a in A} sum_{b in N(a) cap A} p(a,b) * (alpha(b) - p(b,a))
//              - sum_{a in A} sum_{b in N(a) \ A} sum_{c in N(b) cap A, c != a}
//                    p(a,b) * p(b,c)
//
// The second sum removes the one-hop credit double-counted between adjacent
// seeds; the third removes two-hop paths that land on another seed.
inline double tis(const Network& net, std::span<const node_id> seeds) {
  detail::check_proxy_seeds(net, seeds);
  auto& ws = detail::proxy_workspace();
  ws.begin(static_cast<std::size_t>(net.node_count()));
  for (const node_id a : seeds) {
    if (ws.is_seed(a))
      throw std::invalid_argument("tis: duplicate seed id " + std::to_string(a));
    ws.mark_seed(a);
  }

  double value = 0.0;
  for (const node_id a : seeds) {
    const auto row = net.neighbors(a);
    double sigma2 = 1.0;
    double adjacency_correction = 0.0;
    double two_hop_correction = 0.0;
    for (std::size_t s = 0; s < row.size(); ++s) {
      const node_id b = row[s];
      const double pab = net.slot_probability(a, s);
      const double pba = net.probability_between(b, a);
      const double alpha_b = one_hop_influence(net, b);
      sigma2 += pab * (1.0 + alpha_b - pba);
      if (ws.is_seed(b)) {
        adjacency_correction += pab * (alpha_b - pba);
      } else {
        const auto brow = net.neighbors(b);
        for (std::size_t t = 0; t < brow.size(); ++t) {
          const node_id c = brow[t];
          if (c != a && ws.is_seed(c))
            two_hop_correction += pab * net.slot_probability(b, t);
        }
      }
    }
    value += sigma2 - adjacency_correction - two_hop_correction;
  }
  return value;
}

// Evaluates `seeds` under the proxy `kind` on `net`.  EDV uses the network's
// uniform probability; TIS uses per-edge probabilities when present.
inline double evaluate_proxy(const Network& net, ProxyKind kind,
                             std::span<const node_id> seeds) {
  return kind == ProxyKind::edv
             ? edv(net, seeds, net.uniform_probability())
             : tis(net, seeds);
}

} // namespace mtefim
