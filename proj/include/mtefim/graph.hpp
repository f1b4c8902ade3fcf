#pragma once

// Social network container and I/O.
//
// Networks are stored in compressed sparse row form: a flat adjacency array
// plus per-node offsets.  Graphs may be undirected (every edge appears in
// both adjacency rows) or directed.  Propagation probabilities are either a
// single uniform value or a per-edge array parallel to the adjacency slots.
// Node labels from input files are preserved so results can be reported in
// the caller's vocabulary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtefim/rng.hpp"

namespace mtefim {

using node_id = std::int32_t;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Network {
public:
  Network() = default;

  // Builds a network from an explicit edge list.  Edges are deduplicated;
  // self-loops are dropped.  For undirected networks each kept edge occupies
  // one slot in both endpoint rows, with the same probability on both slots.
  // `edges` entries are (u, v, p) with p < 0 meaning "use the uniform value".
  static Network build(std::int32_t node_count,
                       const std::vector<std::tuple<node_id, node_id, double>>& edges,
                       bool directed, double uniform_p,
                       std::vector<std::string> labels = {}) {
    if (node_count < 0)
      throw construction_error("network: negative node count");
    if (!(uniform_p >= 0.0 && uniform_p <= 1.0))
      throw construction_error("network: uniform probability must lie in [0, 1]");
    Network net;
    net.directed_ = directed;
    net.uniform_p_ = uniform_p;
    net.n_ = node_count;

    // Deduplicate on canonical keys.  Later duplicates are ignored.
    std::unordered_map<std::uint64_t, double> seen;
    seen.reserve(edges.size() * 2);
    std::vector<std::tuple<node_id, node_id, double>> kept;
    kept.reserve(edges.size());
    bool any_explicit_p = false;
    for (const auto& [u, v, p] : edges) {
      if (u < 0 || u >= node_count || v < 0 || v >= node_count)
        throw construction_error("network: edge endpoint out of range");
      if (u == v) continue; // self-loops carry no influence; drop them
      node_id a = u, b = v;
      if (!directed && a > b) std::swap(a, b);
      const std::uint64_t key =
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
          static_cast<std::uint32_t>(b);
      if (seen.emplace(key, p).second) {
        kept.emplace_back(a, b, p);
        if (p >= 0.0) any_explicit_p = true;
      }
    }
    if (any_explicit_p) {
      for (const auto& [a, b, p] : kept) {
        (void)a;
        (void)b;
        if (p < 0.0) continue; // sentinel: this edge uses the uniform value
        if (!(p > 0.0 && p <= 1.0))
          throw construction_error(
              "network: per-edge probabilities must lie in (0, 1]");
      }
    }

    std::vector<std::int32_t> deg(static_cast<std::size_t>(node_count), 0);
    for (const auto& [a, b, p] : kept) {
      (void)p;
      ++deg[static_cast<std::size_t>(a)];
      if (!directed) ++deg[static_cast<std::size_t>(b)];
    }
    net.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (std::int32_t v = 0; v < node_count; ++v)
      net.offsets_[static_cast<std::size_t>(v) + 1] =
          net.offsets_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
    const auto slots = static_cast<std::size_t>(net.offsets_.back());
    net.targets_.assign(slots, 0);
    if (any_explicit_p) net.probs_.assign(slots, uniform_p);

    std::vector<std::int64_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
    auto place = [&](node_id from, node_id to, double p) {
      const auto slot = static_cast<std::size_t>(cursor[static_cast<std::size_t>(from)]++);
      net.targets_[slot] = to;
      if (any_explicit_p) net.probs_[slot] = p >= 0.0 ? p : uniform_p;
    };
    for (const auto& [a, b, p] : kept) {
      place(a, b, p);
      if (!directed) place(b, a, p);
    }

    // Sort each adjacency row (probabilities travel with their targets).
    for (std::int32_t v = 0; v < node_count; ++v) {
      const auto lo = static_cast<std::size_t>(net.offsets_[static_cast<std::size_t>(v)]);
      const auto hi = static_cast<std::size_t>(net.offsets_[static_cast<std::size_t>(v) + 1]);
      if (any_explicit_p) {
        std::vector<std::pair<node_id, double>> row;
        row.reserve(hi - lo);
        for (auto s = lo; s < hi; ++s) row.emplace_back(net.targets_[s], net.probs_[s]);
        std::sort(row.begin(), row.end());
        for (auto s = lo; s < hi; ++s) {
          net.targets_[s] = row[s - lo].first;
          net.probs_[s] = row[s - lo].second;
        }
      } else {
        std::sort(net.targets_.begin() + static_cast<std::ptrdiff_t>(lo),
                  net.targets_.begin() + static_cast<std::ptrdiff_t>(hi));
      }
    }

    net.edge_count_ = static_cast<std::int64_t>(kept.size());
    if (labels.empty()) {
      net.labels_.reserve(static_cast<std::size_t>(node_count));
      for (std::int32_t v = 0; v < node_count; ++v)
        net.labels_.push_back(std::to_string(v));
    } else {
      if (labels.size() != static_cast<std::size_t>(node_count))
        throw construction_error("network: label count must match node count");
      net.labels_ = std::move(labels);
    }
    net.label_to_id_.reserve(net.labels_.size());
    for (std::int32_t v = 0; v < node_count; ++v) {
      if (!net.label_to_id_.emplace(net.labels_[static_cast<std::size_t>(v)], v).second)
        throw construction_error("network: duplicate node label '" +
                                 net.labels_[static_cast<std::size_t>(v)] + "'");
    }
    return net;
  }

  std::int32_t node_count() const noexcept { return n_; }

  // Number of stored edges: undirected pairs for undirected networks, arcs
  // for directed ones.
  std::int64_t edge_count() const noexcept { return edge_count_; }

  bool directed() const noexcept { return directed_; }
  bool has_edge_probabilities() const noexcept { return !probs_.empty(); }
  double uniform_probability() const noexcept { return uniform_p_; }

  std::int32_t degree(node_id v) const {
    check_node(v);
    return static_cast<std::int32_t>(offsets_[static_cast<std::size_t>(v) + 1] -
                                     offsets_[static_cast<std::size_t>(v)]);
  }

  // Sorted out-neighbour ids of v.
  std::span<const node_id> neighbors(node_id v) const {
    check_node(v);
    const auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    const auto hi = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {targets_.data() + lo, hi - lo};
  }

  // Probability on the s-th adjacency slot of v (s indexes into neighbors(v)).
  double slot_probability(node_id v, std::size_t s) const {
    const auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    return probs_.empty() ? uniform_p_ : probs_[lo + s];
  }

  // Probability of the arc u -> v, or 0 when the arc does not exist.
  double probability_between(node_id u, node_id v) const {
    const auto row = neighbors(u);
    const auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) return 0.0;
    return slot_probability(u, static_cast<std::size_t>(it - row.begin()));
  }

  bool has_edge(node_id u, node_id v) const {
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  const std::string& label(node_id v) const {
    check_node(v);
    return labels_[static_cast<std::size_t>(v)];
  }

  // Id for a label; throws std::out_of_range for unknown labels.
  node_id id_of(const std::string& lbl) const {
    const auto it = label_to_id_.find(lbl);
    if (it == label_to_id_.end())
      throw std::out_of_range("network: unknown node label '" + lbl + "'");
    return it->second;
  }

  bool has_label(const std::string& lbl) const {
    return label_to_id_.count(lbl) != 0;
  }

  // Total adjacency slots (= 2|E| undirected, |E| directed).
  std::int64_t slot_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.back();
  }

private:
  void check_node(node_id v) const {
    if (v < 0 || v >= n_)
      throw std::out_of_range("network: node id " + std::to_string(v) +
                              " out of range [0, " + std::to_string(n_) + ")");
  }

  bool directed_ = false;
  double uniform_p_ = 0.1;
  std::int32_t n_ = 0;
  std::int64_t edge_count_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<node_id> targets_;
  std::vector<double> probs_; // empty => uniform_p_ on every slot
  std::vector<std::string> labels_;
  std::unordered_map<std::string, node_id> label_to_id_;
};

struct LoadOptions {
  bool directed = false;
  double default_p = 0.1; // used for edges without an explicit probability
};

// Parses whitespace-separated edge lines "u v" or "u v p".  Lines starting
// with '#' (after optional leading blanks) and blank lines are skipped.
// Tokens are arbitrary labels; node ids are assigned in order of first
// appearance.  Self-loops are dropped; duplicate edges keep the first
// probability seen.  Explicit probabilities must lie in (0, 1].
inline Network load_edge_list(std::istream& in, const LoadOptions& opts = {}) {
  if (!(opts.default_p >= 0.0 && opts.default_p <= 1.0))
    throw parse_error("edge list: default probability must lie in [0, 1]");
  std::vector<std::string> labels;
  std::unordered_map<std::string, node_id> ids;
  auto intern = [&](const std::string& tok) -> node_id {
    const auto it = ids.find(tok);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<node_id>(labels.size());
    labels.push_back(tok);
    ids.emplace(tok, id);
    return id;
  };

  std::vector<std::tuple<node_id, node_id, double>> edges;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    std::string ut, vt, pt, extra;
    ls >> ut >> vt;
    if (vt.empty())
      throw parse_error("edge list: line " + std::to_string(line_no) +
                        ": expected at least two tokens");
    double p = -1.0;
    if (ls >> pt) {
      std::size_t pos = 0;
      try {
        p = std::stod(pt, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != pt.size())
        throw parse_error("edge list: line " + std::to_string(line_no) +
                          ": malformed probability '" + pt + "'");
      if (!(p > 0.0 && p <= 1.0))
        throw parse_error("edge list: line " + std::to_string(line_no) +
                          ": probability must lie in (0, 1]");
      if (ls >> extra)
        throw parse_error("edge list: line " + std::to_string(line_no) +
                          ": unexpected trailing token '" + extra + "'");
    }
    const node_id u = intern(ut);
    const node_id v = intern(vt);
    edges.emplace_back(u, v, p);
  }
  const auto node_count = static_cast<std::int32_t>(labels.size());
  return Network::build(node_count, edges, opts.directed, opts.default_p,
                        std::move(labels));
}

inline Network load_edge_list_file(const std::string& path,
                                   const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw parse_error("edge list: cannot open '" + path + "'");
  try {
    return load_edge_list(in, opts);
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

// Writes the network as an edge list (one line per stored edge, ascending
// (u, v) id order, original labels).  Probabilities are emitted only when the
// network carries per-edge values; the output round-trips through
// load_edge_list.  Isolated nodes are not representable in this format.
inline void write_edge_list(const Network& net, std::ostream& out,
                            const std::string& header_comment = {}) {
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out.precision(std::numeric_limits<double>::max_digits10);
  for (node_id u = 0; u < net.node_count(); ++u) {
    const auto row = net.neighbors(u);
    for (std::size_t s = 0; s < row.size(); ++s) {
      const node_id v = row[s];
      if (!net.directed() && v < u) continue; // emit each pair once
      out << net.label(u) << ' ' << net.label(v);
      if (net.has_edge_probabilities()) out << ' ' << net.slot_probability(u, s);
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Planted-community benchmark generator.
// ---------------------------------------------------------------------------

struct GnParams {
  std::int32_t communities = 4;
  std::int32_t nodes = 128;
  std::int32_t degree = 16;
  // Expected fraction of each node's stubs that lead outside its community.
  double mu = 0.0625;
  double edge_p = 0.05; // uniform propagation probability of the result
};

struct GnResult {
  Network net;
  std::vector<std::int32_t> community; // node id -> community id
  // Stubs that could not be matched without violating the constraints; each
  // dropped stub lowers one node's degree by one.  Zero for feasible
  // parameterisations.
  std::int32_t unmatched_stubs = 0;
};

namespace detail {

// Matches a stub multiset into simple edges.  `stubs` holds node ids, one per
// half-edge.  `allowed(u, v)` additionally constrains pairs (used to forbid
// same-community pairs in the external phase).  `forbidden` holds edges that
// already exist.  Pairs that cannot be placed after bounded reshuffling are
// repaired by swapping with an accepted edge; irreparable stubs are dropped
// and counted.
template <typename AllowedFn>
inline std::int32_t match_stubs(std::vector<node_id> stubs, AllowedFn allowed,
                                std::set<std::pair<node_id, node_id>>& edge_set,
                                std::vector<std::pair<node_id, node_id>>& edges,
                                rng_t& rng) {
  auto canon = [](node_id a, node_id b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  auto ok = [&](node_id a, node_id b) {
    return a != b && allowed(a, b) && edge_set.count(canon(a, b)) == 0;
  };

  std::vector<std::pair<node_id, node_id>> accepted_here;
  for (int round = 0; round < 40 && stubs.size() >= 2; ++round) {
    shuffle_vec(stubs, rng);
    std::vector<node_id> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const node_id a = stubs[i], b = stubs[i + 1];
      if (ok(a, b)) {
        edge_set.insert(canon(a, b));
        accepted_here.push_back(canon(a, b));
      } else {
        leftover.push_back(a);
        leftover.push_back(b);
      }
    }
    if (stubs.size() % 2 == 1) leftover.push_back(stubs.back());
    stubs = std::move(leftover);
  }

  // Edge-swap repair: for a stuck pair (a, b), pick an accepted edge (x, y)
  // and rewire to (a, x), (b, y), which keeps every other degree intact.
  std::int32_t dropped = 0;
  std::size_t idx = 0;
  while (idx + 1 < stubs.size()) {
    const node_id a = stubs[idx], b = stubs[idx + 1];
    idx += 2;
    bool placed = false;
    if (ok(a, b)) {
      edge_set.insert(canon(a, b));
      accepted_here.push_back(canon(a, b));
      placed = true;
    } else if (!accepted_here.empty()) {
      for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
        const auto pick = static_cast<std::size_t>(
            rand_index(rng, accepted_here.size()));
        auto [x, y] = accepted_here[pick];
        if (rand_u01(rng) < 0.5) std::swap(x, y);
        if (ok(a, x) && ok(b, y) && canon(a, x) != canon(b, y)) {
          edge_set.erase(canon(x, y));
          accepted_here[pick] = canon(a, x);
          edge_set.insert(canon(a, x));
          edge_set.insert(canon(b, y));
          accepted_here.push_back(canon(b, y));
          placed = true;
        }
      }
    }
    if (!placed) dropped += 2;
  }
  dropped += static_cast<std::int32_t>(stubs.size() % 2);
  edges.insert(edges.end(), accepted_here.begin(), accepted_here.end());
  return dropped;
}

} // namespace detail

// Generates a planted-community benchmark graph: `communities` equal-sized
// groups, every node with degree `degree`, and an expected fraction `mu` of
// each node's edges leading outside its own community.  Communities are the
// contiguous id blocks [c*size, (c+1)*size).  Deterministic given `rng`.
inline GnResult generate_gn(const GnParams& params, rng_t& rng) {
  const auto c = params.communities;
  const auto n = params.nodes;
  const auto d = params.degree;
  if (c < 1 || n < 1 || n % c != 0)
    throw construction_error("gn: nodes must split evenly across communities");
  const std::int32_t size = n / c;
  if (d < 0 || d >= size)
    throw construction_error(
        "gn: degree must be smaller than the community size");
  if (!(params.mu >= 0.0 && params.mu <= 1.0))
    throw construction_error("gn: mixing fraction must lie in [0, 1]");
  if (params.mu > 0.0 && c < 2)
    throw construction_error("gn: external edges need at least two communities");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
    throw construction_error("gn: nodes * degree must be even");

  // Per-node external stub counts: floor(mu*d) plus a Bernoulli remainder.
  const double target = params.mu * d;
  const auto base = static_cast<std::int32_t>(std::floor(target));
  const double frac = target - base;
  std::vector<std::int32_t> z(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) {
    std::int32_t zv = base + (rand_u01(rng) < frac ? 1 : 0);
    z[static_cast<std::size_t>(v)] = std::min(zv, d);
  }

  // Each community's internal stub total (size*d - ext_c) must be even, i.e.
  // ext_c must have the parity of size*d.  Fix parity by nudging a random
  // node's split by one.
  const std::int32_t want_parity =
      static_cast<std::int32_t>((static_cast<std::int64_t>(size) * d) % 2);
  for (std::int32_t comm = 0; comm < c; ++comm) {
    std::int64_t ext = 0;
    for (std::int32_t v = comm * size; v < (comm + 1) * size; ++v)
      ext += z[static_cast<std::size_t>(v)];
    if ((ext % 2) == want_parity) continue;
    bool fixed = false;
    for (int attempt = 0; attempt < 10000 && !fixed; ++attempt) {
      const auto v = comm * size + static_cast<std::int32_t>(
                                       rand_index(rng, static_cast<std::uint64_t>(size)));
      auto& zv = z[static_cast<std::size_t>(v)];
      const bool can_up = zv < d && c >= 2;
      const bool can_down = zv > 0;
      if (!can_up && !can_down) continue;
      // Either direction fixes parity; prefer moving toward the target.
      const bool up = (can_up && can_down) ? (zv < target) : can_up;
      zv += up ? 1 : -1;
      fixed = true;
    }
    if (!fixed)
      throw construction_error("gn: cannot balance external stub parity");
  }

  std::vector<std::pair<node_id, node_id>> edges;
  std::set<std::pair<node_id, node_id>> edge_set;
  std::int32_t dropped = 0;

  // Internal phase, one community at a time.
  std::vector<std::int32_t> community(static_cast<std::size_t>(n));
  for (std::int32_t comm = 0; comm < c; ++comm) {
    std::vector<node_id> stubs;
    for (std::int32_t v = comm * size; v < (comm + 1) * size; ++v) {
      community[static_cast<std::size_t>(v)] = comm;
      const std::int32_t internal = d - z[static_cast<std::size_t>(v)];
      for (std::int32_t s = 0; s < internal; ++s) stubs.push_back(v);
    }
    dropped += detail::match_stubs(
        std::move(stubs), [](node_id, node_id) { return true; }, edge_set,
        edges, rng);
  }

  // External phase: all cross-community stubs at once; same-community pairs
  // are forbidden.
  {
    std::vector<node_id> stubs;
    for (std::int32_t v = 0; v < n; ++v)
      for (std::int32_t s = 0; s < z[static_cast<std::size_t>(v)]; ++s)
        stubs.push_back(v);
    dropped += detail::match_stubs(
        std::move(stubs),
        [&](node_id a, node_id b) {
          return community[static_cast<std::size_t>(a)] !=
                 community[static_cast<std::size_t>(b)];
        },
        edge_set, edges, rng);
  }

  std::vector<std::tuple<node_id, node_id, double>> edge_tuples;
  edge_tuples.reserve(edges.size());
  for (const auto& [u, v] : edges) edge_tuples.emplace_back(u, v, -1.0);
  GnResult result{Network::build(n, edge_tuples, /*directed=*/false,
                                 params.edge_p),
                  std::move(community), dropped};
  return result;
}

inline GnResult generate_gn(const GnParams& params, std::uint64_t seed) {
  rng_t rng(derive_seed(seed, 0x676e)); // "gn"
  return generate_gn(params, rng);
}

} // namespace mtefim
