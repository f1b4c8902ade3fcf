#pragma once

// Experiment harness: runs a grid of (method, k, repeat) cells on one
// network, scores every selected seed set with the same Monte Carlo
// estimator, aggregates per-(method, k) statistics with a rank-sum test
// against a reference method, and serialises plot-ready tables.
//
// Every cell derives its own seeds from the master seed, so the whole grid
// is replayable; wall-clock times are the only non-deterministic output and
// live in their own table.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtefim/baselines.hpp"
#include "mtefim/diffusion.hpp"
#include "mtefim/graph.hpp"
#include "mtefim/proxy.hpp"
#include "mtefim/rng.hpp"
#include "mtefim/solver.hpp"
#include "mtefim/stats.hpp"

namespace mtefim {

// Rank agreement between the two proxies over uniformly random seed sets of
// size k: Spearman correlation of EDV and TIS across `samples` draws.
inline double spearman_similarity(const Network& net, std::int32_t k,
                                  std::int32_t samples, rng_t& rng) {
  if (k < 1 || k > net.node_count())
    throw std::invalid_argument("similarity: need 1 <= k <= node count");
  if (samples < 2)
    throw std::invalid_argument("similarity: need at least two samples");
  std::vector<double> edv_values, tis_values;
  edv_values.reserve(static_cast<std::size_t>(samples));
  tis_values.reserve(static_cast<std::size_t>(samples));
  for (std::int32_t s = 0; s < samples; ++s) {
    const auto genes = sample_distinct_positions(rng, net.node_count(), k);
    edv_values.push_back(edv(net, genes, net.uniform_probability()));
    tis_values.push_back(tis(net, genes));
  }
  return spearman_rho(edv_values, tis_values);
}

inline const std::set<std::string>& known_methods() {
  static const std::set<std::string> methods{
      "degree", "pagerank", "sdd", "celf",
      "edvea",  "tisea",    "mtefim", "mtefim-nk"};
  return methods;
}

struct ExperimentConfig {
  std::vector<std::string> methods;
  std::vector<std::int32_t> k_values;
  std::int32_t repeats = 20;
  std::string reference = "mtefim"; // rank-sum comparisons run against this
  double significance_alpha = 0.05;

  // Evolutionary method settings.
  std::int32_t population_size = 100;
  std::int64_t evals_per_transformation = 5000;
  double crossover_prob = 1.0;
  double mutation_prob = -1.0; // negative => 1/k
  std::vector<double> preferences;

  // Scoring.
  std::int64_t replicas = 10000;
  int workers = 1;
  std::uint64_t master_seed = 0;

  // Extras.
  bool agreement = false;             // rank-based vs Monte Carlo selection
  std::int32_t similarity_samples = 0; // 0 => skip the proxy-similarity pass
};

struct CellResult {
  std::string method;
  std::int32_t k = 0;
  std::int32_t repeat = 0;
  std::uint64_t run_seed = 0;
  std::uint64_t score_seed = 0;
  std::vector<node_id> seeds; // ascending ids
  double spread_mean = 0.0;
  double spread_se = 0.0;
  bool has_agreement = false;
  bool soss_mcss_agree = false;
};

struct MethodKSummary {
  std::string method;
  std::int32_t k = 0;
  std::int32_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool has_test = false;
  double p_value = 1.0;
  char verdict = '=';
  bool has_agreement = false;
  double agreement_rate = 0.0;
};

struct SimilarityResult {
  std::int32_t k = 0;
  std::int32_t samples = 0;
  double rho = 0.0;
};

struct TraceRecord {
  std::string method;
  std::int32_t k = 0;
  std::int32_t repeat = 0;
  RunTrace trace;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string network_name;
  std::int32_t nodes = 0;
  std::int64_t edges = 0;
  std::vector<CellResult> cells;
  std::vector<MethodKSummary> summaries;
  std::vector<SimilarityResult> similarity;
  std::vector<std::pair<std::string, double>> runtime_seconds; // per method
  std::vector<TraceRecord> traces;
};

namespace detail {

inline std::vector<node_id> labels_sorted(std::vector<node_id> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

} // namespace detail

// Runs the full experiment grid.  Deterministic given cfg.master_seed except
// for the wall-clock entries in runtime_seconds.
inline ExperimentReport run_experiment(const Network& net,
                                       const ExperimentConfig& cfg) {
  if (cfg.methods.empty())
    throw std::invalid_argument("experiment: no methods given");
  for (const auto& m : cfg.methods)
    if (!known_methods().count(m))
      throw std::invalid_argument("experiment: unknown method '" + m + "'");
  if (cfg.k_values.empty())
    throw std::invalid_argument("experiment: no seed-set sizes given");
  for (const auto k : cfg.k_values)
    if (k < 1 || k > net.node_count())
      throw std::invalid_argument("experiment: k out of range");
  if (cfg.repeats < 1)
    throw std::invalid_argument("experiment: repeats must be positive");

  ExperimentReport report;
  report.config = cfg;
  report.network_name = "network";
  report.nodes = net.node_count();
  report.edges = net.edge_count();

  const auto encode = [&](std::size_t mi, std::size_t ki, std::int32_t rep) {
    return (static_cast<std::uint64_t>(mi) * cfg.k_values.size() + ki) *
               static_cast<std::uint64_t>(cfg.repeats) +
           static_cast<std::uint64_t>(rep);
  };

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    const auto& method = cfg.methods[mi];
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
      const auto k = cfg.k_values[ki];
      // Deterministic heuristics select the same set on every repeat; the
      // selection is computed once and reused, while scoring still draws a
      // fresh replica stream per repeat so their spread estimates form a
      // distribution comparable to the stochastic methods'.
      const bool deterministic =
          method == "degree" || method == "pagerank" || method == "sdd";
      std::vector<node_id> cached_selection;
      for (std::int32_t rep = 0; rep < cfg.repeats; ++rep) {
        CellResult cell;
        cell.method = method;
        cell.k = k;
        cell.repeat = rep;
        cell.run_seed = derive_seed(cfg.master_seed, stream::cell, encode(mi, ki, rep));
        cell.score_seed =
            derive_seed(cfg.master_seed, stream::score, encode(mi, ki, rep));

        if (deterministic) {
          if (rep == 0) {
            if (method == "degree")
              cached_selection = degree_select(net, k).seeds;
            else if (method == "pagerank")
              cached_selection = pagerank_select(net, k).seeds;
            else
              cached_selection =
                  degree_discount_select(net, k, net.uniform_probability()).seeds;
            cached_selection = detail::labels_sorted(std::move(cached_selection));
          }
          cell.seeds = cached_selection;
        } else if (method == "celf") {
          DiffusionConfig dc{cfg.replicas, cell.run_seed, cfg.workers};
          cell.seeds = detail::labels_sorted(celf_select(net, k, dc).seeds);
        } else if (method == "edvea" || method == "tisea") {
          SolverConfig sc;
          sc.seed_set_size = k;
          sc.population_size = cfg.population_size;
          sc.max_function_evaluations = cfg.evals_per_transformation;
          sc.crossover_prob = cfg.crossover_prob;
          sc.mutation_prob = cfg.mutation_prob;
          sc.base_seed = cell.run_seed;
          RunResult rr;
          const auto kind = method == "edvea" ? ProxyKind::edv : ProxyKind::tis;
          cell.seeds = single_transformation_ea(net, kind, sc, &rr).seeds;
          report.traces.push_back(TraceRecord{method, k, rep, std::move(rr.trace)});
        } else { // mtefim / mtefim-nk
          SolverConfig sc;
          sc.seed_set_size = k;
          sc.population_size = cfg.population_size;
          sc.max_function_evaluations = cfg.evals_per_transformation * 2;
          sc.crossover_prob = cfg.crossover_prob;
          sc.mutation_prob = cfg.mutation_prob;
          sc.transfer_enabled = method == "mtefim";
          sc.base_seed = cell.run_seed;
          const std::vector<Transformation> trans{
              Transformation{1, ProxyKind::edv, 0, 0},
              Transformation{2, ProxyKind::tis, 0, 0}};
          RunResult rr = run(net, trans, sc);
          const auto chosen = soss(net, rr.best, trans, cfg.preferences);
          cell.seeds = detail::labels_sorted(chosen.genes);
          if (cfg.agreement) {
            DiffusionConfig dc{cfg.replicas, cell.score_seed, cfg.workers};
            const auto mc_choice = mcss(net, rr.best, dc);
            cell.has_agreement = true;
            cell.soss_mcss_agree = detail::labels_sorted(mc_choice.genes) == cell.seeds;
          }
          report.traces.push_back(TraceRecord{method, k, rep, std::move(rr.trace)});
        }

        DiffusionConfig score_cfg{cfg.replicas, cell.score_seed, cfg.workers};
        const auto est = estimate_spread(net, cell.seeds, score_cfg);
        cell.spread_mean = est.mean;
        cell.spread_se = est.std_error;
        report.cells.push_back(std::move(cell));
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.runtime_seconds.emplace_back(
        method, std::chrono::duration<double>(t1 - t0).count());
  }

  // Per-(method, k) aggregation plus the rank-sum comparison against the
  // reference method.
  std::map<std::pair<std::string, std::int32_t>, std::vector<const CellResult*>>
      groups;
  for (const auto& cell : report.cells)
    groups[{cell.method, cell.k}].push_back(&cell);
  const bool have_reference =
      std::find(cfg.methods.begin(), cfg.methods.end(), cfg.reference) !=
      cfg.methods.end();
  for (const auto& method : cfg.methods) {
    for (const auto k : cfg.k_values) {
      const auto& cells = groups[{method, k}];
      MethodKSummary s;
      s.method = method;
      s.k = k;
      s.n = static_cast<std::int32_t>(cells.size());
      std::vector<double> values;
      for (const auto* c : cells) values.push_back(c->spread_mean);
      double mean = 0.0;
      for (const double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      s.mean = mean;
      if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - mean) * (v - mean);
        s.stddev = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
      }
      if (have_reference && method != cfg.reference) {
        std::vector<double> ref_values;
        for (const auto* c : groups[{cfg.reference, k}])
          ref_values.push_back(c->spread_mean);
        if (values.size() >= 2 && ref_values.size() >= 2) {
          const auto w =
              wilcoxon_rank_sum(values, ref_values, cfg.significance_alpha);
          s.has_test = true;
          s.p_value = w.p_value;
          s.verdict = w.verdict;
        }
      }
      std::int32_t with_agreement = 0, agreed = 0;
      for (const auto* c : cells) {
        if (!c->has_agreement) continue;
        ++with_agreement;
        agreed += c->soss_mcss_agree ? 1 : 0;
      }
      if (with_agreement > 0) {
        s.has_agreement = true;
        s.agreement_rate =
            static_cast<double>(agreed) / static_cast<double>(with_agreement);
      }
      report.summaries.push_back(std::move(s));
    }
  }

  if (cfg.similarity_samples > 0) {
    for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
      rng_t rng = make_rng(cfg.master_seed, 0x73696d, ki); // "sim"
      SimilarityResult sim;
      sim.k = cfg.k_values[ki];
      sim.samples = cfg.similarity_samples;
      sim.rho = spearman_similarity(net, sim.k, cfg.similarity_samples, rng);
      report.similarity.push_back(sim);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialisation.
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const ExperimentReport& report,
                                     const Network& net) {
  nlohmann::json j;
  j["network"] = {{"name", report.network_name},
                  {"nodes", report.nodes},
                  {"edges", report.edges}};
  j["config"] = {{"methods", report.config.methods},
                 {"k_values", report.config.k_values},
                 {"repeats", report.config.repeats},
                 {"reference", report.config.reference},
                 {"alpha", report.config.significance_alpha},
                 {"population_size", report.config.population_size},
                 {"evals_per_transformation", report.config.evals_per_transformation},
                 {"crossover_prob", report.config.crossover_prob},
                 {"mutation_prob", report.config.mutation_prob},
                 {"preferences", report.config.preferences},
                 {"replicas", report.config.replicas},
                 {"master_seed", report.config.master_seed},
                 {"agreement", report.config.agreement},
                 {"similarity_samples", report.config.similarity_samples}};
  auto& cells = j["cells"] = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json jc{{"method", c.method},   {"k", c.k},
                      {"repeat", c.repeat},   {"run_seed", c.run_seed},
                      {"score_seed", c.score_seed},
                      {"spread_mean", c.spread_mean},
                      {"spread_se", c.spread_se}};
    auto& labels = jc["seeds"] = nlohmann::json::array();
    for (const auto v : c.seeds) labels.push_back(net.label(v));
    if (c.has_agreement) jc["soss_mcss_agree"] = c.soss_mcss_agree;
    cells.push_back(std::move(jc));
  }
  auto& sums = j["summaries"] = nlohmann::json::array();
  for (const auto& s : report.summaries) {
    nlohmann::json js{{"method", s.method}, {"k", s.k},     {"n", s.n},
                      {"mean", s.mean},     {"std", s.stddev}};
    if (s.has_test) {
      js["p_value"] = s.p_value;
      js["verdict"] = std::string(1, s.verdict);
    }
    if (s.has_agreement) js["agreement_rate"] = s.agreement_rate;
    sums.push_back(std::move(js));
  }
  auto& sim = j["similarity"] = nlohmann::json::array();
  for (const auto& s : report.similarity)
    sim.push_back({{"k", s.k}, {"samples", s.samples}, {"rho", s.rho}});
  return j;
}

inline void write_spread_csv(const ExperimentReport& report, std::ostream& out) {
  out << "method,k,n,mean,std,p_value,verdict,agreement_rate\n";
  for (const auto& s : report.summaries) {
    out << s.method << ',' << s.k << ',' << s.n << ',';
    detail::format_double(out, s.mean);
    out << ',';
    detail::format_double(out, s.stddev);
    out << ',';
    if (s.has_test) {
      detail::format_double(out, s.p_value);
      out << ',' << s.verdict;
    } else {
      out << ',';
    }
    out << ',';
    if (s.has_agreement) detail::format_double(out, s.agreement_rate);
    out << '\n';
  }
}

inline void write_convergence_csv(const ExperimentReport& report,
                                  std::ostream& out) {
  out << "method,k,repeat,transformation,generation,evals,best\n";
  for (const auto& tr : report.traces) {
    const auto S = tr.trace.names.size();
    for (const auto& row : tr.trace.rows) {
      for (std::size_t i = 0; i < S; ++i) {
        out << tr.method << ',' << tr.k << ',' << tr.repeat << ','
            << tr.trace.names[i] << ',' << row.generation << ','
            << row.evals[i] << ',';
        detail::format_double(out, row.best[i]);
        out << '\n';
      }
    }
  }
}

inline void write_r_trajectory_csv(const ExperimentReport& report,
                                   std::ostream& out) {
  out << "method,k,repeat,generation,pair,r\n";
  for (const auto& tr : report.traces) {
    const auto S = tr.trace.names.size();
    if (S < 2) continue;
    for (const auto& row : tr.trace.rows) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t jj = i + 1; jj < S; ++jj, ++idx) {
          out << tr.method << ',' << tr.k << ',' << tr.repeat << ','
              << row.generation << ',' << tr.trace.names[i] << '-'
              << tr.trace.names[jj] << ',';
          detail::format_double(out, row.relationship[idx]);
          out << '\n';
        }
      }
    }
  }
}

inline void write_runtime_csv(const ExperimentReport& report, std::ostream& out) {
  out << "method,seconds\n";
  for (const auto& [method, seconds] : report.runtime_seconds) {
    out << method << ',';
    detail::format_double(out, seconds);
    out << '\n';
  }
}

// Writes report.json plus the four figure tables into `dir` (created if
// missing).  Every file except runtime.csv is byte-identical across runs of
// the same experiment configuration.
inline void write_report_files(const ExperimentReport& report, const Network& net,
                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    out << report_to_json(report, net).dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "spread_vs_k.csv");
    write_spread_csv(report, out);
  }
  {
    std::ofstream out(dir / "convergence.csv");
    write_convergence_csv(report, out);
  }
  {
    std::ofstream out(dir / "r_trajectory.csv");
    write_r_trajectory_csv(report, out);
  }
  {
    std::ofstream out(dir / "runtime.csv");
    write_runtime_csv(report, out);
  }
}

} // namespace mtefim
