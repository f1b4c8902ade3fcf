// Command-line front end: benchmark generation, solver / baseline runs,
// seed-set evaluation, and experiment grids.
//
// Every artifact written by `run` and `experiment` (result.json, trace.csv,
// report tables) is deterministic given --seed; wall-clock timings go to
// stdout only, and the worker count never changes any output byte.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtefim/mtefim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NetworkOptions {
  std::string path;
  bool directed = false;
  double default_p = 0.1;
  bool use_gn = false;
  std::int32_t gn_communities = 4;
  std::int32_t gn_nodes = 128;
  std::int32_t gn_degree = 16;
  double gn_mu = 0.0625;
  std::int32_t gn_mu_links = -1; // legacy: external links per node
  std::uint64_t gn_seed = 1;
};

void add_network_flags(CLI::App* cmd, NetworkOptions& opts) {
  auto* net = cmd->add_option("--network", opts.path, "edge-list file to load");
  cmd->add_flag("--directed", opts.directed, "treat the edge list as directed");
  cmd->add_option("--p", opts.default_p,
                  "propagation probability for edges without one (also the "
                  "generated benchmark's probability)")
      ->check(CLI::Range(0.0, 1.0));
  auto* gn = cmd->add_flag("--gn", opts.use_gn,
                           "use a generated planted-community benchmark");
  cmd->add_option("--communities", opts.gn_communities, "benchmark communities")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--nodes", opts.gn_nodes, "benchmark nodes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--degree", opts.gn_degree, "benchmark degree")
      ->check(CLI::NonNegativeNumber);
  auto* mu = cmd->add_option("--mu", opts.gn_mu,
                             "expected fraction of external edges per node")
                 ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--mu-links", opts.gn_mu_links,
                  "external links per node (legacy integer mixing; overrides "
                  "--mu as mu-links/degree)")
      ->check(CLI::NonNegativeNumber)
      ->excludes(mu);
  cmd->add_option("--gn-seed", opts.gn_seed, "benchmark generator seed");
  net->excludes(gn);
}

struct LoadedNetwork {
  mtefim::Network net;
  std::string name;
  std::vector<std::int32_t> community; // only for generated benchmarks
};

LoadedNetwork build_network(const NetworkOptions& opts) {
  LoadedNetwork out;
  if (opts.use_gn) {
    mtefim::GnParams params;
    params.communities = opts.gn_communities;
    params.nodes = opts.gn_nodes;
    params.degree = opts.gn_degree;
    params.mu = opts.gn_mu_links >= 0
                    ? static_cast<double>(opts.gn_mu_links) /
                          std::max<std::int32_t>(1, opts.gn_degree)
                    : opts.gn_mu;
    params.edge_p = opts.default_p;
    auto gn = mtefim::generate_gn(params, opts.gn_seed);
    if (gn.unmatched_stubs > 0)
      std::cerr << "warning: benchmark left " << gn.unmatched_stubs
                << " stubs unmatched\n";
    out.net = std::move(gn.net);
    out.community = std::move(gn.community);
    std::ostringstream name;
    name << "gn-c" << params.communities << "-n" << params.nodes << "-d"
         << params.degree << "-seed" << opts.gn_seed;
    out.name = name.str();
  } else {
    if (opts.path.empty())
      throw CLI::ValidationError("network", "need --network FILE or --gn");
    mtefim::LoadOptions lo;
    lo.directed = opts.directed;
    lo.default_p = opts.default_p;
    out.net = mtefim::load_edge_list_file(opts.path, lo);
    out.name = fs::path(opts.path).stem().string();
  }
  return out;
}

json network_json(const LoadedNetwork& loaded) {
  return json{{"name", loaded.name},
              {"nodes", loaded.net.node_count()},
              {"edges", loaded.net.edge_count()},
              {"directed", loaded.net.directed()},
              {"uniform_p", loaded.net.uniform_probability()}};
}

std::vector<std::string> seed_labels(const mtefim::Network& net,
                                     std::vector<mtefim::node_id> ids) {
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> labels;
  labels.reserve(ids.size());
  for (const auto v : ids) labels.push_back(net.label(v));
  return labels;
}

std::vector<double> parse_prefs(const std::string& csv) {
  std::vector<double> prefs;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    prefs.push_back(std::stod(tok));
  }
  return prefs;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
  NetworkOptions net;
  std::string out_path = "network.txt";
  std::string community_path;
};

int cmd_generate(const GenerateArgs& args) {
  NetworkOptions opts = args.net;
  opts.use_gn = true;
  auto loaded = build_network(opts);
  {
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot write '" + args.out_path + "'");
    std::ostringstream header;
    header << loaded.name << " p=" << loaded.net.uniform_probability();
    mtefim::write_edge_list(loaded.net, out, header.str());
  }
  const std::string cpath = args.community_path.empty()
                                ? args.out_path + ".communities"
                                : args.community_path;
  {
    std::ofstream out(cpath);
    if (!out) throw std::runtime_error("cannot write '" + cpath + "'");
    for (mtefim::node_id v = 0; v < loaded.net.node_count(); ++v)
      out << loaded.net.label(v) << ' '
          << loaded.community[static_cast<std::size_t>(v)] << '\n';
  }
  std::cout << "wrote " << args.out_path << " (" << loaded.net.node_count()
            << " nodes, " << loaded.net.edge_count() << " edges) and " << cpath
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
  NetworkOptions net;
  std::string algo = "mtefim";
  std::int32_t k = 10;
  std::int32_t pop = 100;
  std::int64_t mfe = 0; // 0 => 5000 per transformation
  double pc = 1.0;
  double pm = -1.0;
  std::string prefs_csv;
  std::string transformations_csv = "edv,tis";
  bool no_transfer = false;
  std::int64_t replicas = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "mtefim_out";
  std::string config_path;
};

// Applies JSON config values for options the user did not pass explicitly.
void merge_run_config(const CLI::App* cmd, RunArgs& args) {
  if (args.config_path.empty()) return;
  std::ifstream in(args.config_path);
  if (!in) throw std::runtime_error("cannot read config '" + args.config_path + "'");
  json cfg = json::parse(in);
  auto unset = [&](const std::string& flag) {
    return cmd->count(flag) == 0;
  };
  if (cfg.contains("network") && unset("--network") && unset("--gn"))
    args.net.path = cfg["network"].get<std::string>();
  if (cfg.contains("directed") && unset("--directed"))
    args.net.directed = cfg["directed"].get<bool>();
  if (cfg.contains("p") && unset("--p")) args.net.default_p = cfg["p"].get<double>();
  if (cfg.contains("algo") && unset("--algo")) args.algo = cfg["algo"].get<std::string>();
  if (cfg.contains("k") && unset("--k")) args.k = cfg["k"].get<std::int32_t>();
  if (cfg.contains("pop") && unset("--pop")) args.pop = cfg["pop"].get<std::int32_t>();
  if (cfg.contains("mfe") && unset("--mfe")) args.mfe = cfg["mfe"].get<std::int64_t>();
  if (cfg.contains("pc") && unset("--pc")) args.pc = cfg["pc"].get<double>();
  if (cfg.contains("pm") && unset("--pm")) args.pm = cfg["pm"].get<double>();
  if (cfg.contains("prefs") && unset("--prefs")) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < cfg["prefs"].size(); ++i)
      ss << (i ? "," : "") << cfg["prefs"][i].get<double>();
    args.prefs_csv = ss.str();
  }
  if (cfg.contains("transformations") && unset("--transformations")) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < cfg["transformations"].size(); ++i)
      ss << (i ? "," : "") << cfg["transformations"][i].get<std::string>();
    args.transformations_csv = ss.str();
  }
  if (cfg.contains("no_transfer") && unset("--no-transfer"))
    args.no_transfer = cfg["no_transfer"].get<bool>();
  if (cfg.contains("replicas") && unset("--replicas"))
    args.replicas = cfg["replicas"].get<std::int64_t>();
  if (cfg.contains("seed") && unset("--seed")) args.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("workers") && unset("--workers"))
    args.workers = cfg["workers"].get<int>();
  if (cfg.contains("out") && unset("--out")) args.out_dir = cfg["out"].get<std::string>();
}

int cmd_run(const CLI::App* cmd, RunArgs args) {
  merge_run_config(cmd, args);
  const auto loaded = build_network(args.net);
  const auto& net = loaded.net;
  fs::create_directories(args.out_dir);

  const mtefim::DiffusionConfig score_cfg{
      args.replicas, mtefim::derive_seed(args.seed, mtefim::stream::score),
      args.workers};

  json result;
  result["algorithm"] = args.algo;
  result["network"] = network_json(loaded);
  result["seed"] = args.seed;
  result["replicas"] = args.replicas;

  std::vector<mtefim::node_id> final_set;
  const auto t0 = std::chrono::steady_clock::now();

  const bool is_ea = args.algo == "mtefim" || args.algo == "mtefim-nk" ||
                     args.algo == "edvea" || args.algo == "tisea";
  if (is_ea) {
    std::vector<mtefim::Transformation> trans;
    if (args.algo == "edvea") {
      trans.push_back({1, mtefim::ProxyKind::edv, 0, 0});
    } else if (args.algo == "tisea") {
      trans.push_back({1, mtefim::ProxyKind::tis, 0, 0});
    } else {
      const auto names = split_csv(args.transformations_csv);
      if (names.empty())
        throw CLI::ValidationError("--transformations", "needs at least one proxy");
      for (std::size_t i = 0; i < names.size(); ++i)
        trans.push_back({static_cast<int>(i + 1),
                         mtefim::proxy_from_name(names[i]), 0, 0});
    }

    mtefim::SolverConfig sc;
    sc.seed_set_size = args.k;
    sc.population_size = args.pop;
    sc.max_function_evaluations = args.mfe;
    sc.crossover_prob = args.pc;
    sc.mutation_prob = args.pm;
    sc.transfer_enabled = !(args.no_transfer || args.algo == "mtefim-nk");
    sc.base_seed = args.seed;
    const auto rr = mtefim::run(net, trans, sc);

    json config{{"k", args.k},
                {"population", args.pop},
                {"mfe", sc.max_function_evaluations > 0
                            ? sc.max_function_evaluations
                            : 5000ll * static_cast<std::int64_t>(trans.size())},
                {"pc", args.pc},
                {"pm", args.pm < 0 ? 1.0 / args.k : args.pm},
                {"transfer", sc.transfer_enabled}};
    json tnames = json::array();
    for (const auto& t : trans) tnames.push_back(t.name());
    config["transformations"] = tnames;

    json per_trans = json::array();
    for (std::size_t i = 0; i < rr.best.size(); ++i) {
      per_trans.push_back(
          {{"name", rr.trace.names[i]},
           {"fitness", *rr.best[i].fitness},
           {"evaluations", rr.transformations[i].eval_count},
           {"budget", rr.transformations[i].eval_budget},
           {"seed_set", seed_labels(net, rr.best[i].genes)}});
    }
    result["per_transformation"] = per_trans;
    result["generations"] = rr.trace.rows.back().generation;

    std::vector<double> prefs =
        args.prefs_csv.empty() ? std::vector<double>{} : parse_prefs(args.prefs_csv);
    if (rr.best.size() > 1) {
      const auto rep = mtefim::soss_report(net, rr.best, rr.transformations, prefs);
      final_set = rr.best[static_cast<std::size_t>(rep.chosen)].genes;
      json sel{{"method", "soss"},
               {"chosen", rep.chosen},
               {"preferences", rep.preferences},
               {"composite", rep.composite}};
      json values = json::array(), ranks = json::array();
      for (std::size_t c = 0; c < rep.values.size(); ++c) {
        values.push_back(rep.values[c]);
        ranks.push_back(rep.ranks[c]);
      }
      sel["values"] = values;
      sel["ranks"] = ranks;
      result["selection"] = sel;
    } else {
      final_set = rr.best[0].genes;
    }
    result["config"] = config;

    {
      std::ofstream trace_out(fs::path(args.out_dir) / "trace.csv");
      mtefim::write_trace_csv(rr.trace, trace_out);
    }
    result["trace_file"] = "trace.csv";

    json transfers = json::array();
    for (const auto& ev : rr.trace.events)
      transfers.push_back({{"generation", ev.generation},
                           {"target", ev.target},
                           {"source", ev.source},
                           {"r", ev.relationship},
                           {"u", ev.u},
                           {"count", ev.count_considered},
                           {"fired", ev.fired},
                           {"replaced", ev.replaced}});
    result["transfers"] = transfers;
  } else if (args.algo == "degree" || args.algo == "pagerank" ||
             args.algo == "sdd" || args.algo == "celf") {
    mtefim::BaselineResult br;
    if (args.algo == "degree") {
      br = mtefim::degree_select(net, args.k);
    } else if (args.algo == "pagerank") {
      br = mtefim::pagerank_select(net, args.k);
    } else if (args.algo == "sdd") {
      br = mtefim::degree_discount_select(net, args.k, net.uniform_probability());
    } else {
      const mtefim::DiffusionConfig dc{
          args.replicas, mtefim::derive_seed(args.seed, mtefim::stream::cell),
          args.workers};
      br = mtefim::celf_select(net, args.k, dc);
    }
    final_set = br.seeds;
    result["config"] = json{{"k", args.k}};
    if (!br.scores.empty()) {
      json picks = json::array();
      for (std::size_t i = 0; i < br.seeds.size(); ++i)
        picks.push_back({{"node", net.label(br.seeds[i])}, {"score", br.scores[i]}});
      result["selection_order"] = picks;
    }
  } else {
    throw CLI::ValidationError("--algo", "unknown algorithm '" + args.algo + "'");
  }

  const auto est = mtefim::estimate_spread(net, final_set, score_cfg);
  result["seed_set"] = seed_labels(net, final_set);
  result["spread"] = {{"mean", est.mean},
                      {"std_error", est.std_error},
                      {"replicas", est.replicas}};

  {
    std::ofstream out(fs::path(args.out_dir) / "result.json");
    out << result.dump(2) << '\n';
  }
  const auto t1 = std::chrono::steady_clock::now();

  std::cout << args.algo << " on " << loaded.name << ": k=" << args.k
            << " spread=" << est.mean << " +/- " << est.std_error << " (se)\n";
  std::cout << "seed set:";
  for (const auto& l : seed_labels(net, final_set)) std::cout << ' ' << l;
  std::cout << "\nwrote " << (fs::path(args.out_dir) / "result.json").string()
            << " in " << std::chrono::duration<double>(t1 - t0).count()
            << " s\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  NetworkOptions net;
  std::string seeds_path;
  std::int64_t replicas = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_path;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const auto loaded = build_network(args.net);
  std::ifstream in(args.seeds_path);
  if (!in) throw std::runtime_error("cannot read seed file '" + args.seeds_path + "'");
  std::vector<mtefim::node_id> seeds;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    auto end = line.find_last_not_of(" \t\r");
    seeds.push_back(loaded.net.id_of(line.substr(start, end - start + 1)));
  }
  const mtefim::DiffusionConfig cfg{args.replicas, args.seed, args.workers};
  const auto est = mtefim::estimate_spread(loaded.net, seeds, cfg);
  json out{{"network", network_json(loaded)},
           {"seed_set", seed_labels(loaded.net, seeds)},
           {"spread", {{"mean", est.mean},
                       {"std_error", est.std_error},
                       {"replicas", est.replicas}}}};
  if (!args.out_path.empty()) {
    std::ofstream f(args.out_path);
    f << out.dump(2) << '\n';
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string suite_path;
  std::string out_dir = "mtefim_experiment";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::int32_t> repeats;
  std::optional<std::int64_t> replicas;
};

int cmd_experiment(const ExperimentArgs& args) {
  std::ifstream in(args.suite_path);
  if (!in) throw std::runtime_error("cannot read suite '" + args.suite_path + "'");
  json suite = json::parse(in);

  NetworkOptions nopts;
  if (suite.contains("gn")) {
    const auto& g = suite["gn"];
    nopts.use_gn = true;
    nopts.gn_communities = g.value("communities", 4);
    nopts.gn_nodes = g.value("nodes", 128);
    nopts.gn_degree = g.value("degree", 16);
    nopts.gn_mu = g.value("mu", 0.0625);
    if (g.contains("mu_links")) nopts.gn_mu_links = g["mu_links"].get<std::int32_t>();
    nopts.gn_seed = g.value("seed", 1u);
    nopts.default_p = g.value("p", 0.05);
  } else if (suite.contains("network")) {
    nopts.path = suite["network"].get<std::string>();
    nopts.directed = suite.value("directed", false);
    nopts.default_p = suite.value("p", 0.1);
  } else {
    throw std::runtime_error("suite: need \"network\" or \"gn\"");
  }
  const auto loaded = build_network(nopts);

  mtefim::ExperimentConfig cfg;
  cfg.methods = suite.value("methods", std::vector<std::string>{});
  for (const auto k : suite.value("k_values", std::vector<std::int32_t>{}))
    cfg.k_values.push_back(k);
  cfg.repeats = suite.value("repeats", 20);
  cfg.reference = suite.value("reference", std::string("mtefim"));
  cfg.significance_alpha = suite.value("alpha", 0.05);
  cfg.population_size = suite.value("population", 100);
  cfg.evals_per_transformation =
      suite.value("evals_per_transformation", static_cast<std::int64_t>(5000));
  cfg.crossover_prob = suite.value("pc", 1.0);
  cfg.mutation_prob = suite.value("pm", -1.0);
  cfg.preferences = suite.value("preferences", std::vector<double>{});
  cfg.replicas = suite.value("replicas", static_cast<std::int64_t>(10000));
  cfg.master_seed = suite.value("seed", 0ull);
  cfg.agreement = suite.value("agreement", false);
  cfg.similarity_samples = suite.value("similarity_samples", 0);

  if (args.seed) cfg.master_seed = *args.seed;
  if (args.workers) cfg.workers = *args.workers;
  if (args.repeats) cfg.repeats = *args.repeats;
  if (args.replicas) cfg.replicas = *args.replicas;

  const auto t0 = std::chrono::steady_clock::now();
  auto report = mtefim::run_experiment(loaded.net, cfg);
  report.network_name = loaded.name;
  mtefim::write_report_files(report, loaded.net, args.out_dir);
  const auto t1 = std::chrono::steady_clock::now();

  std::cout << "experiment on " << loaded.name << ": "
            << report.cells.size() << " cells in "
            << std::chrono::duration<double>(t1 - t0).count() << " s\n";
  for (const auto& s : report.summaries) {
    std::cout << "  " << s.method << " k=" << s.k << ": " << s.mean << " +/- "
              << s.stddev;
    if (s.has_test) std::cout << "  (" << s.verdict << ", p=" << s.p_value << ")";
    if (s.has_agreement) std::cout << "  agreement=" << s.agreement_rate;
    std::cout << "\n";
  }
  std::cout << "wrote " << args.out_dir << "/report.json and figure tables\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-transformation evolutionary influence maximization"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "write a benchmark network");
  add_network_flags(gen, gen_args.net);
  gen->add_option("--out", gen_args.out_path, "output edge-list path");
  gen->add_option("--community-out", gen_args.community_path,
                  "community sidecar path (default: <out>.communities)");

  RunArgs run_args;
  auto* runc = app.add_subcommand("run", "select a seed set with one algorithm");
  add_network_flags(runc, run_args.net);
  runc->add_option("--algo", run_args.algo,
                   "mtefim | mtefim-nk | edvea | tisea | degree | sdd | "
                   "pagerank | celf");
  runc->add_option("--k", run_args.k, "seed-set size")->check(CLI::PositiveNumber);
  runc->add_option("--pop", run_args.pop, "population size per transformation")
      ->check(CLI::PositiveNumber);
  runc->add_option("--mfe", run_args.mfe,
                   "total fitness-evaluation budget (0 = 5000 per transformation)");
  runc->add_option("--pc", run_args.pc, "crossover probability")
      ->check(CLI::Range(0.0, 1.0));
  runc->add_option("--pm", run_args.pm,
                   "per-gene mutation probability (negative = 1/k)");
  runc->add_option("--prefs", run_args.prefs_csv,
                   "comma-separated transformation preferences (sum to 1)");
  runc->add_option("--transformations", run_args.transformations_csv,
                   "comma-separated proxies for the multi-transformation run");
  runc->add_flag("--no-transfer", run_args.no_transfer,
                 "disable knowledge transfer between populations");
  runc->add_option("--replicas", run_args.replicas,
                   "Monte Carlo replicas for the final spread estimate")
      ->check(CLI::PositiveNumber);
  runc->add_option("--seed", run_args.seed, "base random seed");
  runc->add_option("--workers", run_args.workers, "worker threads for estimates")
      ->check(CLI::PositiveNumber);
  runc->add_option("--out", run_args.out_dir, "output directory");
  runc->add_option("--config", run_args.config_path,
                   "JSON config file (explicit flags override it)");

  EvaluateArgs eval_args;
  auto* evalc = app.add_subcommand("evaluate", "estimate the spread of a seed set");
  add_network_flags(evalc, eval_args.net);
  evalc->add_option("--seeds", eval_args.seeds_path,
                    "file with one node label per line")
      ->required();
  evalc->add_option("--replicas", eval_args.replicas, "Monte Carlo replicas")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--seed", eval_args.seed, "base random seed");
  evalc->add_option("--workers", eval_args.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--out", eval_args.out_path, "also write the JSON result here");

  ExperimentArgs exp_args;
  auto* expc = app.add_subcommand("experiment", "run an experiment suite");
  expc->add_option("--suite", exp_args.suite_path, "suite JSON file")->required();
  expc->add_option("--out", exp_args.out_dir, "output directory");
  std::uint64_t exp_seed = 0;
  int exp_workers = 0;
  std::int32_t exp_repeats = 0;
  std::int64_t exp_replicas = 0;
  auto* oseed = expc->add_option("--seed", exp_seed, "override the suite seed");
  auto* oworkers =
      expc->add_option("--workers", exp_workers, "worker threads for estimates")
          ->check(CLI::PositiveNumber);
  auto* orepeats = expc->add_option("--repeats", exp_repeats, "override repeats")
                       ->check(CLI::PositiveNumber);
  auto* oreplicas =
      expc->add_option("--replicas", exp_replicas, "override Monte Carlo replicas")
          ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (runc->parsed()) return cmd_run(runc, run_args);
    if (evalc->parsed()) return cmd_evaluate(eval_args);
    if (expc->parsed()) {
      if (oseed->count()) exp_args.seed = exp_seed;
      if (oworkers->count()) exp_args.workers = exp_workers;
      if (orepeats->count()) exp_args.repeats = exp_repeats;
      if (oreplicas->count()) exp_args.replicas = exp_replicas;
      return cmd_experiment(exp_args);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
