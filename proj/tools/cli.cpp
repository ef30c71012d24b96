#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmperc/cmp.hpp"
#include "cmperc/contact.hpp"
#include "cmperc/experiments.hpp"
#include "cmperc/generators.hpp"
#include "cmperc/graph.hpp"
#include "cmperc/verify.hpp"

namespace {

using cmperc::Vertex;
using cmperc::VertexSet;

struct Common {
  std::string config_path;
  nlohmann::json config;

  void load() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    in >> config;
  }
};

// Pull defaults out of the config file; command-line flags override them
// because CLI11 only overwrites bound variables for flags actually given.
template <typename T>
void from_config(const nlohmann::json& cfg, const std::string& key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

VertexSet parse_vertex_list(const std::string& s) {
  VertexSet out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<long long> parse_int_list(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoll(tok));
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

struct ModelFlags {
  std::string model = "bernoulli";
  std::string graph = "lattice";
  std::string dist = "exponential";
  cmperc::ModelSpec spec;

  void add_options(CLI::App* app, const nlohmann::json& cfg) {
    from_config(cfg, "model", model);
    from_config(cfg, "graph", graph);
    from_config(cfg, "dist", dist);
    from_config(cfg, "p", spec.p);
    from_config(cfg, "lambda", spec.lambda);
    from_config(cfg, "pareto_a", spec.pareto_a);
    from_config(cfg, "delta", spec.delta);
    from_config(cfg, "dim", spec.dim);
    from_config(cfg, "side", spec.side);
    from_config(cfg, "radius", spec.radius);
    from_config(cfg, "intensity", spec.intensity);
    from_config(cfg, "largest_component_only", spec.largest_component_only);
    app->add_option("--model", model, "weight model: bernoulli|continuum|degree");
    app->add_option("--graph", graph, "graph kind: lattice|z|rgg|delaunay");
    app->add_option("--dist", dist, "continuum distribution: constant|exponential|pareto");
    app->add_option("--p", spec.p, "Bernoulli weight probability");
    app->add_option("--lambda", spec.lambda, "continuum weight scale");
    app->add_option("--pareto-a", spec.pareto_a, "pareto tail index");
    app->add_option("--delta", spec.delta, "degree threshold");
    app->add_option("--dim", spec.dim, "dimension (1-3)");
    app->add_option("--side", spec.side, "lattice side / box side");
    app->add_option("--radius", spec.radius, "rgg connection radius");
    app->add_option("--intensity", spec.intensity, "point intensity");
    app->add_flag("--largest-component", spec.largest_component_only,
                  "restrict analysis to the largest component");
  }

  cmperc::ModelSpec resolve() const {
    cmperc::ModelSpec s = spec;
    s.model = cmperc::model_from_string(model);
    s.graph_kind = cmperc::graph_kind_from_string(graph);
    s.dist = cmperc::dist_from_string(dist);
    s.validate();
    return s;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"cumulative merging percolation toolkit"};
  app.require_subcommand(1);

  Common common;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") common.config_path = argv[i + 1];
  }
  common.load();
  const nlohmann::json& cfg = common.config;

  double alpha = 1.0;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string in_path, out_path;
  from_config(cfg, "alpha", alpha);
  from_config(cfg, "seed", seed);
  from_config(cfg, "threads", threads);
  from_config(cfg, "in", in_path);
  from_config(cfg, "out", out_path);

  auto add_shared = [&](CLI::App* sub, bool with_alpha = true) {
    sub->add_option("--config", common.config_path, "JSON config file (flags override)");
    if (with_alpha) sub->add_option("--alpha", alpha, "expansion exponent (>= 1)");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--threads", threads, "worker threads (0 = CMPERC_THREADS or 1)");
    sub->add_option("--out", out_path, "output path (default stdout)");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "generate a weighted graph (wgraph v1)");
  ModelFlags gen_model;
  gen_model.add_options(gen, cfg);
  add_shared(gen, false);

  // cmp
  auto* cmp = app.add_subcommand("cmp", "compute the merged partition of a wgraph file");
  cmp->add_option("--in", in_path, "input wgraph file")->required();
  add_shared(cmp);

  // explore
  auto* explore = app.add_subcommand("explore", "stabiliser exploration from a vertex");
  Vertex start = 0;
  std::uint64_t budget = 0;
  explore->add_option("--in", in_path, "input wgraph file")->required();
  explore->add_option("--start", start, "start vertex");
  explore->add_option("--budget", budget, "vertex budget (default n)");
  add_shared(explore);

  // stable-check
  auto* stable = app.add_subcommand("stable-check", "test whether a vertex set is stable");
  std::string set_arg;
  bool induced = false;
  stable->add_option("--in", in_path, "input wgraph file")->required();
  stable->add_option("--set", set_arg, "comma-separated vertex list")->required();
  stable->add_flag("--induced", induced, "measure balls inside the set");
  add_shared(stable);

  // contact
  auto* contact = app.add_subcommand("contact", "simulate the contact process");
  double c_lambda = 1.0, horizon = 10.0;
  std::uint64_t trials = 100, event_budget = cmperc::kDefaultEventBudget;
  std::string initial_arg, w_arg;
  from_config(cfg, "horizon", horizon);
  from_config(cfg, "trials", trials);
  contact->add_option("--in", in_path, "input wgraph file")->required();
  contact->add_option("--lambda", c_lambda, "infection rate");
  contact->add_option("--horizon", horizon, "time horizon");
  contact->add_option("--trials", trials, "number of runs");
  contact->add_option("--initial", initial_arg, "initially infected vertices (default all)");
  contact->add_option("--w", w_arg, "restriction set W (default all)");
  contact->add_option("--event-budget", event_budget, "max events per run");
  add_shared(contact, false);

  // duality-test
  auto* dual = app.add_subcommand("duality-test", "self-duality Monte Carlo check");
  std::string a_arg, b_arg;
  double dual_t = 1.0, dual_lambda = 1.0;
  std::uint64_t dual_trials = 10000;
  dual->add_option("--in", in_path, "input wgraph file")->required();
  dual->add_option("--a", a_arg, "set A")->required();
  dual->add_option("--b", b_arg, "set B")->required();
  dual->add_option("--t", dual_t, "observation time");
  dual->add_option("--lambda", dual_lambda, "infection rate");
  dual->add_option("--trials", dual_trials, "trials per direction");
  add_shared(dual, false);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parameter sweep, CSV output");
  ModelFlags sweep_model;
  sweep_model.add_options(sweep, cfg);
  std::string values_arg, sizes_arg = "100", manifest_path;
  std::uint64_t sweep_trials = 100;
  bool with_span = false;
  from_config(cfg, "values", values_arg);
  from_config(cfg, "sizes", sizes_arg);
  from_config(cfg, "manifest", manifest_path);
  sweep->add_option("--values", values_arg, "comma-separated parameter grid")->required();
  sweep->add_option("--sizes", sizes_arg, "comma-separated sizes");
  sweep->add_option("--trials", sweep_trials, "trials per grid point");
  sweep->add_option("--manifest", manifest_path, "completed-row manifest path");
  sweep->add_flag("--span", with_span, "also report boundary spanning");
  add_shared(sweep);

  // estimate-pc
  auto* pc = app.add_subcommand("estimate-pc", "bisect the critical parameter");
  ModelFlags pc_model;
  pc_model.add_options(pc, cfg);
  std::string pc_sizes_arg = "1000,10000,100000";
  std::uint64_t pc_trials = 1000;
  double tol = 0.04;
  std::string pc_observable = "escape";
  double pc_gamma = 0.05;
  pc->add_option("--sizes", pc_sizes_arg, "comma-separated sizes");
  pc->add_option("--trials", pc_trials, "trials per bisection point");
  pc->add_option("--tol", tol, "bracket width tolerance");
  pc->add_option("--observable", pc_observable,
                 "bisection observable: escape or good-event (1-d Bernoulli only)")
      ->check(CLI::IsMember({"escape", "good-event"}));
  pc->add_option("--gamma", pc_gamma, "good-event cluster fraction threshold");
  add_shared(pc);

  // verify
  auto* verify = app.add_subcommand("verify", "run the structural invariant battery");
  ModelFlags verify_model_flags;
  verify_model_flags.add_options(verify, cfg);
  int instances = 100;
  verify->add_option("--instances", instances, "instances to test");
  add_shared(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gen->parsed()) {
    cmperc::ModelSpec spec = gen_model.resolve();
    cmperc::Rng rng(seed);
    cmperc::WeightedGraph g = cmperc::build_instance(spec, rng);
    std::ostringstream os;
    cmperc::write_wgraph(g, os);
    write_output(out_path, os.str());
    return 0;
  }

  if (cmp->parsed()) {
    cmperc::WeightedGraph g = cmperc::read_wgraph_file(in_path);
    cmperc::CmpConfig c = cmperc::CmpConfig::make(alpha);
    cmperc::CmpResult res = cmperc::compute_cmp(g, c);
    write_output(out_path, cmperc::cmp_result_to_json(g, res, c));
    return 0;
  }

  if (explore->parsed()) {
    cmperc::WeightedGraph g = cmperc::read_wgraph_file(in_path);
    cmperc::CmpConfig c = cmperc::CmpConfig::make(alpha);
    std::size_t b = budget ? static_cast<std::size_t>(budget)
                           : static_cast<std::size_t>(g.n);
    cmperc::ExploreResult er = cmperc::explore_stabiliser(g, start, c, b);
    nlohmann::ordered_json j;
    j["budget_exceeded"] = er.budget_exceeded;
    j["stabiliser"] = er.stabiliser;
    j["touched"] = er.touched;
    write_output(out_path, j.dump(2) + "\n");
    return er.budget_exceeded ? 2 : 0;
  }

  if (stable->parsed()) {
    cmperc::WeightedGraph g = cmperc::read_wgraph_file(in_path);
    cmperc::CmpConfig c = cmperc::CmpConfig::make(alpha);
    VertexSet h = parse_vertex_list(set_arg);
    bool ok = cmperc::is_stable(g, h, c,
                                induced ? cmperc::StableBallMode::induced
                                        : cmperc::StableBallMode::ambient);
    write_output(out_path, std::string(ok ? "stable" : "not-stable") + "\n");
    return 0;
  }

  if (contact->parsed()) {
    cmperc::WeightedGraph g = cmperc::read_wgraph_file(in_path);
    VertexSet all(g.n);
    for (Vertex v = 0; v < g.n; ++v) all[v] = v;
    VertexSet w = w_arg.empty() ? all : parse_vertex_list(w_arg);
    VertexSet a = initial_arg.empty() ? w : parse_vertex_list(initial_arg);
    std::ostringstream os;
    os << "seed,extinction_time,censored,total_infections,exit_count\n";
    bool blew_up = false;
    for (std::uint64_t i = 0; i < trials; ++i) {
      cmperc::Rng rng = cmperc::Rng::stream(seed, i);
      cmperc::ContactRun run =
          cmperc::run_contact(g, w, a, c_lambda, horizon, rng, event_budget);
      blew_up = blew_up || run.blew_up;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%llu,%.17g,%d,%llu,%llu\n",
                    static_cast<unsigned long long>(i),
                    run.censored ? horizon : run.extinction_time, run.censored ? 1 : 0,
                    static_cast<unsigned long long>(run.total_infections),
                    static_cast<unsigned long long>(run.exit_total));
      os << buf;
    }
    write_output(out_path, os.str());
    if (blew_up) {
      std::cerr << "event budget exceeded in at least one run\n";
      return 2;
    }
    return 0;
  }

  if (dual->parsed()) {
    cmperc::WeightedGraph g = cmperc::read_wgraph_file(in_path);
    cmperc::DualityResult r = cmperc::duality_estimate(
        g, parse_vertex_list(a_arg), parse_vertex_list(b_arg), dual_t, dual_lambda,
        dual_trials, seed);
    nlohmann::ordered_json j;
    j["p_forward"] = r.p_forward;
    j["p_backward"] = r.p_backward;
    j["forward_ci"] = {r.fwd_lo, r.fwd_hi};
    j["backward_ci"] = {r.bwd_lo, r.bwd_hi};
    j["trials"] = r.trials;
    j["ci_overlap"] = r.ci_overlap();
    write_output(out_path, j.dump(2) + "\n");
    return 0;
  }

  if (sweep->parsed()) {
    cmperc::SweepConfig sc;
    sc.spec = sweep_model.resolve();
    sc.alpha = alpha;
    sc.values = parse_double_list(values_arg);
    sc.sizes = parse_int_list(sizes_arg);
    sc.trials = sweep_trials;
    sc.seed = seed;
    sc.threads = threads;
    sc.with_span = with_span;
    sc.out_path = out_path.empty() ? "sweep.csv" : out_path;
    sc.manifest_path = manifest_path;
    std::cout << cmperc::run_sweep(sc);
    return 0;
  }

  if (pc->parsed()) {
    cmperc::PcEstimate est = cmperc::estimate_pc(
        pc_model.resolve(), alpha, parse_int_list(pc_sizes_arg), pc_trials, tol, seed,
        threads,
        pc_observable == "good-event" ? cmperc::PcObservable::good_event
                                      : cmperc::PcObservable::escape,
        pc_gamma);
    nlohmann::ordered_json j;
    j["lower"] = est.lower;
    j["upper"] = est.upper;
    j["tol"] = est.tol;
    j["trials_per_point"] = est.trials_per_point;
    j["monotone_ok"] = est.monotone_ok;
    nlohmann::ordered_json crossings = nlohmann::ordered_json::array();
    for (auto [size, x] : est.per_size_crossing) {
      crossings.push_back({{"size", size}, {"crossing", x}});
    }
    j["per_size_crossing"] = std::move(crossings);
    write_output(out_path, j.dump(2) + "\n");
    return est.monotone_ok ? 0 : 1;
  }

  if (verify->parsed()) {
    cmperc::VerifyReport rep =
        cmperc::verify_model(verify_model_flags.resolve(), alpha, instances, seed);
    nlohmann::ordered_json j;
    j["checks"] = rep.checks;
    j["failures"] = rep.failures;
    j["flags"] = rep.flags;
    j["ok"] = rep.ok();
    write_output(out_path, j.dump(2) + "\n");
    return rep.ok() ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
