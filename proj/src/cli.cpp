#include "boundedrat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "boundedrat/error.hpp"
#include "boundedrat/json_io.hpp"
#include "boundedrat/reproduce.hpp"

namespace boundedrat {

namespace fs = std::filesystem;
using io::json;
using io::num;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
};

json load_config(const CommonOptions& o) {
  json cfg = json::object();
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw ModelError(ErrorCode::BadConfig, "cannot open config " + o.config_path);
    try {
      cfg = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ModelError(ErrorCode::BadConfig, o.config_path + ": " + e.what());
    }
  }
  if (!cfg.is_object()) throw ModelError(ErrorCode::BadConfig, "config must be a JSON object");
  for (const auto& ov : o.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ModelError(ErrorCode::BadConfig, "--set expects key=value");
    const std::string key = ov.substr(0, eq);
    const std::string value = ov.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = value;
    if (v.is_structured()) throw ModelError(ErrorCode::BadConfig, "--set only overrides scalar fields");
    cfg[key] = v;
  }
  if (o.seed) cfg["seed"] = *o.seed;
  return cfg;
}

std::optional<fs::path> output_dir(const CommonOptions& o, const json& cfg) {
  std::string dir = o.out_dir;
  if (dir.empty() && cfg.contains("output_path")) dir = cfg.at("output_path").get<std::string>();
  if (dir.empty()) return std::nullopt;
  fs::create_directories(dir);
  return fs::path(dir);
}

void write_text(const std::optional<fs::path>& dir, const std::string& name, const std::string& content) {
  if (!dir) return;
  std::ofstream f(*dir / name, std::ios::binary);
  if (!f) throw ModelError(ErrorCode::BadConfig, "cannot write " + (*dir / name).string());
  f << content;
}

// Result numbers carry the same 12 significant digits as the CSV outputs.
json jnum(double x) { return json::parse(num(x)); }

const json& section(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ModelError(ErrorCode::BadConfig, std::string("missing section '") + key + "'");
  return cfg.at(key);
}

AutomatonPolicy dynamic_policy(const json& cfg, std::size_t k) {
  const auto& a = section(cfg, "automaton");
  if (a.contains("a_family")) return build_a_family(k, io::a_family_from_json(a.at("a_family"), k));
  if (a.contains("policy")) return io::policy_from_json(a.at("policy"));
  throw ModelError(ErrorCode::BadConfig, "automaton needs 'a_family' or 'policy'");
}

AutomatonPolicy static_policy(const json& cfg) {
  const auto& a = section(cfg, "automaton");
  if (a.contains("linear_sticky")) {
    const auto& l = a.at("linear_sticky");
    const auto k = l.at("k").get<std::size_t>();
    const auto good = io::signals_from_json(json::array({l.at("good_signal")}), k).front();
    const auto bad = io::signals_from_json(json::array({l.at("bad_signal")}), k).front();
    return build_linear_sticky(l.at("N").get<std::size_t>(), l.at("left_prob").get<std::vector<double>>(),
                               l.at("right_prob").get<std::vector<double>>(), good, bad, k,
                               l.value("initial_state", std::size_t{0}));
  }
  if (a.contains("policy")) return io::policy_from_json(a.at("policy"));
  throw ModelError(ErrorCode::BadConfig, "automaton needs 'linear_sticky' or 'policy'");
}

Partition partition_from(const json& cfg, const DynamicSetting& setting) {
  if (cfg.contains("pos") || cfg.contains("neg")) {
    return {io::signals_from_json(section(cfg, "pos"), setting.k()), io::signals_from_json(section(cfg, "neg"), setting.k())};
  }
  return default_partition(setting);
}

std::vector<double> grid_from(const json& cfg) {
  if (!cfg.contains("grid")) return log_grid();
  const auto& g = cfg.at("grid");
  if (g.is_array()) return g.get<std::vector<double>>();
  return log_grid(g.value("points", std::size_t{40}), g.value("lo", 1e-5), g.value("hi", 1.0));
}

json partition_json(const Partition& p) {
  return json{{"pos", io::signals_to_json(p.pos)}, {"neg", io::signals_to_json(p.neg)}};
}

const char* decision_name(Decision d) { return d == Decision::G ? "G" : "B"; }

DecisionRule rule_from(const json& cfg, std::size_t states) {
  if (!cfg.contains("rule")) return midpoint_rule(states);
  DecisionRule r;
  for (const auto& x : cfg.at("rule")) {
    const auto s = x.get<std::string>();
    if (s != "G" && s != "B") throw ModelError(ErrorCode::BadConfig, "rule entries are \"G\" or \"B\"");
    r.decide.push_back(s == "G" ? Decision::G : Decision::B);
  }
  return r;
}

std::vector<int> bits_from(const json& j) {
  std::vector<int> out;
  for (const auto& b : j) {
    const int v = b.get<int>();
    if (v != 0 && v != 1) throw ModelError(ErrorCode::BadConfig, "reader sequences hold bits 0/1");
    out.push_back(v);
  }
  return out;
}

ReaderProblem reader_from(const json& cfg) {
  ReaderProblem p;
  p.n = cfg.at("n").get<std::size_t>();
  p.rho = cfg.at("rho").get<double>();
  p.c = cfg.at("c").get<double>();
  p.prior1 = cfg.value("prior1", 0.5);
  validate_reader(p);
  return p;
}

std::string run_line(const char* label, const ReaderRun& r) {
  std::ostringstream os;
  os << label << " guess " << r.guess << " reads " << r.reads << '\n';
  return os.str();
}

// --- subcommands ---------------------------------------------------------------

int cmd_eval_exact(const json& cfg, const std::optional<fs::path>& dir, std::ostream& out) {
  const auto setting = io::setting_from_json(section(cfg, "setting"));
  const auto policy = dynamic_policy(cfg, setting.k());
  const auto chain = build_joint_chain(setting, policy);
  const auto dist = stationary(chain);
  const double payoff = exact_average_payoff(chain, dist);
  out << "payoff " << num(payoff) << '\n'
      << "oracle_bound " << num(oracle_upper_bound(setting)) << '\n'
      << "residual " << num(dist.residual) << '\n';
  write_text(dir, "chain.csv", io::chain_csv(chain, dist));
  write_text(dir, "result.json",
             json{{"payoff", jnum(payoff)}, {"residual", jnum(dist.residual)}, {"policy", io::policy_to_json(policy)}}.dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const json& cfg, const std::optional<fs::path>& dir, std::size_t workers, std::ostream& out) {
  const auto setting = io::setting_from_json(section(cfg, "setting"));
  const auto policy = dynamic_policy(cfg, setting.k());
  SimConfig sc;
  sc.rounds = cfg.value("rounds", sc.rounds);
  if (cfg.contains("burn_in")) sc.burn_in = cfg.at("burn_in").get<std::uint64_t>();
  sc.batches = cfg.value("batches", sc.batches);
  sc.seed = cfg.value("seed", sc.seed);
  json sidecar = {{"seed", sc.seed}, {"rounds", sc.rounds}, {"burn_in", sc.burn_in.value_or(sc.rounds / 100)},
                  {"batches", sc.batches}, {"config", cfg}};

  if (cfg.contains("seeds")) {
    const auto seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
    const auto sweep = seed_sweep(setting, policy, sc, seeds, workers);
    std::ostringstream os;
    os << "seed,exact,mc_mean,std_error,z\n";
    for (const auto& r : sweep) {
      os << r.seed << ',' << num(r.exact) << ',' << num(r.mc_mean) << ',' << num(r.std_error) << ',' << num(r.z) << '\n';
    }
    out << os.str();
    write_text(dir, "seeds.csv", os.str());
    write_text(dir, "run.json", sidecar.dump(2) + "\n");
    return kExitOk;
  }

  const auto sim = simulate_run(setting, policy, sc);
  out << "mean " << num(sim.mean) << '\n'
      << "std_error " << num(sim.std_error) << '\n'
      << "rounds_used " << sim.rounds_used << '\n';
  if (cfg.value("compare", false)) {
    const double exact = exact_average_payoff(setting, policy);
    out << "exact " << num(exact) << '\n' << "z " << num((sim.mean - exact) / sim.std_error) << '\n';
  }
  sidecar["rounds_used"] = sim.rounds_used;
  sidecar["mean"] = jnum(sim.mean);
  sidecar["std_error"] = jnum(sim.std_error);
  write_text(dir, "batches.csv", io::batches_csv(sim));
  write_text(dir, "run.json", sidecar.dump(2) + "\n");
  return kExitOk;
}

int cmd_optimize(const json& cfg, const std::optional<fs::path>& dir, std::size_t workers, std::ostream& out) {
  const auto setting = io::setting_from_json(section(cfg, "setting"));
  const auto N = section(cfg, "N").get<std::size_t>();
  const double r_u = cfg.value("r_u", 1.0);
  const double r_d = cfg.value("r_d", 1.0);
  const auto grid = grid_from(cfg);
  OptResult r;
  if (cfg.value("exhaustive", false)) {
    r = exhaustive_partition_search(setting, N, r_u, r_d, grid, workers, cfg.value("search_rates", false));
  } else {
    r = optimize_pexp(setting, N, partition_from(cfg, setting), r_u, r_d, grid, workers);
  }
  const auto pj = partition_json(r.partition_used);
  out << "best_pexp " << num(r.best_pexp) << '\n'
      << "best_payoff " << num(r.best_payoff) << '\n'
      << "pos " << pj.at("pos").dump() << " neg " << pj.at("neg").dump() << '\n'
      << "r_u " << num(r.r_u) << " r_d " << num(r.r_d) << '\n';
  write_text(dir, "trace.csv", io::trace_csv(N, setting.pi(), r));
  json res = {{"N", N}, {"best_pexp", jnum(r.best_pexp)}, {"best_payoff", jnum(r.best_payoff)}, {"r_u", r.r_u}, {"r_d", r.r_d}};
  res.update(pj);
  write_text(dir, "result.json", res.dump(2) + "\n");
  return kExitOk;
}

int cmd_theorem1(const json& cfg, const std::optional<fs::path>& dir, std::size_t workers, std::ostream& out) {
  const auto base = io::raw_setting_from_json(section(cfg, "setting"), false);
  auto probe = base;
  probe.pi = 0.5;
  const auto checked = validate_setting(probe);
  const auto& sj = section(cfg, "schedule");
  ScheduleSpec sched;
  sched.pi_c = sj.value("pi_c", 1.0);
  sched.pi_a = sj.value("pi_a", 2.0);
  sched.pexp_c = sj.value("pexp_c", 1.0);
  sched.pexp_b = sj.value("pexp_b", 1.0);
  sched.n_list = sj.at("n_list").get<std::vector<std::size_t>>();
  const auto curve = theorem1_curve(base, sched, partition_from(cfg, checked), cfg.value("r_u", 1.0),
                                    cfg.value("r_d", 1.0), cfg.value("require_hypothesis", true), workers);
  const auto csv = io::curve_csv(curve);
  out << csv;
  write_text(dir, "curve.csv", csv);
  return kExitOk;
}

int cmd_static_demo(const json& cfg, const std::optional<fs::path>& dir, std::ostream& out) {
  const auto policy = static_policy(cfg);
  const auto rule = rule_from(cfg, policy.num_states());
  const auto kind = cfg.value("kind", std::string("polarization"));
  const auto k = policy.num_signals();
  if (kind == "polarization") {
    const auto seq = io::signals_from_json(section(cfg, "sequence"), k);
    const auto r = polarization_demo(policy, cfg.at("start_a").get<std::size_t>(), cfg.at("start_b").get<std::size_t>(), seq, rule);
    out << "decision_a " << decision_name(r.decision_a.modal()) << " (G " << num(r.decision_a.g) << ", B " << num(r.decision_a.b) << ")\n"
        << "decision_b " << decision_name(r.decision_b.modal()) << " (G " << num(r.decision_b.g) << ", B " << num(r.decision_b.b) << ")\n"
        << "diverged " << (r.diverged ? "true" : "false") << '\n';
    write_text(dir, "trajectory_a.csv", io::trajectory_csv(r.trajectory_a, rule));
    write_text(dir, "trajectory_b.csv", io::trajectory_csv(r.trajectory_b, rule));
  } else if (kind == "first_impression") {
    const auto seq = io::signals_from_json(section(cfg, "sequence"), k);
    const auto r = first_impression_demo(policy, cfg.at("start").get<std::size_t>(), seq, rule);
    out << "decision_forward " << decision_name(r.decision_forward.modal()) << '\n'
        << "decision_reversed " << decision_name(r.decision_reversed.modal()) << '\n'
        << "order_sensitive " << (r.order_sensitive ? "true" : "false") << '\n';
    write_text(dir, "forward.csv", io::trajectory_csv(r.trajectory_forward, rule));
    write_text(dir, "reversed.csv", io::trajectory_csv(r.trajectory_reversed, rule));
  } else if (kind == "expected_utility") {
    const auto& sj = section(cfg, "setting");
    StaticSetting s;
    s.pG = sj.at("pG").get<std::vector<double>>();
    s.pB = sj.at("pB").get<std::vector<double>>();
    s.eta = sj.at("eta").get<double>();
    s.prior_G = sj.value("prior_G", 0.5);
    if (sj.contains("utility")) {
      const auto u = sj.at("utility").get<std::vector<std::vector<double>>>();
      if (u.size() != 2 || u[0].size() != 2 || u[1].size() != 2) {
        throw ModelError(ErrorCode::BadConfig, "utility is a 2x2 array [decision][truth]");
      }
      s.utility = {{{u[0][0], u[0][1]}, {u[1][0], u[1][1]}}};
    }
    out << "expected_utility " << num(static_expected_utility(s, policy, rule)) << '\n';
  } else {
    throw ModelError(ErrorCode::BadConfig, "kind must be polarization, first_impression or expected_utility");
  }
  return kExitOk;
}

int cmd_reader(const json& cfg, const std::optional<fs::path>& dir, std::ostream& out) {
  const auto p = reader_from(cfg);
  const auto demo = cfg.value("demo", std::string("table"));
  const auto table = solve_reader_dp(p);
  write_text(dir, "table.csv", io::reader_table_csv(table));
  if (demo == "table") {
    out << "W00 " << num(table.W(0, 0)) << '\n'
        << "stop00 " << (table.stop(0, 0) ? "true" : "false") << '\n'
        << "disregard_index " << disregard_index(table) << '\n';
  } else if (demo == "simulate") {
    out << run_line("run", simulate_reader(p, table, bits_from(section(cfg, "sequence"))));
  } else if (demo == "first_impression") {
    const auto r = first_impression_reader(p, bits_from(section(cfg, "sequence")));
    out << run_line("forward", r.forward) << run_line("reversed", r.reversed)
        << "full_info_guess " << r.full_info_guess << '\n'
        << "differs " << (r.differs ? "true" : "false") << '\n';
  } else if (demo == "polarization") {
    auto pb = p;
    pb.prior1 = section(cfg, "prior1_b").get<double>();
    const auto r = polarization_reader(p, pb, bits_from(section(cfg, "sequence")));
    out << run_line("agent_a", r.a) << run_line("agent_b", r.b) << "diverged " << (r.diverged ? "true" : "false") << '\n';
  } else {
    throw ModelError(ErrorCode::BadConfig, "demo must be table, simulate, first_impression or polarization");
  }
  return kExitOk;
}

int cmd_machine(const json& cfg, const std::optional<fs::path>& dir, std::ostream& out) {
  CompProblem problem;
  if (cfg.contains("primality")) {
    const auto& pj = cfg.at("primality");
    PrimalityConfig pc;
    pc.type_bound = pj.value("type_bound", pc.type_bound);
    pc.step_cap = pj.value("step_cap", pc.step_cap);
    for (const auto& m : pj.at("machines")) pc.machines.push_back(PrimalityMachine::parse(m.get<std::string>()));
    problem = make_primality_instance(pc);
  } else {
    problem = io::problem_from_json(section(cfg, "problem"));
  }
  validate_problem(problem);
  std::ostringstream os;
  os << "index,machine,expected_utility\n";
  for (std::size_t i = 0; i < problem.machines.size(); ++i) {
    os << i << ',' << problem.machines[i].name << ',' << num(expected_utility(problem, i)) << '\n';
  }
  const auto best = best_machine(problem);
  out << os.str() << "best " << problem.machines[best.index].name << ' ' << num(best.utility) << '\n';
  write_text(dir, "machines.csv", os.str());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resource-bounded decision models: evaluation, simulation and search", "boundedrat"};
  app.require_subcommand(1);
  CommonOptions opt;
  std::string golden;
  bool no_golden = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("-c,--config", opt.config_path, "JSON config file");
    if (needs_config) c->required();
    sub->add_option("-o,--out", opt.out_dir, "output directory");
    sub->add_option("--set", opt.overrides, "override a scalar config field, key=value");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--workers", opt.workers, "worker threads for parallel maps")->check(CLI::PositiveNumber);
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"eval-exact", "exact long-run payoff of an automaton in a dynamic setting"},
      {"simulate", "Monte Carlo run with batch-means standard error"},
      {"optimize", "p_exp and signal-partition search"},
      {"theorem1", "exact payoff curve along a limit schedule"},
      {"static-demo", "static-nature polarization / first-impression demos"},
      {"reader", "costly-evidence reader: DP table and demos"},
      {"machine", "complexity-charged machine evaluation"}};
  for (const auto& [name, desc] : commands) add_common(app.add_subcommand(name, desc), true);
  auto* rep = app.add_subcommand("reproduce", "run every reported experiment and diff against golden files");
  rep->add_option("-o,--out", opt.out_dir, "output directory (default reproduce_out)");
  rep->add_option("--golden", golden, "golden directory (default: committed golden/)");
  rep->add_flag("--no-golden", no_golden, "skip the golden comparison");
  rep->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "reproduce") {
      ReproduceOptions ro;
      if (!opt.out_dir.empty()) ro.out_dir = opt.out_dir;
      if (!no_golden) ro.golden_dir = golden.empty() ? default_golden_dir() : fs::path(golden);
      ro.workers = opt.workers;
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = reproduce(ro);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ifstream report(ro.out_dir / "report.txt");
      out << report.rdbuf();
      err << "reproduce finished in " << num(secs) << " s\n";
      return res.ok() ? kExitOk : kExitMismatch;
    }
    const json cfg = load_config(opt);
    const auto dir = output_dir(opt, cfg);
    if (name == "eval-exact") return cmd_eval_exact(cfg, dir, out);
    if (name == "simulate") return cmd_simulate(cfg, dir, opt.workers, out);
    if (name == "optimize") return cmd_optimize(cfg, dir, opt.workers, out);
    if (name == "theorem1") return cmd_theorem1(cfg, dir, opt.workers, out);
    if (name == "static-demo") return cmd_static_demo(cfg, dir, out);
    if (name == "reader") return cmd_reader(cfg, dir, out);
    if (name == "machine") return cmd_machine(cfg, dir, out);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace boundedrat
