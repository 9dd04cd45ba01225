#include "boundedrat/json_io.hpp"

#include <cstdio>
#include <sstream>

#include "boundedrat/error.hpp"

namespace boundedrat::io {

std::string num(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ModelError(ErrorCode::BadConfig, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ModelError(ErrorCode::BadConfig, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

RawSetting raw_setting_from_json(const json& j, bool require_pi) {
  RawSetting r;
  r.pG = field<std::vector<double>>(j, "pG");
  r.pB = field<std::vector<double>>(j, "pB");
  r.xG = field<double>(j, "xG");
  r.xB = field<double>(j, "xB");
  if (require_pi || j.contains("pi")) r.pi = field<double>(j, "pi");
  if (j.contains("k") && field<std::size_t>(j, "k") != r.pG.size()) {
    throw ModelError(ErrorCode::DimensionMismatch, "k disagrees with the length of pG");
  }
  return r;
}

DynamicSetting setting_from_json(const json& j) { return validate_setting(raw_setting_from_json(j)); }

json setting_to_json(const DynamicSetting& s) {
  return json{{"k", s.k()},
              {"pG", std::vector<double>(s.pG().begin(), s.pG().end())},
              {"pB", std::vector<double>(s.pB().begin(), s.pB().end())},
              {"xG", s.xG()},
              {"xB", s.xB()},
              {"pi", s.pi()}};
}

std::vector<std::size_t> signals_from_json(const json& j, std::size_t k) {
  std::vector<std::size_t> out;
  if (!j.is_array()) throw ModelError(ErrorCode::BadConfig, "signal list must be an array");
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ModelError(ErrorCode::BadConfig, "signals are integers 1..k");
    const auto s = v.get<long long>();
    if (s < 1 || static_cast<std::size_t>(s) > k) {
      throw ModelError(ErrorCode::SignalOutOfRange, "signal " + std::to_string(s) + " outside 1.." + std::to_string(k));
    }
    out.push_back(static_cast<std::size_t>(s - 1));
  }
  return out;
}

json signals_to_json(const std::vector<std::size_t>& signals) {
  json a = json::array();
  for (auto s : signals) a.push_back(s + 1);
  return a;
}

AFamilyParams a_family_from_json(const json& j, std::size_t k) {
  AFamilyParams p;
  p.N = field<std::size_t>(j, "N");
  p.p_exp = field<double>(j, "p_exp");
  p.pos = signals_from_json(j.at("pos"), k);
  p.neg = signals_from_json(j.at("neg"), k);
  p.r_u = j.value("r_u", 1.0);
  p.r_d = j.value("r_d", 1.0);
  return p;
}

namespace {

const char* action_name(Action a) {
  switch (a) {
    case Action::Safe: return "safe";
    case Action::Risky: return "risky";
    case Action::Hold: return "hold";
  }
  return "?";
}

Action parse_action(const std::string& s) {
  if (s == "safe") return Action::Safe;
  if (s == "risky") return Action::Risky;
  if (s == "hold") return Action::Hold;
  throw ModelError(ErrorCode::BadConfig, "unknown action '" + s + "'");
}

}  // namespace

json policy_to_json(const AutomatonPolicy& p) {
  json actions = json::array();
  json kernel = json::object();
  for (std::size_t q = 0; q < p.num_states(); ++q) {
    actions.push_back(action_name(p.action(q)));
    auto emit = [&](Observation obs) {
      json row = json::object();
      for (const auto& t : p.row(q, obs)) row[std::to_string(t.next)] = t.prob;
      kernel[std::to_string(q) + ":" + (obs ? std::to_string(*obs + 1) : std::string("none"))] = row;
    };
    if (consumes_signals(p.action(q))) {
      for (std::size_t s = 0; s < p.num_signals(); ++s) emit(s);
    } else {
      emit(kNoSignal);
    }
  }
  return json{{"num_states", p.num_states()},
              {"num_signals", p.num_signals()},
              {"initial_state", p.initial_state()},
              {"actions", actions},
              {"kernel", kernel}};
}

AutomatonPolicy policy_from_json(const json& j) {
  const auto m = field<std::size_t>(j, "num_states");
  const auto k = field<std::size_t>(j, "num_signals");
  const auto init = j.value("initial_state", std::size_t{0});
  const auto names = field<std::vector<std::string>>(j, "actions");
  if (names.size() != m) throw ModelError(ErrorCode::DimensionMismatch, "actions must list every state");
  std::vector<Action> actions;
  for (const auto& n : names) actions.push_back(parse_action(n));
  std::vector<std::vector<KernelRow>> rows(m);
  for (std::size_t q = 0; q < m; ++q) rows[q].resize(consumes_signals(actions[q]) ? k : 1);
  const auto& kernel = j.at("kernel");
  for (auto it = kernel.begin(); it != kernel.end(); ++it) {
    const std::string key = it.key();
    const auto colon = key.find(':');
    if (colon == std::string::npos) throw ModelError(ErrorCode::BadConfig, "kernel key '" + key + "' is not state:obs");
    std::size_t q = 0, obs_index = 0;
    try {
      q = std::stoul(key.substr(0, colon));
      const std::string obs = key.substr(colon + 1);
      obs_index = obs == "none" ? 0 : std::stoul(obs) - 1;
      if (q >= m) throw ModelError(ErrorCode::IndexOutOfRange, "kernel key '" + key + "' names an unknown state");
      if ((obs == "none") == consumes_signals(actions[q]) || obs_index >= rows[q].size()) {
        throw ModelError(ErrorCode::SignalOutOfRange, "kernel key '" + key + "' does not match the state's action");
      }
    } catch (const std::logic_error&) {
      throw ModelError(ErrorCode::BadConfig, "bad kernel key '" + key + "'");
    }
    KernelRow row;
    for (auto e = it.value().begin(); e != it.value().end(); ++e) {
      row.push_back({std::stoul(e.key()), e.value().get<double>()});
    }
    rows[q][obs_index] = std::move(row);
  }
  return AutomatonPolicy(k, init, std::move(actions), std::move(rows));
}

json problem_to_json(const CompProblem& p) {
  json machines = json::array();
  for (const auto& m : p.machines) {
    json out = json::array(), cx = json::array();
    for (std::size_t s = 0; s < p.states.size(); ++s) {
      json o = json::array(), c = json::array();
      for (std::size_t t = 0; t < p.types.size(); ++t) {
        o.push_back(p.actions[m.out[p.cell(s, t)]]);
        c.push_back(m.complexity[p.cell(s, t)]);
      }
      out.push_back(o);
      cx.push_back(c);
    }
    machines.push_back({{"name", m.name}, {"out", out}, {"complexity", cx}});
  }
  json utility = json::array();
  for (const auto& e : p.utility.entries()) {
    utility.push_back({{"s", p.states[e.s]}, {"t", p.types[e.t]}, {"a", p.actions[e.a]}, {"c", e.c}, {"u", e.value}});
  }
  return json{{"states", p.states}, {"types", p.types},       {"actions", p.actions},
              {"prior", p.prior},   {"machines", machines}, {"utility", utility}};
}

namespace {

std::size_t label_index(const std::vector<std::string>& labels, const std::string& l, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == l) return i;
  }
  throw ModelError(ErrorCode::BadConfig, std::string("unknown ") + what + " '" + l + "'");
}

}  // namespace

CompProblem problem_from_json(const json& j) {
  CompProblem p;
  p.states = field<std::vector<std::string>>(j, "states");
  p.types = field<std::vector<std::string>>(j, "types");
  p.actions = field<std::vector<std::string>>(j, "actions");
  p.prior = field<std::vector<double>>(j, "prior");
  const std::size_t ns = p.states.size(), nt = p.types.size();
  for (const auto& mj : j.at("machines")) {
    MachineSpec m;
    m.name = field<std::string>(mj, "name");
    const auto out = field<std::vector<std::vector<std::string>>>(mj, "out");
    const auto cx = field<std::vector<std::vector<std::uint64_t>>>(mj, "complexity");
    if (out.size() != ns || cx.size() != ns) throw ModelError(ErrorCode::DimensionMismatch, "machine tables need one row per state");
    for (std::size_t s = 0; s < ns; ++s) {
      if (out[s].size() != nt || cx[s].size() != nt) throw ModelError(ErrorCode::DimensionMismatch, "machine rows need one entry per type");
      for (std::size_t t = 0; t < nt; ++t) {
        m.out.push_back(label_index(p.actions, out[s][t], "action"));
        m.complexity.push_back(cx[s][t]);
      }
    }
    p.machines.push_back(std::move(m));
  }
  p.utility = UtilityTable(ns, nt, p.actions.size());
  for (const auto& e : j.at("utility")) {
    p.utility.set(label_index(p.states, field<std::string>(e, "s"), "state"),
                  label_index(p.types, field<std::string>(e, "t"), "type"),
                  label_index(p.actions, field<std::string>(e, "a"), "action"), field<std::uint64_t>(e, "c"),
                  field<double>(e, "u"));
  }
  validate_problem(p);
  return p;
}

std::string chain_csv(const JointChainModel& chain, const StationaryDist& dist) {
  std::ostringstream os;
  os << "nature,q,reward,stationary_mass\n";
  for (std::size_t i = 0; i < chain.dim(); ++i) {
    os << (chain.nature_of(i) == 0 ? "G" : "B") << ',' << chain.state_of(i) << ','
       << num(chain.reward(static_cast<Eigen::Index>(i))) << ','
       << num(dist.mu(static_cast<Eigen::Index>(i))) << '\n';
  }
  return os.str();
}

std::string trace_csv(std::size_t N, double pi, const OptResult& r) {
  std::ostringstream os;
  os << "n,pi,p_exp,payoff\n";
  for (const auto& g : r.grid_trace) os << N << ',' << num(pi) << ',' << num(g.p_exp) << ',' << num(g.payoff) << '\n';
  return os.str();
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "n,pi,p_exp,payoff\n";
  for (const auto& c : curve) os << c.n << ',' << num(c.pi) << ',' << num(c.p_exp) << ',' << num(c.payoff) << '\n';
  return os.str();
}

std::string batches_csv(const SimResult& r) {
  std::ostringstream os;
  os << "batch,mean\n";
  for (std::size_t b = 0; b < r.batch_means.size(); ++b) os << b << ',' << num(r.batch_means[b]) << '\n';
  os << "summary_mean,summary_std_error\n" << num(r.mean) << ',' << num(r.std_error) << '\n';
  return os.str();
}

std::string reader_table_csv(const ReaderDPTable& t) {
  std::ostringstream os;
  os << "i,d,W,stop\n";
  for (std::size_t i = 0; i <= t.n(); ++i) {
    for (int d = -static_cast<int>(i); d <= static_cast<int>(i); ++d) {
      os << i << ',' << d << ',' << num(t.W(i, d)) << ',' << (t.stop(i, d) ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

std::string trajectory_csv(const std::vector<Distribution>& traj, const DecisionRule& rule) {
  std::ostringstream os;
  os << "step";
  const std::size_t m = traj.empty() ? 0 : traj.front().size();
  for (std::size_t q = 0; q < m; ++q) os << ",p" << q;
  os << ",modal_decision\n";
  for (std::size_t step = 0; step < traj.size(); ++step) {
    os << step;
    for (double x : traj[step]) os << ',' << num(x);
    os << ',' << (decision_mass(traj[step], rule).modal() == Decision::G ? "G" : "B") << '\n';
  }
  return os.str();
}

}  // namespace boundedrat::io
