/*
 Copyright 2026 The lipsol Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "lipsol/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "lipsol/analysis.hpp"
#include "lipsol/error.hpp"
#include "lipsol/geometry.hpp"
#include "lipsol/problem.hpp"
#include "lipsol/sim.hpp"
#include "lipsol/solvers.hpp"

namespace lipsol::cli {

namespace {

using nlohmann::json;

class UsageError : public Error {
public:
  using Error::Error;
};

struct Config {
  std::string problem;
  std::vector<double> x;
  std::vector<std::string> methods{"socp"};
  std::string provider = "expr";
  double k = 1.0;
  double qcqp_tol = 1e-10;
  std::size_t max_iter = 10000;
  double newton_tol = 1e-10;
  std::size_t newton_max_iter = 100;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::vector<double> steps;
  std::vector<double> lower;
  std::vector<double> upper;
  std::optional<double> halfwidth;
  bool full_domain = false;
  std::size_t workers = 1;
  std::string output;
  std::string format;
  std::vector<std::string> dynamics;
  std::string controller = "socp";
  std::vector<double> x0;
  double dt = kDefaultTimeStep;
  double horizon = 1.0;
  bool zoh = false;
};

json vec_json(const Eigen::VectorXd &v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd to_vector(const std::vector<double> &v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::uint64_t resolve_seed(const Config &cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char *env = std::getenv("LIPSOL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception &) {
      throw UsageError(std::string("LIPSOL_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

ParametricProblem load(const Config &cfg) {
  try {
    return load_problem(cfg.problem);
  } catch (const ProblemError &e) {
    throw UsageError(e.what());
  }
}

ProviderSettings provider_settings(const Config &cfg) {
  ProviderSettings ps;
  ps.newton.tol = cfg.newton_tol;
  ps.newton.max_iter = cfg.newton_max_iter;
  ps.steiner_samples = cfg.samples.value_or(kDefaultSteinerSamples);
  ps.seed = resolve_seed(cfg);
  return ps;
}

SolverSettings solver_settings(const Config &cfg) {
  SolverSettings s;
  s.qcqp.k = cfg.k;
  s.qcqp.tol = cfg.qcqp_tol;
  s.qcqp.max_iter = cfg.max_iter;
  return s;
}

ProviderKind provider_kind(const Config &cfg) {
  ProviderKind kind;
  try {
    kind = parse_provider(cfg.provider);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  if (kind == ProviderKind::steiner && !cfg.samples) {
    throw UsageError("--provider steiner requires --samples");
  }
  return kind;
}

std::vector<Method> methods(const Config &cfg) {
  std::vector<Method> out;
  for (const auto &tag : cfg.methods) {
    try {
      const Method m = parse_method(tag);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("at least one --method is required");
  return out;
}

// Grid window: explicit --lower/--upper, the whole domain with --full, or a
// box around the domain midpoint (half-width --halfwidth, default five
// coarse cells, so the finest level is local enough to stay tractable).
GridSpec grid(const Config &cfg, const ParametricProblem &prob, bool local_default) {
  if (cfg.steps.empty()) throw UsageError("--steps is required");
  for (std::size_t l = 1; l < cfg.steps.size(); ++l) {
    if (!(cfg.steps[l] < cfg.steps[l - 1])) throw UsageError("--steps must be decreasing");
  }
  if (!(cfg.steps.front() > 0.0)) throw UsageError("--steps must be positive");
  Box box = prob.domain;
  if (!cfg.lower.empty() || !cfg.upper.empty()) {
    if (cfg.lower.size() != prob.n || cfg.upper.size() != prob.n) {
      throw UsageError(fmt::format("--lower and --upper need {} values each", prob.n));
    }
    box.lower = cfg.lower;
    box.upper = cfg.upper;
  } else if (!cfg.full_domain && (local_default || cfg.halfwidth)) {
    const double h = cfg.halfwidth.value_or(5.0 * cfg.steps.front());
    for (std::size_t k = 0; k < prob.n; ++k) {
      const double mid = 0.5 * (prob.domain.lower[k] + prob.domain.upper[k]);
      box.lower[k] = std::max(prob.domain.lower[k], mid - h);
      box.upper[k] = std::min(prob.domain.upper[k], mid + h);
    }
  }
  std::vector<double> levels;
  for (double s : cfg.steps) levels.push_back(s / cfg.steps.front());
  GridSpec g = GridSpec::over(box, cfg.steps.front(), levels);
  try {
    g.validate();
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  return g;
}

SweepSettings sweep_settings(const Config &cfg) {
  SweepSettings s;
  s.provider = provider_kind(cfg);
  s.provider_settings = provider_settings(cfg);
  s.solver = solver_settings(cfg);
  s.workers = std::max<std::size_t>(1, cfg.workers);
  return s;
}

// Writes to --output when given, otherwise to `out`.
template <typename Fn>
void emit(const Config &cfg, std::ostream &out, Fn &&write) {
  if (cfg.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw UsageError("cannot open output file '" + cfg.output + "'");
  write(file);
}

void cmd_list(std::ostream &out) {
  json arr = json::array();
  for (const auto &name : registry_names()) {
    const ParametricProblem p = registry_get(name);
    arr.push_back({{"name", name}, {"n", p.n}, {"m", p.m}, {"p", p.p}});
  }
  out << arr.dump(2) << '\n';
}

void cmd_solve(const Config &cfg, std::ostream &out) {
  const ParametricProblem prob = load(cfg);
  const std::vector<Method> ms = methods(cfg);
  if (cfg.x.size() != prob.n) {
    throw UsageError(fmt::format("--x needs {} comma-separated values", prob.n));
  }
  const auto provider = make_provider(provider_kind(cfg), provider_settings(cfg));
  const ProblemInstance inst = instantiate(prob, to_vector(cfg.x), provider.get());
  const SolverSettings settings = solver_settings(cfg);

  json results = json::array();
  for (Method m : ms) {
    const SolveResult r = solve(m, inst, settings);
    json j{{"method", to_string(m)},
           {"u", vec_json(r.u)},
           {"status", to_string(r.status)},
           {"feasibility_residual", r.feasibility_residual}};
    if (r.radius) j["radius"] = *r.radius;
    if (r.active_set) {
      std::vector<std::size_t> one_based;
      for (std::size_t i : *r.active_set) one_based.push_back(i + 1);
      j["active_set"] = one_based;
    }
    if (r.iterations) j["iterations"] = *r.iterations;
    results.push_back(j);
  }
  json doc{{"problem", prob.name},
           {"x", cfg.x},
           {"provider", cfg.provider},
           {"pi_f", vec_json(inst.pi_f)}};
  if (results.size() == 1) {
    doc.update(results[0]);
  } else {
    doc["results"] = results;
  }
  emit(cfg, out, [&](std::ostream &o) { o << doc.dump(2) << '\n'; });
}

json records_json(const std::vector<SweepRecord> &records) {
  json arr = json::array();
  for (const auto &rec : records) {
    json res = json::object();
    for (const auto &[m, o] : rec.results) {
      json r{{"u", vec_json(o.u)}, {"status", to_string(o.status)}};
      r["residual"] = std::isnan(o.feasibility_residual) ? json(nullptr) : json(o.feasibility_residual);
      if (!o.message.empty()) r["message"] = o.message;
      res[to_string(m)] = r;
    }
    json j{{"level", rec.level}, {"step", rec.step}, {"x", vec_json(rec.x)}, {"results", res}};
    if (rec.radius) j["radius"] = *rec.radius;
    arr.push_back(j);
  }
  return arr;
}

void cmd_sweep(const Config &cfg, std::ostream &out) {
  const ParametricProblem prob = load(cfg);
  const std::vector<Method> ms = methods(cfg);
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
  const auto records = sweep(prob, ms, grid(cfg, prob, false), sweep_settings(cfg));
  emit(cfg, out, [&](std::ostream &o) {
    if (format == "csv") {
      write_sweep_csv(o, records, ms);
    } else {
      o << records_json(records).dump(2) << '\n';
    }
  });
}

void cmd_lipschitz(const Config &cfg, std::ostream &out) {
  const ParametricProblem prob = load(cfg);
  const std::vector<Method> ms = methods(cfg);
  const auto records = sweep(prob, ms, grid(cfg, prob, true), sweep_settings(cfg));
  json reports = json::array();
  for (Method m : ms) reports.push_back(json::parse(report_to_json(estimate_lipschitz(records, m))));
  json doc{{"problem", prob.name}, {"provider", cfg.provider}, {"reports", reports}};
  if (prob.constants && provider_kind(cfg) == ProviderKind::expr) {
    doc["theoretical_bound"] = lipschitz_bound(*prob.constants, prob.p);
  }
  emit(cfg, out, [&](std::ostream &o) { o << doc.dump(2) << '\n'; });
}

void cmd_compare(const Config &cfg, std::ostream &out) {
  const ParametricProblem prob = load(cfg);
  std::vector<Method> ms = methods(cfg);
  if (std::find(ms.begin(), ms.end(), Method::qp_oracle) == ms.end()) {
    ms.push_back(Method::qp_oracle);
  }
  const auto records = sweep(prob, ms, grid(cfg, prob, false), sweep_settings(cfg));
  const ComparisonSummary summary = compare_methods(records);
  json doc = json::parse(comparison_to_json(summary));
  doc["problem"] = prob.name;
  emit(cfg, out, [&](std::ostream &o) { o << doc.dump(2) << '\n'; });
}

void cmd_simulate(const Config &cfg, std::ostream &out) {
  const ParametricProblem prob = load(cfg);
  if (cfg.dynamics.empty()) throw UsageError("--dynamics is required (one expression per state)");
  if (cfg.x0.size() != prob.n) {
    throw UsageError(fmt::format("--x0 needs {} comma-separated values", prob.n));
  }
  Dynamics dyn;
  try {
    dyn = Dynamics::parse(cfg.dynamics);
    dyn.validate(prob.n, prob.m);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  Method controller;
  try {
    controller = parse_method(cfg.controller);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  SimSettings s;
  s.provider = provider_kind(cfg);
  s.provider_settings = provider_settings(cfg);
  s.solver = solver_settings(cfg);
  s.zero_order_hold = cfg.zoh;
  const Trajectory traj = simulate(prob, dyn, controller, to_vector(cfg.x0), cfg.dt, cfg.horizon, s);
  emit(cfg, out, [&](std::ostream &o) { write_trajectory_csv(o, traj); });
}

void add_problem_options(CLI::App *cmd, Config &cfg) {
  cmd->add_option("--problem", cfg.problem, "built-in name or problem file path")->required();
  cmd->add_option("--provider", cfg.provider, "feasible point: expr | analytic_center | steiner");
  cmd->add_option("--k", cfg.k, "QCQP tuning parameter k > 0");
  cmd->add_option("--tol", cfg.qcqp_tol, "QCQP (Dykstra) stopping tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "QCQP iteration cap");
  cmd->add_option("--newton-tol", cfg.newton_tol, "analytic center gradient tolerance");
  cmd->add_option("--newton-max-iter", cfg.newton_max_iter, "analytic center iteration cap");
  cmd->add_option("--samples", cfg.samples, "Steiner point Monte Carlo samples");
  cmd->add_option("--seed", cfg.seed, "random seed (default: $LIPSOL_SEED or 0)");
  cmd->add_option("--output", cfg.output, "write data here instead of standard output");
}

void add_grid_options(CLI::App *cmd, Config &cfg) {
  cmd->add_option("--steps,--step", cfg.steps, "grid step per refinement level, coarse first")
      ->delimiter(',')
      ->required();
  cmd->add_option("--lower", cfg.lower, "grid window lower corner")->delimiter(',');
  cmd->add_option("--upper", cfg.upper, "grid window upper corner")->delimiter(',');
  cmd->add_option("--halfwidth", cfg.halfwidth, "window half-width around the domain midpoint");
  cmd->add_flag("--full", cfg.full_domain, "sweep the whole domain");
  cmd->add_option("--workers", cfg.workers, "worker threads");
  cmd->add_option("--method", cfg.methods, "socp | qcqp | qp (comma separated)")->delimiter(',');
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Lipschitz-continuous reformulations of parametric QPs"};
  app.name("lipsol");
  app.require_subcommand(1);
  Config cfg;

  auto *list = app.add_subcommand("list", "list built-in problems");

  auto *solve_cmd = app.add_subcommand("solve", "solve one instance");
  add_problem_options(solve_cmd, cfg);
  solve_cmd->add_option("--x", cfg.x, "parameter value")->delimiter(',')->required();
  solve_cmd->add_option("--method", cfg.methods, "socp | qcqp | qp (comma separated)")->delimiter(',');

  auto *sweep_cmd = app.add_subcommand("sweep", "evaluate solution maps on a grid");
  add_problem_options(sweep_cmd, cfg);
  add_grid_options(sweep_cmd, cfg);
  sweep_cmd->add_option("--format", cfg.format, "csv | json");

  auto *lip_cmd = app.add_subcommand("lipschitz", "estimate Lipschitz constants and verdicts");
  add_problem_options(lip_cmd, cfg);
  add_grid_options(lip_cmd, cfg);

  auto *cmp_cmd = app.add_subcommand("compare", "compare methods against the exact QP");
  add_problem_options(cmp_cmd, cfg);
  add_grid_options(cmp_cmd, cfg);

  auto *sim_cmd = app.add_subcommand("simulate", "closed-loop RK4 simulation");
  add_problem_options(sim_cmd, cfg);
  sim_cmd->add_option("--dynamics", cfg.dynamics, "f_i(x, u), one per state (repeatable)")
      ->required();
  sim_cmd->add_option("--controller", cfg.controller, "socp | qcqp | qp");
  sim_cmd->add_option("--x0", cfg.x0, "initial state")->delimiter(',')->required();
  sim_cmd->add_option("--dt", cfg.dt, "RK4 step");
  sim_cmd->add_option("--T", cfg.horizon, "final time");
  sim_cmd->add_flag("--zoh", cfg.zoh, "hold the input over each step");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "lipsol: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      cmd_list(out);
    } else if (solve_cmd->parsed()) {
      cmd_solve(cfg, out);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(cfg, out);
    } else if (lip_cmd->parsed()) {
      cmd_lipschitz(cfg, out);
    } else if (cmp_cmd->parsed()) {
      cmd_compare(cfg, out);
    } else if (sim_cmd->parsed()) {
      cmd_simulate(cfg, out);
    }
  } catch (const UsageError &e) {
    err << "lipsol: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "lipsol: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

} // namespace lipsol::cli
