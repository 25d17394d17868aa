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

#include "lipsol/sim.hpp"

#include <fmt/format.h>

#include <cmath>

#include "lipsol/analysis.hpp"
#include "lipsol/error.hpp"

namespace lipsol {

namespace {

struct Controller {
  const ParametricProblem &problem;
  Method method;
  const FeasiblePointProvider *provider;
  const SolverSettings &solver;

  SolveResult operator()(const Eigen::VectorXd &x) const {
    return solve(method, instantiate(problem, x, provider), solver);
  }
};

} // namespace

Dynamics Dynamics::parse(const std::vector<std::string> &sources) {
  Dynamics d;
  for (const auto &s : sources) d.f.push_back(Expression::parse(s));
  return d;
}

void Dynamics::validate(std::size_t n, std::size_t m) const {
  if (f.size() != n) {
    throw ProblemError(fmt::format("dynamics need {} expressions, got {}", n, f.size()));
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const FreeVars fv = f[i].free_vars();
    if ((!fv.x.empty() && *fv.x.rbegin() > n) || (!fv.u.empty() && *fv.u.rbegin() > m)) {
      throw ProblemError(fmt::format("dynamics f_{} references an undeclared variable", i + 1));
    }
  }
}

Eigen::VectorXd Dynamics::operator()(const Eigen::VectorXd &x, const Eigen::VectorXd &u) const {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const std::span<const double> us(u.data(), static_cast<std::size_t>(u.size()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) out[static_cast<Eigen::Index>(i)] = f[i].evaluate(xs, us);
  return out;
}

Trajectory simulate(const ParametricProblem &problem, const Dynamics &dynamics, Method controller,
                    const Eigen::VectorXd &x0, double dt, double T, const SimSettings &settings) {
  dynamics.validate(problem.n, problem.m);
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error("simulation needs dt > 0 and T >= 0");
  if (!problem.domain.contains(x0)) throw Error("initial state lies outside the problem domain");

  const auto provider = make_provider(settings.provider, settings.provider_settings);
  const Controller pi{problem, controller, provider.get(), settings.solver};
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));

  Trajectory traj;
  Eigen::VectorXd x = x0;
  SolveResult at_x;
  try {
    at_x = pi(x);
  } catch (const Error &e) {
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    traj.inputs.push_back(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(problem.m),
                                                    std::numeric_limits<double>::quiet_NaN()));
    traj.events.push_back(std::string("controller_error: ") + e.what());
    traj.halted = true;
    return traj;
  }
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.inputs.push_back(at_x.u);
  traj.events.push_back(to_string(at_x.status));

  auto halt = [&traj](const std::string &why) {
    traj.events.back() = why;
    traj.halted = true;
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const Eigen::VectorXd &u0 = at_x.u;
    // Stage input: held or re-solved at the stage state.
    auto input = [&](const Eigen::VectorXd &xs) -> Eigen::VectorXd {
      if (settings.zero_order_hold) return u0;
      if (!problem.domain.contains(xs)) throw ProblemError("domain_exit");
      return pi(xs).u;
    };
    try {
      const Eigen::VectorXd k1 = dynamics(x, u0);
      const Eigen::VectorXd x2 = x + 0.5 * dt * k1;
      const Eigen::VectorXd k2 = dynamics(x2, input(x2));
      const Eigen::VectorXd x3 = x + 0.5 * dt * k2;
      const Eigen::VectorXd k3 = dynamics(x3, input(x3));
      const Eigen::VectorXd x4 = x + dt * k3;
      const Eigen::VectorXd k4 = dynamics(x4, input(x4));
      x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const ProblemError &e) {
      halt(std::string(e.what()) == "domain_exit" ? "domain_exit"
                                                  : std::string("controller_error: ") + e.what());
      return traj;
    } catch (const Error &e) {
      halt(std::string("controller_error: ") + e.what());
      return traj;
    }
    if (!problem.domain.contains(x)) {
      halt("domain_exit");
      return traj;
    }
    try {
      at_x = pi(x);
    } catch (const Error &e) {
      halt(std::string("controller_error: ") + e.what());
      return traj;
    }
    traj.times.push_back(static_cast<double>(k + 1) * dt);
    traj.states.push_back(x);
    traj.inputs.push_back(at_x.u);
    traj.events.push_back(to_string(at_x.status));
  }
  return traj;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj) {
  if (traj.states.empty()) return;
  const Eigen::Index n = traj.states.front().size();
  const Eigen::Index m = traj.inputs.front().size();
  std::string line = "t";
  for (Eigen::Index k = 0; k < n; ++k) line += fmt::format(",x_{}", k + 1);
  for (Eigen::Index j = 0; j < m; ++j) line += fmt::format(",u_{}", j + 1);
  out << line << ",status\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    line = format_float(traj.times[i]);
    for (Eigen::Index k = 0; k < n; ++k) line += ',' + format_float(traj.states[i][k]);
    for (Eigen::Index j = 0; j < m; ++j) line += ',' + format_float(traj.inputs[i][j]);
    out << line << ',' << traj.events[i] << '\n';
  }
}

} // namespace lipsol
