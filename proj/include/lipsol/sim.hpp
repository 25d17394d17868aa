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

#ifndef LIPSOL_SIM_HPP
#define LIPSOL_SIM_HPP

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "lipsol/expr.hpp"
#include "lipsol/geometry.hpp"
#include "lipsol/problem.hpp"
#include "lipsol/solvers.hpp"

namespace lipsol {

/// x' = f(x, u); one expression per state over x1..xn and u1..um.
struct Dynamics {
  std::vector<Expression> f;

  static Dynamics parse(const std::vector<std::string> &sources);
  void validate(std::size_t n, std::size_t m) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd &x, const Eigen::VectorXd &u) const;
};

struct SimSettings {
  ProviderKind provider = ProviderKind::expr;
  ProviderSettings provider_settings;
  SolverSettings solver;
  // Hold the input computed at the start of each step for all RK4 stages.
  bool zero_order_hold = false;
};

inline constexpr double kDefaultTimeStep = 1e-3;

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> inputs; // controller output at each state
  std::vector<std::string> events;     // solver status per step, or the halt reason
  bool halted = false;
};

/// Fixed-step RK4 on x' = f(x, pi(x)) with pi the chosen solution map,
/// evaluated at every stage. Integration stops early, keeping the partial
/// trajectory, if a stage leaves the problem domain or the controller throws.
Trajectory simulate(const ParametricProblem &problem, const Dynamics &dynamics, Method controller,
                    const Eigen::VectorXd &x0, double dt, double T,
                    const SimSettings &settings = {});

/// Columns t, x_1..x_n, u_1..u_m, status.
void write_trajectory_csv(std::ostream &out, const Trajectory &traj);

} // namespace lipsol

#endif // LIPSOL_SIM_HPP
