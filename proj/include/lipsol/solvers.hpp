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

#ifndef LIPSOL_SOLVERS_HPP
#define LIPSOL_SOLVERS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lipsol/geometry.hpp"
#include "lipsol/problem.hpp"

namespace lipsol {

enum class Method { socp, qcqp, qp_oracle };
enum class Status { ok, infeasible, iteration_cap, degenerate };

std::string to_string(Method method);
std::string to_string(Status status);
/// Accepts socp, qcqp, qp_oracle and the short form qp.
Method parse_method(const std::string &tag);

struct SolveResult {
  Eigen::VectorXd u;
  Method method = Method::socp;
  std::optional<double> radius;                        // socp
  std::optional<std::vector<std::size_t>> active_set;  // qp_oracle, 0-based
  double feasibility_residual = 0.0;
  std::optional<std::size_t> iterations;               // qcqp
  Status status = Status::ok;
};

/// Values of r in [-kRadiusClamp, 0) are rounded up to 0.
inline constexpr double kRadiusClamp = 1e-9;

/// r(x) = min_i (b_i - a_i^T pi_f). Throws AssumptionViolation naming the
/// offending constraint when r < -kRadiusClamp.
double radius(const ProblemInstance &instance);

/// Closed form of  min ||u - pi_des||^2  s.t. ||u - pi_f|| <= r(x):
/// u = pi_f + project_ball(pi_des - pi_f, r).
SolveResult solve_socp(const ProblemInstance &instance);

struct QcqpSettings {
  double k = 1.0;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

/// Balls (c_i, sqrt(d_i)) with c_i = pi_f - k a_i, d_i = k^2 + 2k (b_i - a_i^T pi_f).
std::vector<Ball> qcqp_balls(const ProblemInstance &instance, double k);

/// Projection of pi_des onto the intersection of qcqp_balls. Computed
/// exactly by enumerating active sets of balls (iterations = 0); Dykstra's
/// algorithm started at pi_des is the fallback when the enumeration guard is
/// exceeded or no candidate qualifies. Throws on k <= 0.
SolveResult solve_qcqp(const ProblemInstance &instance, const QcqpSettings &settings = {});

/// Stationarity residual of  min ||u - pi_des||^2  s.t. ||u - c_i||^2 <= d_i
/// with nonnegative multipliers on balls active within `active_tol`;
/// +infinity if u is outside some ball by more than active_tol.
double qcqp_kkt_residual(const ProblemInstance &instance, const Eigen::VectorXd &u, double k,
                         double active_tol = 1e-7);

/// Exact test of Ball(pi_f, r) being inside every QCQP ball.
bool socp_ball_inside_qcqp(const ProblemInstance &instance, double k);

/// Exact projection of pi_des onto K(x) by active-set enumeration.
SolveResult solve_qp_oracle(const ProblemInstance &instance);

/// True iff u is feasible within tol and 2(u - pi_des) + sum lambda_i a_i = 0
/// has a solution lambda >= 0 supported on constraints active within tol.
bool verify_kkt(const ProblemInstance &instance, const Eigen::VectorXd &u, double tol);

struct SolverSettings {
  QcqpSettings qcqp;
};

SolveResult solve(Method method, const ProblemInstance &instance,
                  const SolverSettings &settings = {});

} // namespace lipsol

#endif // LIPSOL_SOLVERS_HPP
