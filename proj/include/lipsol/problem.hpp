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

#ifndef LIPSOL_PROBLEM_HPP
#define LIPSOL_PROBLEM_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lipsol/expr.hpp"

namespace lipsol {

// Rows with norm below this are rejected as degenerate.
inline constexpr double kZeroRowNorm = 1e-14;
// Slack allowed on A * pi_f <= b before the feasible point is rejected.
inline constexpr double kFeasibilityTol = 1e-9;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  bool contains(const Eigen::VectorXd &x, double slack = 1e-12) const;
};

/// Lipschitz constants of the (row-normalized) problem data over the domain,
/// plus a bound on the norm of the feasible selection.
struct LipschitzMetadata {
  std::vector<double> L_a;
  std::vector<double> L_b;
  double L_pi_des = 0.0;
  double L_pi_f = 0.0;
  double U_f_bar = 0.0;
};

/// Parametric QP  min ||u - pi_des(x)||^2  s.t.  A(x) u <= b(x),  x in domain.
struct ParametricProblem {
  std::string name;
  std::size_t n = 0; // parameter dimension
  std::size_t m = 0; // decision dimension
  std::size_t p = 0; // constraint count
  std::vector<std::vector<Expression>> A;
  std::vector<Expression> b;
  std::vector<Expression> pi_des;
  std::optional<std::vector<Expression>> pi_f;
  Box domain;
  std::optional<LipschitzMetadata> constants;

  /// Throws ProblemError on mismatched dimensions, out-of-range or input
  /// variables, inverted domain bounds or negative constants.
  void validate() const;
};

/// Numeric snapshot of a problem at a fixed parameter, rows unit-norm.
struct ProblemInstance {
  Eigen::VectorXd x;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd pi_des;
  Eigen::VectorXd pi_f;
  Eigen::VectorXd raw_row_norms;

  Eigen::Index m() const { return A.cols(); }
  Eigen::Index p() const { return A.rows(); }

  /// Builds an instance from raw data, scaling each (a_i, b_i) by 1/||a_i||.
  /// pi_f may be left empty and filled in later.
  static ProblemInstance from_raw(Eigen::MatrixXd A, Eigen::VectorXd b,
                                  Eigen::VectorXd pi_des,
                                  Eigen::VectorXd pi_f = {});
};

/// Source of a feasible point for instances whose problem has no pi_f
/// expressions (or when the expressions should be overridden).
class FeasiblePointProvider {
public:
  virtual ~FeasiblePointProvider() = default;
  /// `instance.pi_f` is empty on entry.
  virtual Eigen::VectorXd point(const ProblemInstance &instance) const = 0;
  virtual std::string name() const = 0;
};

/// Evaluates the problem at x and normalizes the constraint rows. pi_f comes
/// from `provider` when given, otherwise from the problem's expressions.
/// Throws ProblemError (x outside domain, no pi_f source), DegenerateRowError,
/// or AssumptionViolation naming the first constraint pi_f violates.
ProblemInstance instantiate(const ParametricProblem &problem,
                            const Eigen::VectorXd &x,
                            const FeasiblePointProvider *provider = nullptr);

/// max_i (a_i^T u - b_i); nonpositive iff u is in K(x).
double feasibility_residual(const ProblemInstance &instance, const Eigen::VectorXd &u);

// Problem files (JSON).
ParametricProblem parse_problem(std::string_view json_text);
ParametricProblem load_problem_file(const std::string &path);
std::string problem_to_json(const ParametricProblem &problem);

// Built-in case studies: example1, example2, robinson.
std::vector<std::string> registry_names();
std::string_view registry_source(std::string_view name);
ParametricProblem registry_get(std::string_view name);

/// Registry name if it matches one, file path otherwise.
ParametricProblem load_problem(const std::string &name_or_path);

} // namespace lipsol

#endif // LIPSOL_PROBLEM_HPP
