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

#ifndef LIPSOL_ANALYSIS_HPP
#define LIPSOL_ANALYSIS_HPP

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lipsol/geometry.hpp"
#include "lipsol/problem.hpp"
#include "lipsol/solvers.hpp"

namespace lipsol {

inline constexpr double kMaxGridPoints = 1e7;

struct GridAxis {
  double lower = 0.0;
  double upper = 0.0;
  double step = 0.0;
};

/// Rectangular grid over a sub-box of the domain, swept once per refinement
/// level; level l uses step * refinement_levels[l] on every axis.
struct GridSpec {
  std::vector<GridAxis> axes;
  std::vector<double> refinement_levels{1.0};

  /// Whole-domain grid with a common step.
  static GridSpec over(const Box &box, double step, std::vector<double> levels = {1.0});

  void validate() const;
  std::vector<std::size_t> counts(std::size_t level) const;
  double coordinate(std::size_t axis, std::size_t level, std::size_t i) const;
};

struct MethodOutcome {
  Eigen::VectorXd u;
  double feasibility_residual = 0.0;
  Status status = Status::ok;
  std::string message; // set when the solver threw
};

struct SweepRecord {
  std::size_t level = 0;
  double step = 0.0;
  std::vector<std::size_t> index; // grid index per axis
  Eigen::VectorXd x;
  Eigen::VectorXd pi_des;
  std::optional<double> radius;
  std::optional<bool> socp_ball_inside_qcqp;
  std::map<Method, MethodOutcome> results;
};

struct SweepSettings {
  ProviderKind provider = ProviderKind::expr;
  ProviderSettings provider_settings;
  SolverSettings solver;
  std::size_t workers = 1;
};

/// One record per grid point per level, ordered by level then
/// lexicographically by grid index (first axis slowest). Per-point failures
/// are captured in the record statuses. Output does not depend on `workers`.
std::vector<SweepRecord> sweep(const ParametricProblem &problem, const std::vector<Method> &methods,
                               const GridSpec &grid, const SweepSettings &settings = {});

enum class Verdict { lipschitz_stable, diverging, discontinuous };
std::string to_string(Verdict verdict);

/// Pairs whose solutions differ by more than this in one cell count as jumps.
inline constexpr double kJumpThreshold = 0.1;
/// Growth of L_est per decade of refinement at or above which a map diverges.
inline constexpr double kDivergenceFactor = 2.0;

struct LevelEstimate {
  double step = 0.0;
  double L_est = 0.0;
  std::size_t pairs = 0;
  std::size_t jumps = 0;
};

struct Jump {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  double quotient = 0.0;
};

struct LipschitzReport {
  Method method = Method::socp;
  std::vector<LevelEstimate> levels;
  std::vector<Jump> jump_locations; // finest level
  Verdict verdict = Verdict::lipschitz_stable;
};

/// Max difference quotient over axis-adjacent grid pairs, per level.
/// Verdict: discontinuous if every level has a jump > kJumpThreshold across a
/// single cell; otherwise diverging if L_est grows by >= kDivergenceFactor
/// per 10x refinement between some consecutive levels; otherwise
/// lipschitz_stable. Points whose status is not ok are skipped.
LipschitzReport estimate_lipschitz(const std::vector<SweepRecord> &records, Method method);

/// L = L_pi_des + 2 L_pi_f + max_i (L_b[i] + L_pi_f + L_a[i] U_f_bar).
double lipschitz_bound(const LipschitzMetadata &meta, std::size_t p);

struct MethodComparison {
  Method method = Method::socp;
  std::size_t points = 0;
  double mean_distance_to_qp = 0.0;
  double max_distance_to_qp = 0.0;
  double mean_gap = 0.0; // ||u - pi_des|| - ||u_qp - pi_des||
  double max_gap = 0.0;
  double min_gap = 0.0;
};

struct ComparisonSummary {
  std::vector<MethodComparison> methods;
  // Points where Ball(pi_f, r) sits inside the QCQP intersection, and how
  // many of them have a larger qcqp gap than socp gap (beyond 1e-7).
  std::size_t certified_points = 0;
  std::size_t dominance_violations = 0;
};

/// Needs qp_oracle results in the records; throws Error otherwise.
ComparisonSummary compare_methods(const std::vector<SweepRecord> &records);

/// Columns x_1..x_n, then per method <m>_u_1..<m>_u_m, <m>_residual,
/// <m>_status. Floats use 17 significant digits.
void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records,
                     const std::vector<Method> &methods);

std::string report_to_json(const LipschitzReport &report, int indent = 2);
std::string comparison_to_json(const ComparisonSummary &summary, int indent = 2);

/// 17-significant-digit float text shared by the CSV writers.
std::string format_float(double v);

} // namespace lipsol

#endif // LIPSOL_ANALYSIS_HPP
