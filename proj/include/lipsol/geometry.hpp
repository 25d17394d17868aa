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

#ifndef LIPSOL_GEOMETRY_HPP
#define LIPSOL_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "lipsol/problem.hpp"

namespace lipsol {

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};

/// Projection of v onto the origin-centered ball of the given radius:
/// min(radius, ||v||) v / ||v||, and 0 when v = 0. Throws on radius < 0.
Eigen::VectorXd project_ball(const Eigen::VectorXd &v, double radius);

/// Projection onto an arbitrary ball.
Eigen::VectorXd project_ball(const Eigen::VectorXd &point, const Ball &ball);

struct NewtonSettings {
  double tol = 1e-10;          // stop when ||grad|| <= tol
  std::size_t max_iter = 100;
  double backtrack_beta = 0.5; // step shrink factor
  double backtrack_alpha = 0.1; // Armijo fraction

  void validate() const;
};

struct AnalyticCenter {
  Eigen::VectorXd point;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

/// Minimizer of the log barrier -sum log(b_i - a_i^T u) by damped Newton.
/// Starts from `init` when strictly feasible, otherwise from
/// strictly_feasible_start. Throws SolverError when no interior start exists,
/// when the Hessian is singular with a nonzero gradient (K likely unbounded),
/// or on the iteration cap.
AnalyticCenter analytic_center(const ProblemInstance &instance,
                               const std::optional<Eigen::VectorXd> &init = std::nullopt,
                               const NewtonSettings &settings = {});

/// Gradient of the log barrier at a strictly feasible u.
Eigen::VectorXd barrier_gradient(const ProblemInstance &instance, const Eigen::VectorXd &u);

struct InteriorPoint {
  Eigen::VectorXd point;
  double slack = 0.0; // min_i (b_i - a_i^T point); Euclidean margin for unit rows
};

/// Deepest point of K(x): max s subject to a_i^T u + s <= b_i, solved as a
/// support-point problem on the lifted polyhedron in (u, s). Throws
/// SolverError if K is empty, has empty interior (the message carries the
/// maximal slack), or the slack is unbounded.
InteriorPoint strictly_feasible_start(const ProblemInstance &instance);

/// argmax_{u in K} direction^T u, least-norm among ties.
/// Throws SolverError if K is unbounded in that direction or empty.
Eigen::VectorXd support_point(const ProblemInstance &instance, const Eigen::VectorXd &direction);

/// Same, on raw polyhedron data (rows need not be unit-norm).
Eigen::VectorXd support_point(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                              const Eigen::VectorXd &direction);

struct SteinerEstimate {
  Eigen::VectorXd point;
  Eigen::VectorXd standard_error; // per coordinate
  std::size_t samples = 0;
};

inline constexpr std::size_t kDefaultSteinerSamples = 4096;

/// Monte Carlo Steiner point: mean support point over directions drawn
/// uniformly from the unit ball. Deterministic for a given seed.
SteinerEstimate steiner_point(const ProblemInstance &instance, std::size_t samples,
                              std::uint64_t seed);

enum class ProviderKind { expr, analytic_center, steiner };

ProviderKind parse_provider(const std::string &tag);
std::string to_string(ProviderKind kind);

class AnalyticCenterProvider final : public FeasiblePointProvider {
public:
  explicit AnalyticCenterProvider(NewtonSettings settings = {}) : settings_(settings) {}
  Eigen::VectorXd point(const ProblemInstance &instance) const override;
  std::string name() const override { return "analytic_center"; }

private:
  NewtonSettings settings_;
};

class SteinerProvider final : public FeasiblePointProvider {
public:
  SteinerProvider(std::size_t samples, std::uint64_t seed) : samples_(samples), seed_(seed) {}
  Eigen::VectorXd point(const ProblemInstance &instance) const override;
  std::string name() const override { return "steiner"; }

private:
  std::size_t samples_;
  std::uint64_t seed_;
};

struct ProviderSettings {
  NewtonSettings newton;
  std::size_t steiner_samples = kDefaultSteinerSamples;
  std::uint64_t seed = 0;
};

/// nullptr for ProviderKind::expr (pi_f comes from the problem's expressions).
std::unique_ptr<FeasiblePointProvider> make_provider(ProviderKind kind,
                                                     const ProviderSettings &settings = {});

} // namespace lipsol

#endif // LIPSOL_GEOMETRY_HPP
