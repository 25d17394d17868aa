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

#include <fmt/format.h>

#include <cmath>

#include "lipsol/error.hpp"
#include "lipsol/geometry.hpp"

namespace lipsol {

namespace {

double barrier(const ProblemInstance &inst, const Eigen::VectorXd &u) {
  const Eigen::VectorXd s = inst.b - inst.A * u;
  if (s.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
  return -s.array().log().sum();
}

bool strictly_inside(const ProblemInstance &inst, const Eigen::VectorXd &u) {
  return (inst.b - inst.A * u).minCoeff() > 0.0;
}

} // namespace

void NewtonSettings::validate() const {
  if (!(tol > 0.0) || max_iter == 0 || !(backtrack_beta > 0.0 && backtrack_beta < 1.0) ||
      !(backtrack_alpha > 0.0 && backtrack_alpha < 0.5)) {
    throw Error("invalid Newton settings: need tol > 0, 0 < beta < 1, 0 < alpha < 0.5");
  }
}

Eigen::VectorXd barrier_gradient(const ProblemInstance &instance, const Eigen::VectorXd &u) {
  const Eigen::VectorXd s = instance.b - instance.A * u;
  return instance.A.transpose() * s.cwiseInverse();
}

AnalyticCenter analytic_center(const ProblemInstance &instance,
                               const std::optional<Eigen::VectorXd> &init,
                               const NewtonSettings &settings) {
  settings.validate();
  Eigen::VectorXd u;
  if (init && init->size() == instance.m() && strictly_inside(instance, *init)) {
    u = *init;
  } else {
    u = strictly_feasible_start(instance).point;
  }

  AnalyticCenter out;
  for (std::size_t iter = 0;; ++iter) {
    const Eigen::VectorXd s = instance.b - instance.A * u;
    const Eigen::VectorXd inv = s.cwiseInverse();
    const Eigen::VectorXd g = instance.A.transpose() * inv;
    out.gradient_norm = g.norm();
    if (out.gradient_norm <= settings.tol) {
      out.point = u;
      out.iterations = iter;
      return out;
    }
    if (iter == settings.max_iter) {
      throw SolverError(fmt::format("analytic center: iteration cap {} reached (||grad|| = {:.3e})",
                                    settings.max_iter, out.gradient_norm));
    }

    // Hessian sum_i a_i a_i^T / s_i^2.
    const Eigen::MatrixXd W = instance.A.array().colwise() * inv.array();
    const Eigen::MatrixXd H = W.transpose() * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    const Eigen::VectorXd ev = eig.eigenvalues();
    if (ev.minCoeff() <= 1e-12 * std::max(1.0, ev.maxCoeff())) {
      throw SolverError("analytic center: singular barrier Hessian with nonzero gradient "
                        "(K likely unbounded)");
    }
    const Eigen::VectorXd d =
        -(eig.eigenvectors() * (eig.eigenvectors().transpose() * g).cwiseQuotient(ev));
    const double slope = g.dot(d); // = -(Newton decrement)^2

    double t = 1.0;
    while (!strictly_inside(instance, u + t * d)) {
      t *= settings.backtrack_beta;
      if (t < 1e-30) throw SolverError("analytic center: line search lost feasibility");
    }
    // Inside the quadratic-convergence region the full step is accepted;
    // the Armijo test there is dominated by rounding in the barrier value.
    if (-slope > 1e-8) {
      const double f0 = barrier(instance, u);
      while (barrier(instance, u + t * d) > f0 + settings.backtrack_alpha * t * slope) {
        t *= settings.backtrack_beta;
        if (t < 1e-30) throw SolverError("analytic center: line search failed");
      }
    }
    u += t * d;
  }
}

Eigen::VectorXd AnalyticCenterProvider::point(const ProblemInstance &instance) const {
  return analytic_center(instance, std::nullopt, settings_).point;
}

} // namespace lipsol
