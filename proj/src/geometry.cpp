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

#include "lipsol/geometry.hpp"

#include <fmt/format.h>

#include <cmath>

#include "lipsol/error.hpp"
#include "lipsol/qp.hpp"

namespace lipsol {

Eigen::VectorXd project_ball(const Eigen::VectorXd &v, double radius) {
  if (!(radius >= 0.0)) {
    throw Error(fmt::format("ball radius must be nonnegative, got {}", radius));
  }
  const double nrm = v.norm();
  if (nrm == 0.0) return Eigen::VectorXd::Zero(v.size());
  if (nrm <= radius) return v;
  return (radius / nrm) * v;
}

Eigen::VectorXd project_ball(const Eigen::VectorXd &point, const Ball &ball) {
  return ball.center + project_ball(point - ball.center, ball.radius);
}

Eigen::VectorXd support_point(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                              const Eigen::VectorXd &direction) {
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw Error("support direction must be nonzero");
  const Eigen::VectorXd d = direction / dn;

  // Projecting a far point M d onto K lands, for M past a finite threshold,
  // on the least-norm point of the maximizing face. That point is the
  // projection of the origin onto the affine hull of its active constraints,
  // which is recomputed from the active set to avoid cancellation in M.
  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  std::optional<Eigen::VectorXd> previous;
  for (double M = 1e2 * scale; M <= 1e12 * scale; M *= 4.0) {
    const PolyhedralProjection proj = project_polyhedron(A, b, M * d);
    if (!proj.feasible) throw SolverError("polyhedron is empty");
    Eigen::VectorXd u = proj.u;
    if (!proj.active_set.empty()) {
      Eigen::MatrixXd AS(static_cast<Eigen::Index>(proj.active_set.size()), A.cols());
      Eigen::VectorXd bS(AS.rows());
      for (Eigen::Index r = 0; r < AS.rows(); ++r) {
        AS.row(r) = A.row(static_cast<Eigen::Index>(proj.active_set[static_cast<std::size_t>(r)]));
        bS[r] = b[static_cast<Eigen::Index>(proj.active_set[static_cast<std::size_t>(r)])];
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AS);
      cod.setThreshold(1e-10);
      const Eigen::VectorXd clean = cod.solve(bS);
      if ((A * clean - b).maxCoeff() <= 1e-9 && (clean - u).norm() <= 1e-6 * (1.0 + u.norm())) {
        u = clean;
      }
    }
    if (previous && (u - *previous).norm() <= 1e-9 * (1.0 + u.norm())) return u;
    previous = std::move(u);
  }
  throw SolverError("polyhedron is unbounded in the requested direction");
}

Eigen::VectorXd support_point(const ProblemInstance &instance, const Eigen::VectorXd &direction) {
  if (direction.size() != instance.m()) throw Error("direction has the wrong dimension");
  return support_point(instance.A, instance.b, direction);
}

InteriorPoint strictly_feasible_start(const ProblemInstance &instance) {
  const Eigen::Index m = instance.m();
  Eigen::MatrixXd lifted(instance.p(), m + 1);
  lifted.leftCols(m) = instance.A;
  lifted.col(m).setOnes();
  Eigen::VectorXd up = Eigen::VectorXd::Zero(m + 1);
  up[m] = 1.0;

  Eigen::VectorXd z;
  try {
    z = support_point(lifted, instance.b, up);
  } catch (const SolverError &) {
    throw SolverError("maximal constraint slack is unbounded: K likely unbounded");
  }
  InteriorPoint out;
  out.point = z.head(m);
  out.slack = (instance.b - instance.A * out.point).minCoeff();
  if (out.slack < -1e-12) {
    throw SolverError(fmt::format("K(x) is empty (maximal slack {:.3e})", out.slack));
  }
  if (out.slack <= 1e-12) {
    throw SolverError(fmt::format("K(x) has empty interior (maximal slack {:.3e})", out.slack));
  }
  return out;
}

ProviderKind parse_provider(const std::string &tag) {
  if (tag == "expr") return ProviderKind::expr;
  if (tag == "analytic_center") return ProviderKind::analytic_center;
  if (tag == "steiner") return ProviderKind::steiner;
  throw Error("unknown feasible-point provider '" + tag + "'");
}

std::string to_string(ProviderKind kind) {
  switch (kind) {
  case ProviderKind::expr:
    return "expr";
  case ProviderKind::analytic_center:
    return "analytic_center";
  case ProviderKind::steiner:
    return "steiner";
  }
  return "expr";
}

std::unique_ptr<FeasiblePointProvider> make_provider(ProviderKind kind,
                                                     const ProviderSettings &settings) {
  switch (kind) {
  case ProviderKind::expr:
    return nullptr;
  case ProviderKind::analytic_center:
    return std::make_unique<AnalyticCenterProvider>(settings.newton);
  case ProviderKind::steiner:
    return std::make_unique<SteinerProvider>(settings.steiner_samples, settings.seed);
  }
  return nullptr;
}

} // namespace lipsol
