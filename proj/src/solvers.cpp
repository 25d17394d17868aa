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

#include "lipsol/solvers.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "lipsol/error.hpp"
#include "lipsol/qp.hpp"

namespace lipsol {

std::string to_string(Method method) {
  switch (method) {
  case Method::socp:
    return "socp";
  case Method::qcqp:
    return "qcqp";
  case Method::qp_oracle:
    return "qp_oracle";
  }
  return "socp";
}

std::string to_string(Status status) {
  switch (status) {
  case Status::ok:
    return "ok";
  case Status::infeasible:
    return "infeasible";
  case Status::iteration_cap:
    return "iteration_cap";
  case Status::degenerate:
    return "degenerate";
  }
  return "ok";
}

Method parse_method(const std::string &tag) {
  if (tag == "socp") return Method::socp;
  if (tag == "qcqp") return Method::qcqp;
  if (tag == "qp" || tag == "qp_oracle") return Method::qp_oracle;
  throw Error("unknown method '" + tag + "' (expected socp, qcqp or qp)");
}

double radius(const ProblemInstance &instance) {
  const Eigen::VectorXd slack = instance.b - instance.A * instance.pi_f;
  Eigen::Index worst = 0;
  const double r = slack.minCoeff(&worst);
  if (r < -kRadiusClamp) {
    throw AssumptionViolation(
        fmt::format("negative radius {:.3e}: feasible point violates constraint {}", r, worst + 1),
        static_cast<std::size_t>(worst));
  }
  return std::max(r, 0.0);
}

SolveResult solve_socp(const ProblemInstance &instance) {
  SolveResult res;
  res.method = Method::socp;
  const double r = radius(instance);
  res.radius = r;
  res.u = instance.pi_f + project_ball(instance.pi_des - instance.pi_f, r);
  res.feasibility_residual = feasibility_residual(instance, res.u);
  res.status = res.feasibility_residual <= kFeasibilityTol ? Status::ok : Status::infeasible;
  return res;
}

std::vector<Ball> qcqp_balls(const ProblemInstance &instance, double k) {
  if (!(k > 0.0)) throw Error(fmt::format("qcqp parameter k must be positive, got {}", k));
  const Eigen::VectorXd slack = (instance.b - instance.A * instance.pi_f).cwiseMax(0.0);
  std::vector<Ball> balls;
  balls.reserve(static_cast<std::size_t>(instance.p()));
  for (Eigen::Index i = 0; i < instance.p(); ++i) {
    const double d = k * k + 2.0 * k * slack[i];
    balls.push_back({instance.pi_f - k * instance.A.row(i).transpose(), std::sqrt(d)});
  }
  return balls;
}

namespace {

// Largest theta in [0, 1] keeping pi_f + theta (x - pi_f) inside every ball.
// pi_f itself is inside all of them because d_i >= k^2 = ||pi_f - c_i||^2.
Eigen::VectorXd pull_into_balls(const Eigen::VectorXd &x, const Eigen::VectorXd &pi_f,
                                const std::vector<Ball> &balls) {
  bool violated = false;
  for (const auto &ball : balls) {
    if ((x - ball.center).norm() > ball.radius) violated = true;
  }
  if (!violated) return x;
  const Eigen::VectorXd w = x - pi_f;
  const double ww = w.squaredNorm();
  if (ww == 0.0) return pi_f;
  double theta = 1.0;
  for (const auto &ball : balls) {
    const Eigen::VectorXd e = pi_f - ball.center;
    const double half_b = e.dot(w);
    const double c = e.squaredNorm() - ball.radius * ball.radius; // <= 0
    const double disc = std::max(half_b * half_b - ww * c, 0.0);
    theta = std::min(theta, (-half_b + std::sqrt(disc)) / ww);
  }
  return pi_f + std::max(theta, 0.0) * w;
}

// Exact projection of z onto the intersection of balls, by enumerating
// candidate active sets S with |S| <= m. The spheres of S meet in a sphere
// inside the affine set {u : 2 (c_j - c_s)^T u = d_s - d_j + |c_j|^2 - |c_s|^2};
// the candidate for S is the point of that sphere nearest to z. The feasible
// candidate closest to z is the projection. Empty when no candidate is found.
std::optional<Eigen::VectorXd> exact_ball_projection(const std::vector<Ball> &balls,
                                                     const Eigen::VectorXd &z) {
  const auto m = z.size();
  const auto p = static_cast<Eigen::Index>(balls.size());
  auto inside_all = [&](const Eigen::VectorXd &u) {
    for (const auto &ball : balls) {
      if ((u - ball.center).norm() > ball.radius + 1e-11 * std::max(1.0, ball.radius)) return false;
    }
    return true;
  };
  if (inside_all(z)) return z;
  if (active_set_candidates(p, m) > kMaxActiveSetCandidates) return std::nullopt;

  std::optional<Eigen::VectorXd> best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> subset;
  auto consider = [&]() {
    const Ball &first = balls[static_cast<std::size_t>(subset[0])];
    const auto rows = static_cast<Eigen::Index>(subset.size()) - 1;
    Eigen::VectorXd centre = first.center;
    Eigen::VectorXd proj_z = z;
    if (rows > 0) {
      Eigen::MatrixXd L(rows, m);
      Eigen::VectorXd h(rows);
      const double d0 = first.radius * first.radius;
      for (Eigen::Index j = 0; j < rows; ++j) {
        const Ball &bj = balls[static_cast<std::size_t>(subset[static_cast<std::size_t>(j) + 1])];
        L.row(j) = 2.0 * (bj.center - first.center).transpose();
        h[j] = d0 - bj.radius * bj.radius + bj.center.squaredNorm() - first.center.squaredNorm();
      }
      const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(L);
      centre = first.center + cod.solve(h - L * first.center);
      const double scale = std::max(1.0, h.lpNorm<Eigen::Infinity>());
      if ((L * centre - h).lpNorm<Eigen::Infinity>() > 1e-10 * scale) return; // spheres disjoint
      proj_z = z + cod.solve(h - L * z);
    }
    const double rho2 = first.radius * first.radius - (centre - first.center).squaredNorm();
    if (rho2 < -1e-12 * std::max(1.0, first.radius * first.radius)) return;
    const double rho = std::sqrt(std::max(rho2, 0.0));
    const Eigen::VectorXd w = proj_z - centre;
    const double wn = w.norm();
    Eigen::VectorXd u;
    if (wn > 1e-14 * std::max(1.0, z.norm())) {
      u = centre + (rho / wn) * w;
    } else if (rho <= 1e-14) {
      u = centre;
    } else {
      return; // every point of the sphere is equally close; leave to other sets
    }
    if (!inside_all(u)) return;
    const double dist = (u - z).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = u;
    }
  };
  // Subsets in lexicographic order, sizes 1..min(m, p).
  std::function<void(Eigen::Index, Eigen::Index)> rec = [&](Eigen::Index start, Eigen::Index left) {
    if (left == 0) {
      consider();
      return;
    }
    for (Eigen::Index i = start; i <= p - left; ++i) {
      subset.push_back(i);
      rec(i + 1, left - 1);
      subset.pop_back();
    }
  };
  for (Eigen::Index size = 1; size <= std::min(m, p); ++size) rec(0, size);
  return best;
}

} // namespace

SolveResult solve_qcqp(const ProblemInstance &instance, const QcqpSettings &settings) {
  const std::vector<Ball> balls = qcqp_balls(instance, settings.k);
  SolveResult res;
  res.method = Method::qcqp;

  if (auto exact = exact_ball_projection(balls, instance.pi_des)) {
    res.u = pull_into_balls(*exact, instance.pi_f, balls);
    res.iterations = 0;
  } else {
    // Dykstra: x <- P_i(x + q_i), q_i <- (x + q_i) - P_i(x + q_i), cyclically.
    const std::size_t p = balls.size();
    Eigen::VectorXd x = instance.pi_des;
    std::vector<Eigen::VectorXd> correction(p, Eigen::VectorXd::Zero(x.size()));
    res.status = Status::iteration_cap;
    std::size_t it = 0;
    while (it < settings.max_iter) {
      ++it;
      const Eigen::VectorXd before = x;
      for (std::size_t i = 0; i < p; ++i) {
        const Eigen::VectorXd y = x + correction[i];
        x = project_ball(y, balls[i]);
        correction[i] = y - x;
      }
      if ((x - before).norm() <= settings.tol) {
        res.status = Status::ok;
        break;
      }
    }
    res.iterations = it;
    res.u = pull_into_balls(x, instance.pi_f, balls);
  }
  res.feasibility_residual = feasibility_residual(instance, res.u);
  if (res.status == Status::ok && res.feasibility_residual > kFeasibilityTol) {
    res.status = Status::infeasible;
  }
  return res;
}

double qcqp_kkt_residual(const ProblemInstance &instance, const Eigen::VectorXd &u, double k,
                         double active_tol) {
  const std::vector<Ball> balls = qcqp_balls(instance, k);
  std::vector<Eigen::VectorXd> cols;
  for (const auto &ball : balls) {
    const double gap = ball.radius * ball.radius - (u - ball.center).squaredNorm();
    if (gap < -active_tol) return std::numeric_limits<double>::infinity();
    if (gap <= active_tol) cols.push_back(2.0 * (u - ball.center));
  }
  Eigen::MatrixXd C(u.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) C.col(static_cast<Eigen::Index>(j)) = cols[j];
  const Eigen::VectorXd d = -2.0 * (u - instance.pi_des);
  return nnls(C, d).residual;
}

bool socp_ball_inside_qcqp(const ProblemInstance &instance, double k) {
  const double r = radius(instance);
  for (const auto &ball : qcqp_balls(instance, k)) {
    if ((instance.pi_f - ball.center).norm() + r > ball.radius) return false;
  }
  return true;
}

SolveResult solve_qp_oracle(const ProblemInstance &instance) {
  const PolyhedralProjection proj = project_polyhedron(instance.A, instance.b, instance.pi_des);
  SolveResult res;
  res.method = Method::qp_oracle;
  res.u = proj.u;
  res.active_set = proj.active_set;
  res.feasibility_residual = feasibility_residual(instance, res.u);
  res.status = proj.feasible && res.feasibility_residual <= kFeasibilityTol ? Status::ok
                                                                           : Status::infeasible;
  return res;
}

bool verify_kkt(const ProblemInstance &instance, const Eigen::VectorXd &u, double tol) {
  if (u.size() != instance.m()) return false;
  const Eigen::VectorXd slack = instance.b - instance.A * u;
  if (slack.minCoeff() < -tol) return false;
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (slack[i] <= tol) active.push_back(i);
  }
  Eigen::MatrixXd C(u.size(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t j = 0; j < active.size(); ++j) {
    C.col(static_cast<Eigen::Index>(j)) = instance.A.row(active[j]).transpose();
  }
  const Eigen::VectorXd d = -2.0 * (u - instance.pi_des);
  return nnls(C, d).residual <= tol * std::max(1.0, d.norm());
}

SolveResult solve(Method method, const ProblemInstance &instance, const SolverSettings &settings) {
  switch (method) {
  case Method::socp:
    return solve_socp(instance);
  case Method::qcqp:
    return solve_qcqp(instance, settings.qcqp);
  case Method::qp_oracle:
    return solve_qp_oracle(instance);
  }
  throw Error("unknown method");
}

} // namespace lipsol
