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

// Acceptance suite: one line per criterion, PASS or FAIL, with the measured
// quantities and wall time. Exit status is nonzero when the set of failing
// criteria differs from the --expect-fail list.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lipsol/analysis.hpp"
#include "lipsol/error.hpp"
#include "lipsol/geometry.hpp"
#include "lipsol/problem.hpp"
#include "lipsol/sim.hpp"
#include "lipsol/solvers.hpp"

using namespace lipsol;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

GridSpec window(std::size_t n, double half, double step, std::vector<double> levels) {
  GridSpec g;
  for (std::size_t k = 0; k < n; ++k) g.axes.push_back({-half, half, step});
  g.refinement_levels = std::move(levels);
  return g;
}

std::string levels_text(const LipschitzReport &rep) {
  std::string out;
  for (const auto &l : rep.levels) out += fmt::format("{}L({:g})={:.4g}", out.empty() ? "" : " ", l.step, l.L_est);
  return out;
}

double spread(const LipschitzReport &rep) {
  double lo = INFINITY, hi = 0.0;
  for (const auto &l : rep.levels) {
    lo = std::min(lo, l.L_est);
    hi = std::max(hi, l.L_est);
  }
  return lo > 0.0 ? hi / lo : INFINITY;
}

// Example 1 exact QP, valid away from x = 0.
VectorXd example1_qp(double x) {
  if (x > 0 && x <= 1.0 / 3.0) return vec({1, 1});
  const double d = 1 + x * x;
  return vec({(1 + x - 2 * x * x) / d, (3 * x + x * x) / d});
}

double example2_socp(double x1, double x2) {
  const double a = std::abs(x2);
  return 2 + a - std::min(1 + a, (1 - x2 + a) / std::sqrt(1 + x1 * x1));
}

template <class F> void grid_points(const ParametricProblem &prob, double step, F &&f) {
  const auto g = GridSpec::over(prob.domain, step);
  const auto counts = g.counts(0);
  std::vector<std::size_t> idx(counts.size(), 0);
  while (true) {
    VectorXd x(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t k = 0; k < counts.size(); ++k) {
      x[static_cast<Eigen::Index>(k)] = g.coordinate(k, 0, idx[k]);
    }
    f(x);
    std::size_t k = counts.size();
    while (k > 0 && ++idx[k - 1] == counts[k - 1]) idx[--k] = 0;
    if (k == 0) break;
  }
}

Outcome c1() {
  const auto prob = registry_get("example1");
  double worst = 0.0;
  std::size_t compared = 0;
  for (int i = 0; i <= 400; ++i) {
    if (i == 200) continue; // x = 0
    const double x = -2.0 + 0.01 * i;
    const auto u = solve_qp_oracle(instantiate(prob, vec({x}))).u;
    worst = std::max(worst, (u - example1_qp(x)).norm());
    ++compared;
  }
  const auto lo = solve_qp_oracle(instantiate(prob, vec({-1e-3}))).u;
  const auto hi = solve_qp_oracle(instantiate(prob, vec({1e-3}))).u;
  const double jump = (hi - lo).norm();
  return {worst <= 1e-8 && jump >= 0.9,
          fmt::format("max |qp - closed form| = {:.2e} over {} points; jump at +-1e-3 = {:.4f}",
                      worst, compared, jump)};
}

Outcome c2() {
  const auto prob = registry_get("example1");
  const auto recs = sweep(prob, {Method::socp}, GridSpec::over(prob.domain, 1e-2, {1.0, 0.1, 0.01}));
  const auto rep = estimate_lipschitz(recs, Method::socp);
  const double s = spread(rep);
  return {rep.verdict == lipsol::Verdict::lipschitz_stable && s < 2.0,
          fmt::format("socp {} ({}), max/min = {:.3f}", to_string(rep.verdict), levels_text(rep), s)};
}

Outcome c3() {
  const auto prob = registry_get("example2");
  double worst = 0.0;
  std::size_t points = 0;
  grid_points(prob, 0.05, [&](const VectorXd &x) {
    const auto u = solve_socp(instantiate(prob, x)).u;
    worst = std::max(worst, std::abs(u[0] - example2_socp(x[0], x[1])) + std::abs(u[1]));
    ++points;
  });
  return {points == 81 * 81 && worst <= 1e-8,
          fmt::format("max |socp - closed form| = {:.2e} over {} points", worst, points)};
}

Outcome c4() {
  double worst = -INFINITY;
  std::size_t solves = 0, failures = 0;
  for (const auto &name : registry_names()) {
    const auto prob = registry_get(name);
    grid_points(prob, 0.05, [&](const VectorXd &x) {
      const auto inst = instantiate(prob, x);
      std::vector<SolveResult> res{solve_socp(inst)};
      for (double k : {0.1, 1.0, 10.0}) {
        QcqpSettings s;
        s.k = k;
        res.push_back(solve_qcqp(inst, s));
      }
      for (const auto &r : res) {
        worst = std::max(worst, r.feasibility_residual);
        if (r.status != Status::ok || r.feasibility_residual > 1e-9) ++failures;
        ++solves;
      }
    });
  }
  return {failures == 0, fmt::format("max residual = {:.2e} over {} solves, {} failures", worst,
                                     solves, failures)};
}

Outcome c5() {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> rad(0.0, 3.0);
  std::uniform_int_distribution<int> dim(1, 6);
  std::size_t violations = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 100000; ++t) {
    const int m = dim(rng);
    VectorXd u1(m), u2(m);
    const double scale = t % 4 == 0 ? 0.05 : 2.0;
    for (int j = 0; j < m; ++j) {
      u1[j] = scale * gauss(rng);
      u2[j] = scale * gauss(rng);
    }
    const double r1 = rad(rng);
    const double r2 = t % 7 == 0 ? r1 : rad(rng);
    const double lhs = (project_ball(u1, r1) - project_ball(u2, r2)).norm();
    const double rhs = (u1 - u2).norm() + std::abs(r1 - r2);
    worst = std::max(worst, lhs - rhs);
    if (lhs > rhs + 1e-12) ++violations;
  }
  return {violations == 0,
          fmt::format("{} violations in 1e5 tuples; max excess = {:.2e}", violations, worst)};
}

// 64 tangent half-spaces around Ball(pi_f, r), one normal along pi_des - pi_f.
ProblemInstance polygon_around(const ProblemInstance &inst, double r, double phi) {
  MatrixXd A(64, 2);
  VectorXd b(64);
  for (int k = 0; k < 64; ++k) {
    const double t = phi + 2.0 * std::numbers::pi * k / 64;
    A(k, 0) = std::cos(t);
    A(k, 1) = std::sin(t);
    b[k] = A.row(k).dot(inst.pi_f) + r;
  }
  return ProblemInstance::from_raw(A, b, inst.pi_des, inst.pi_f);
}

Outcome c6() {
  std::mt19937_64 rng(0);
  double worst = 0.0;
  std::size_t points = 0;
  for (const char *name : {"example1", "example2"}) {
    const auto prob = registry_get(name);
    for (int t = 0; t < 200; ++t) {
      VectorXd x(static_cast<Eigen::Index>(prob.n));
      for (std::size_t k = 0; k < prob.n; ++k) {
        std::uniform_real_distribution<double> ux(prob.domain.lower[k], prob.domain.upper[k]);
        x[static_cast<Eigen::Index>(k)] = ux(rng);
      }
      const auto inst = instantiate(prob, x);
      const auto socp = solve_socp(inst);
      const VectorXd v = inst.pi_des - inst.pi_f;
      const double phi = v.norm() > 0 ? std::atan2(v[1], v[0]) : 0.0;
      const auto qp = solve_qp_oracle(polygon_around(inst, *socp.radius, phi));
      worst = std::max(worst, (qp.u - socp.u).norm());
      ++points;
    }
  }
  return {worst <= 1e-6,
          fmt::format("max |socp - polygon oracle| = {:.2e} over {} points", worst, points)};
}

Outcome c7() {
  // Symmetric box [-1, 1]^3.
  MatrixXd A(6, 3);
  A << MatrixXd::Identity(3, 3), -MatrixXd::Identity(3, 3);
  const auto box = ProblemInstance::from_raw(A, VectorXd::Ones(6), VectorXd::Zero(3));
  const double centre_err = analytic_center(box).point.norm();

  const auto prob = registry_get("robinson");
  std::size_t max_iter = 0, points = 0, failures = 0;
  grid_points(prob, 0.05, [&](const VectorXd &x) {
    ProblemInstance inst = instantiate(prob, x);
    try {
      const auto ac = analytic_center(inst);
      max_iter = std::max(max_iter, ac.iterations);
      if (ac.iterations > 50 || (inst.b - inst.A * ac.point).minCoeff() <= 0.0) ++failures;
    } catch (const Error &) {
      ++failures;
    }
    ++points;
  });

  SweepSettings s;
  s.provider = ProviderKind::analytic_center;
  const auto recs = sweep(prob, {Method::socp}, window(2, 0.05, 1e-2, {1.0, 0.1}), s);
  const auto rep = estimate_lipschitz(recs, Method::socp);
  return {centre_err <= 1e-8 && failures == 0 && rep.verdict == lipsol::Verdict::lipschitz_stable,
          fmt::format("box centre error {:.1e}; robinson Newton max {} iterations over {} points, "
                      "{} failures; socp {} ({})",
                      centre_err, max_iter, points, failures, to_string(rep.verdict),
                      levels_text(rep))};
}

Outcome c8() {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> centre(-3.0, 3.0);
  std::uniform_real_distribution<double> half(0.2, 2.5);
  std::uniform_int_distribution<int> dim(2, 4);
  std::size_t outside = 0, coords = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int m = dim(rng);
    VectorXd c(m), h(m);
    for (int j = 0; j < m; ++j) {
      c[j] = centre(rng);
      h[j] = half(rng);
    }
    MatrixXd A(2 * m, m);
    A << MatrixXd::Identity(m, m), -MatrixXd::Identity(m, m);
    VectorXd b(2 * m);
    b << c + h, h - c;
    const auto inst = ProblemInstance::from_raw(A, b, VectorXd::Zero(m));
    const auto est = steiner_point(inst, 4096, 0);
    for (int j = 0; j < m; ++j) {
      const double z = std::abs(est.point[j] - c[j]) / est.standard_error[j];
      worst = std::max(worst, z);
      if (z > 3.0) ++outside;
      ++coords;
    }
  }
  return {outside == 0, fmt::format("{} of {} coordinates beyond 3 SE; max deviation {:.2f} SE",
                                    outside, coords, worst)};
}

// Largest axis-adjacent quotient inside the cells that have the origin as a
// corner, i.e. the square [-h, h]^n at that level.
double origin_quotient(const std::vector<SweepRecord> &recs, Method m, std::size_t level) {
  std::vector<const SweepRecord *> near;
  for (const auto &r : recs) {
    if (r.level == level && r.x.lpNorm<Eigen::Infinity>() <= r.step * (1 + 1e-9)) near.push_back(&r);
  }
  double q = 0.0;
  for (const auto *a : near) {
    for (const auto *b : near) {
      const VectorXd d = b->x - a->x;
      const double dx = d.norm();
      if (dx > 0 && std::abs(dx - a->step) <= 1e-9 * a->step &&
          std::abs(d.lpNorm<Eigen::Infinity>() - dx) <= 1e-9 * a->step) {
        q = std::max(q, (b->results.at(m).u - a->results.at(m).u).norm() / dx);
      }
    }
  }
  return q;
}

Outcome c9() {
  // The steep part of the qp map near (x1, 0) is about x1^2 wide in x2, so the
  // grid cells touching the origin never straddle it; the growth shows up in
  // L_est over the window around the origin instead.
  const auto prob = registry_get("robinson");
  const auto recs = sweep(prob, {Method::socp, Method::qp_oracle}, window(2, 0.05, 1e-2, {1.0, 0.1}));
  const auto qp = estimate_lipschitz(recs, Method::qp_oracle);
  const auto socp = estimate_lipschitz(recs, Method::socp);
  const double growth = qp.levels.back().L_est / qp.levels.front().L_est;
  return {growth >= 2.0 && qp.verdict == lipsol::Verdict::diverging &&
              socp.verdict == lipsol::Verdict::lipschitz_stable,
          fmt::format("qp {} ({}, x{:.2f}; corner-cell quotient {:.4g} -> {:.4g}); socp {} ({})",
                      to_string(qp.verdict), levels_text(qp), growth,
                      origin_quotient(recs, Method::qp_oracle, 0),
                      origin_quotient(recs, Method::qp_oracle, 1), to_string(socp.verdict),
                      levels_text(socp))};
}

Outcome c10() {
  bool pass = true;
  std::string detail;
  for (const char *name : {"example1", "example2"}) {
    const auto prob = registry_get(name);
    const auto recs = sweep(prob, {Method::qcqp}, window(prob.n, 0.05, 1e-2, {1.0, 0.1}));
    const auto rep = estimate_lipschitz(recs, Method::qcqp);
    double kkt = 0.0;
    std::size_t singular = 0, bad = 0;
    for (const auto &r : recs) {
      const auto inst = instantiate(prob, r.x);
      const auto &out = r.results.at(Method::qcqp);
      if (out.status != Status::ok || out.feasibility_residual > 1e-9) ++bad;
      // A zero radius makes two balls touch at pi_f: the feasible set is that
      // single point and no multipliers exist.
      if (radius(inst) == 0.0) {
        ++singular;
        if ((out.u - inst.pi_f).norm() > 1e-12) ++bad;
        continue;
      }
      kkt = std::max(kkt, qcqp_kkt_residual(inst, out.u, 1.0));
    }
    const bool ok = rep.verdict == lipsol::Verdict::lipschitz_stable && kkt <= 1e-8 && bad == 0;
    pass = pass && ok;
    detail += fmt::format("{}{}: qcqp {} ({}), max KKT {:.1e}, {} singleton points", detail.empty() ? "" : "; ",
                          name, to_string(rep.verdict), levels_text(rep), kkt, singular);
  }
  return {pass, detail};
}

Outcome c11() {
  const auto box = parse_problem(R"({
    "name": "saturated_integrator", "n": 2, "m": 2, "p": 4,
    "domain": {"lower": [-3, -3], "upper": [3, 3]},
    "A": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]],
    "b": ["1", "1", "1", "1"],
    "pi_des": ["-x1", "-x2"],
    "pi_f": ["0", "0"]
  })");
  const auto integrator = Dynamics::parse({"u1", "u2"});
  auto final_state = [&](double dt) {
    return simulate(box, integrator, Method::socp, vec({2, 0}), dt, 3.0).states.back();
  };
  const VectorXd ref = final_state(0.01 / 8);
  const double ratio = (final_state(0.01) - ref).norm() / (final_state(0.005) - ref).norm();

  const auto ex1 = registry_get("example1");
  const auto dyn = Dynamics::parse({"u1 - 2"});
  auto max_jump = [](const Trajectory &t) {
    double j = 0.0;
    for (std::size_t k = 1; k < t.inputs.size(); ++k) j = std::max(j, (t.inputs[k] - t.inputs[k - 1]).norm());
    return j;
  };
  auto max_step = [](const Trajectory &t) {
    double j = 0.0;
    for (std::size_t k = 1; k < t.states.size(); ++k) j = std::max(j, (t.states[k] - t.states[k - 1]).norm());
    return j;
  };
  const auto qp = simulate(ex1, dyn, Method::qp_oracle, vec({0.5}), 1e-3, 1.0);
  const auto socp = simulate(ex1, dyn, Method::socp, vec({0.5}), 1e-3, 1.0);
  const double L = estimate_lipschitz(sweep(ex1, {Method::socp}, GridSpec::over(ex1.domain, 1e-3)),
                                      Method::socp)
                       .levels.back()
                       .L_est;
  const double socp_jump = max_jump(socp);
  const double socp_bound = L * max_step(socp) + 1e-6;
  const double qp_jump = max_jump(qp);
  const bool crossed = !qp.halted && !socp.halted && qp.states.back()[0] < 0.0;
  return {ratio >= 8.0 && ratio <= 32.0 && socp_jump <= socp_bound && qp_jump >= 0.5 && crossed,
          fmt::format("RK4 error ratio {:.2f}; socp max input step {:.3e} <= {:.3e}; qp max input "
                      "step {:.3f}",
                      ratio, socp_jump, socp_bound, qp_jump)};
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> expected_fail, only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected_fail.insert(std::stoi(argv[++i]));
    } else if (arg == "--only" && i + 1 < argc) {
      only.insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N]... [--only N]...\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"example1 QP discontinuity", c1},
      {"example1 SOCP regularity", c2},
      {"example2 SOCP closed form", c3},
      {"feasibility of socp and qcqp", c4},
      {"ball projection sensitivity", c5},
      {"closed form vs polygon oracle", c6},
      {"analytic center", c7},
      {"Steiner point of boxes", c8},
      {"robinson contrast", c9},
      {"qcqp empirical regularity", c10},
      {"RK4 closed loop", c11},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) failed.insert(id);
    fmt::print("[{}] C{:<2} {} ({:.2f} s): {}{}\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first,
               secs, v.detail, !v.pass && expected_fail.count(id) ? " [expected failure]" : "");
    std::cout.flush();
  }
  const std::size_t run = only.empty() ? criteria.size() : only.size();
  fmt::print("{} of {} criteria passed\n", run - failed.size(), run);
  if (!only.empty()) {
    std::erase_if(expected_fail, [&](int id) { return !only.count(id); });
  }
  return failed == expected_fail ? 0 : 1;
}
