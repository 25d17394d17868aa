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

#include "lipsol/problem.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "lipsol/error.hpp"

namespace lipsol {

namespace {

void check_vars(const Expression &e, std::size_t n, const std::string &where) {
  const FreeVars fv = e.free_vars();
  if (!fv.u.empty()) {
    throw ProblemError(fmt::format("{}: input variables are not allowed in problem data", where));
  }
  if (!fv.x.empty() && *fv.x.rbegin() > n) {
    throw ProblemError(fmt::format("{}: references x{} but n = {}", where, *fv.x.rbegin(), n));
  }
}

Eigen::VectorXd eval_all(const std::vector<Expression> &exprs, const Eigen::VectorXd &x) {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(exprs.size()));
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = exprs[i].evaluate(xs);
  }
  return out;
}

} // namespace

bool Box::contains(const Eigen::VectorXd &x, double slack) const {
  if (static_cast<std::size_t>(x.size()) != lower.size()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double xi = x[static_cast<Eigen::Index>(i)];
    if (xi < lower[i] - slack || xi > upper[i] + slack) return false;
  }
  return true;
}

void ParametricProblem::validate() const {
  if (n == 0 || m == 0 || p == 0) {
    throw ProblemError("n, m and p must be positive");
  }
  if (A.size() != p || b.size() != p) {
    throw ProblemError(fmt::format("expected {} constraint rows in A and b", p));
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (A[i].size() != m) {
      throw ProblemError(fmt::format("row {} of A has {} entries, expected {}", i + 1, A[i].size(), m));
    }
    for (std::size_t j = 0; j < m; ++j) check_vars(A[i][j], n, fmt::format("A[{}][{}]", i + 1, j + 1));
    check_vars(b[i], n, fmt::format("b[{}]", i + 1));
  }
  if (pi_des.size() != m) throw ProblemError(fmt::format("pi_des must have {} entries", m));
  for (std::size_t j = 0; j < m; ++j) check_vars(pi_des[j], n, fmt::format("pi_des[{}]", j + 1));
  if (pi_f) {
    if (pi_f->size() != m) throw ProblemError(fmt::format("pi_f must have {} entries", m));
    for (std::size_t j = 0; j < m; ++j) check_vars((*pi_f)[j], n, fmt::format("pi_f[{}]", j + 1));
  }
  if (domain.lower.size() != n || domain.upper.size() != n) {
    throw ProblemError(fmt::format("domain bounds must have {} entries", n));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(domain.lower[k] <= domain.upper[k])) {
      throw ProblemError(fmt::format("domain lower > upper on axis {}", k + 1));
    }
  }
  if (constants) {
    const auto &c = *constants;
    if (c.L_a.size() != p || c.L_b.size() != p) {
      throw ProblemError(fmt::format("constants.L_a and constants.L_b must have {} entries", p));
    }
    auto nonneg = [](double v) { return v >= 0.0; };
    if (!std::all_of(c.L_a.begin(), c.L_a.end(), nonneg) ||
        !std::all_of(c.L_b.begin(), c.L_b.end(), nonneg) || c.L_pi_des < 0 || c.L_pi_f < 0 ||
        c.U_f_bar < 0) {
      throw ProblemError("Lipschitz constants must be nonnegative");
    }
  }
}

ProblemInstance ProblemInstance::from_raw(Eigen::MatrixXd A, Eigen::VectorXd b,
                                          Eigen::VectorXd pi_des, Eigen::VectorXd pi_f) {
  if (b.size() != A.rows() || pi_des.size() != A.cols() ||
      (pi_f.size() != 0 && pi_f.size() != A.cols())) {
    throw ProblemError("instance dimensions do not match");
  }
  ProblemInstance inst;
  inst.raw_row_norms = A.rowwise().norm();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double nrm = inst.raw_row_norms[i];
    if (!(nrm >= kZeroRowNorm)) {
      throw DegenerateRowError(
          fmt::format("constraint {} has a zero-norm row (||a_i|| = {:g})", i + 1, nrm),
          static_cast<std::size_t>(i));
    }
    A.row(i) /= nrm;
    b[i] /= nrm;
  }
  inst.A = std::move(A);
  inst.b = std::move(b);
  inst.pi_des = std::move(pi_des);
  inst.pi_f = std::move(pi_f);
  return inst;
}

ProblemInstance instantiate(const ParametricProblem &problem, const Eigen::VectorXd &x,
                            const FeasiblePointProvider *provider) {
  if (static_cast<std::size_t>(x.size()) != problem.n) {
    throw ProblemError(fmt::format("parameter has {} entries, expected {}", x.size(), problem.n));
  }
  if (!problem.domain.contains(x)) {
    throw ProblemError("parameter lies outside the problem domain");
  }
  if (!provider && !problem.pi_f) {
    throw ProblemError("problem '" + problem.name +
                       "' has no pi_f expressions; a feasible-point provider is required");
  }
  const auto m = static_cast<Eigen::Index>(problem.m);
  const auto p = static_cast<Eigen::Index>(problem.p);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));

  Eigen::MatrixXd A(p, m);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      A(i, j) = problem.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].evaluate(xs);
    }
  }
  ProblemInstance inst =
      ProblemInstance::from_raw(std::move(A), eval_all(problem.b, x), eval_all(problem.pi_des, x));
  inst.x = x;
  inst.pi_f = provider ? provider->point(inst) : eval_all(*problem.pi_f, x);
  if (inst.pi_f.size() != m) {
    throw ProblemError("feasible point has the wrong dimension");
  }

  const Eigen::VectorXd viol = inst.A * inst.pi_f - inst.b;
  Eigen::Index worst = 0;
  if (viol.maxCoeff(&worst) > kFeasibilityTol) {
    throw AssumptionViolation(
        fmt::format("feasible point violates constraint {} by {:.3e} (assumption: pi_f(x) in K(x))",
                    worst + 1, viol[worst]),
        static_cast<std::size_t>(worst));
  }
  return inst;
}

double feasibility_residual(const ProblemInstance &instance, const Eigen::VectorXd &u) {
  return (instance.A * u - instance.b).maxCoeff();
}

} // namespace lipsol
