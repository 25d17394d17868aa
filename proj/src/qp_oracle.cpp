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

#include <cmath>
#include <limits>
#include <numeric>

#include "lipsol/error.hpp"
#include "lipsol/qp.hpp"

namespace lipsol {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
// Gram pivots below this fraction of the largest are treated as rank loss.
constexpr double kRankTol = 1e-12;

struct Candidate {
  Eigen::VectorXd u;
  bool valid = false;
};

// Projection of t onto {A_S u = b_S}. Returns valid = false when the
// equalities are inconsistent or the multipliers have the wrong sign.
Candidate affine_projection(const Eigen::MatrixXd &AS, const Eigen::VectorXd &bS,
                            const Eigen::VectorXd &t) {
  Candidate c;
  const Eigen::VectorXd rhs = bS - AS * t;
  const Eigen::MatrixXd gram = AS * AS.transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd piv = ldlt.vectorD().cwiseAbs();
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (ldlt.info() == Eigen::Success && piv.minCoeff() > kRankTol * piv.maxCoeff()) {
    const Eigen::VectorXd y = ldlt.solve(rhs);
    // Stationarity 2(u - t) + A_S^T lambda = 0 with u - t = A_S^T y.
    const Eigen::VectorXd lambda = -2.0 * y;
    if (lambda.minCoeff() < -kDualTol * scale) return c;
    c.u = t + AS.transpose() * y;
    c.valid = true;
    return c;
  }
  // Rank-deficient: least-norm correction; only consistency is checked, the
  // multipliers are not unique.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(AS);
  cod.setThreshold(1e-10);
  c.u = t + cod.solve(rhs);
  if ((AS * c.u - bS).lpNorm<Eigen::Infinity>() > kPrimalTol * (1.0 + bS.lpNorm<Eigen::Infinity>())) {
    return c;
  }
  c.valid = true;
  return c;
}

} // namespace

double active_set_candidates(Eigen::Index p, Eigen::Index m) {
  double total = 0.0;
  double binom = 1.0;
  for (Eigen::Index k = 1; k <= std::min(m, p); ++k) {
    binom = binom * static_cast<double>(p - k + 1) / static_cast<double>(k);
    total += binom;
  }
  return total;
}

PolyhedralProjection project_polyhedron(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                                        const Eigen::VectorXd &target) {
  const Eigen::Index p = A.rows();
  const Eigen::Index m = A.cols();
  if (active_set_candidates(p, m) > kMaxActiveSetCandidates) {
    throw SolverError("active-set enumeration guard exceeded (too many constraints for the "
                      "exact oracle)");
  }

  auto finish = [&](Eigen::VectorXd u) {
    PolyhedralProjection out;
    const Eigen::VectorXd slack = b - A * u;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(slack[i]) <= kPrimalTol) out.active_set.push_back(static_cast<std::size_t>(i));
    }
    out.u = std::move(u);
    out.feasible = true;
    return out;
  };

  if ((A * target - b).maxCoeff() <= 0.0) return finish(target);

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;
  std::vector<Eigen::Index> idx;
  Eigen::MatrixXd AS;
  Eigen::VectorXd bS;
  for (Eigen::Index k = 1; k <= std::min(m, p); ++k) {
    idx.resize(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    AS.resize(k, m);
    bS.resize(k);
    for (;;) {
      for (Eigen::Index r = 0; r < k; ++r) {
        AS.row(r) = A.row(idx[static_cast<std::size_t>(r)]);
        bS[r] = b[idx[static_cast<std::size_t>(r)]];
      }
      Candidate c = affine_projection(AS, bS, target);
      if (c.valid) {
        const double obj = (c.u - target).squaredNorm();
        if (obj < best && (A * c.u - b).maxCoeff() <= kPrimalTol) {
          best = obj;
          best_u = std::move(c.u);
        }
      }
      // Next combination in lexicographic order.
      Eigen::Index r = k - 1;
      while (r >= 0 && idx[static_cast<std::size_t>(r)] == p - k + r) --r;
      if (r < 0) break;
      ++idx[static_cast<std::size_t>(r)];
      for (Eigen::Index s = r + 1; s < k; ++s) {
        idx[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s - 1)] + 1;
      }
    }
  }
  if (!std::isfinite(best)) {
    PolyhedralProjection out;
    out.u = target;
    return out;
  }
  return finish(std::move(best_u));
}

NnlsResult nnls(const Eigen::MatrixXd &C, const Eigen::VectorXd &d) {
  const Eigen::Index n = C.cols();
  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.residual = d.norm();
    return res;
  }
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * C.norm() *
                     static_cast<double>(std::max(C.rows(), n));

  auto solve_passive = [&](Eigen::VectorXd &z) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Eigen::MatrixXd Cp(C.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) Cp.col(static_cast<Eigen::Index>(c)) = C.col(cols[c]);
    const Eigen::VectorXd zp = Cp.completeOrthogonalDecomposition().solve(d);
    z = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) z[cols[c]] = zp[static_cast<Eigen::Index>(c)];
  };

  for (int outer = 0; outer < 3 * static_cast<int>(n) + 10; ++outer) {
    const Eigen::VectorXd w = C.transpose() * (d - C * res.x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) {
        wmax = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      Eigen::VectorXd z;
      solve_passive(z);
      bool all_pos = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) all_pos = false;
      }
      if (all_pos) {
        res.x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          alpha = std::min(alpha, res.x[j] / (res.x[j] - z[j]));
        }
      }
      res.x += alpha * (z - res.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && std::abs(res.x[j]) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          res.x[j] = 0.0;
        }
      }
    }
  }
  res.x = res.x.cwiseMax(0.0);
  res.residual = (C * res.x - d).norm();
  return res;
}

} // namespace lipsol
