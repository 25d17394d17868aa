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

#ifndef LIPSOL_QP_HPP
#define LIPSOL_QP_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace lipsol {

/// Upper bound on the number of active-set candidates the exact projection
/// is willing to enumerate.
inline constexpr double kMaxActiveSetCandidates = 1e6;

struct PolyhedralProjection {
  Eigen::VectorXd u;
  // Constraints active at u within 1e-9, 0-based, ascending.
  std::vector<std::size_t> active_set;
  bool feasible = false;
};

/// Exact Euclidean projection of `target` onto {u : A u <= b} by
/// enumerating every candidate active set of size <= m. Each candidate is
/// the projection onto the affine set {a_i^T u = b_i, i in S} (least-norm
/// correction, so rank-deficient S is fine); primal-feasible, KKT-consistent
/// candidates compete on distance. Returns feasible = false when none exists.
/// Throws SolverError when the enumeration guard is exceeded.
PolyhedralProjection project_polyhedron(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                                        const Eigen::VectorXd &target);

/// Number of subsets of size 1..min(m, p) of p constraints.
double active_set_candidates(Eigen::Index p, Eigen::Index m);

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0; // ||C x - d||
};

/// min ||C x - d|| subject to x >= 0 (Lawson-Hanson active set).
NnlsResult nnls(const Eigen::MatrixXd &C, const Eigen::VectorXd &d);

} // namespace lipsol

#endif // LIPSOL_QP_HPP
