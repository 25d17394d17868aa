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
#include <random>

#include "lipsol/error.hpp"
#include "lipsol/geometry.hpp"

namespace lipsol {

SteinerEstimate steiner_point(const ProblemInstance &instance, std::size_t samples,
                              std::uint64_t seed) {
  if (samples == 0) throw Error("steiner point needs at least one sample");
  const Eigen::Index m = instance.m();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Welford running mean/variance, accumulated in sample order.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd theta(m);
  for (std::size_t k = 0; k < samples; ++k) {
    double nrm = 0.0;
    do {
      for (Eigen::Index j = 0; j < m; ++j) theta[j] = normal(rng);
      nrm = theta.norm();
    } while (nrm == 0.0);
    // Uniform in the ball: direction times U^(1/m). The support point only
    // depends on the direction, but the radius draw keeps the sampler honest.
    theta *= std::pow(1.0 - uniform(rng), 1.0 / static_cast<double>(m)) / nrm;

    const Eigen::VectorXd s = support_point(instance, theta);
    const Eigen::VectorXd delta = s - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta.cwiseProduct(s - mean);
  }

  SteinerEstimate out;
  out.point = mean;
  out.samples = samples;
  if (samples > 1) {
    out.standard_error = (m2 / static_cast<double>(samples - 1) / static_cast<double>(samples))
                             .cwiseSqrt();
  } else {
    out.standard_error = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  }
  return out;
}

Eigen::VectorXd SteinerProvider::point(const ProblemInstance &instance) const {
  return steiner_point(instance, samples_, seed_).point;
}

} // namespace lipsol
