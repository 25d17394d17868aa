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

#include "lipsol/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "lipsol/error.hpp"

namespace lipsol {

namespace {

using nlohmann::json;

constexpr double kGapTol = 1e-7;
constexpr std::size_t kMaxReportedJumps = 1000;

json vec_json(const Eigen::VectorXd &v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Status status_for(const Error &e) {
  if (dynamic_cast<const DegenerateRowError *>(&e)) return Status::degenerate;
  if (dynamic_cast<const AssumptionViolation *>(&e)) return Status::infeasible;
  return Status::degenerate;
}

void fill_record(SweepRecord &rec, const ParametricProblem &problem,
                 const std::vector<Method> &methods, const FeasiblePointProvider *provider,
                 const SweepSettings &settings) {
  std::optional<ProblemInstance> inst;
  try {
    inst = instantiate(problem, rec.x, provider);
  } catch (const Error &e) {
    for (Method m : methods) {
      rec.results[m] = MethodOutcome{Eigen::VectorXd(), std::numeric_limits<double>::quiet_NaN(),
                                     status_for(e), e.what()};
    }
    return;
  }
  rec.pi_des = inst->pi_des;
  for (Method m : methods) {
    MethodOutcome out;
    try {
      SolveResult r = solve(m, *inst, settings.solver);
      if (m == Method::socp) rec.radius = r.radius;
      out.u = std::move(r.u);
      out.feasibility_residual = r.feasibility_residual;
      out.status = r.status;
    } catch (const Error &e) {
      out.status = status_for(e);
      out.feasibility_residual = std::numeric_limits<double>::quiet_NaN();
      out.message = e.what();
    }
    rec.results[m] = std::move(out);
  }
  const bool has_socp = std::find(methods.begin(), methods.end(), Method::socp) != methods.end();
  const bool has_qcqp = std::find(methods.begin(), methods.end(), Method::qcqp) != methods.end();
  if (has_socp && has_qcqp) {
    try {
      rec.socp_ball_inside_qcqp = socp_ball_inside_qcqp(*inst, settings.solver.qcqp.k);
    } catch (const Error &) {
      rec.socp_ball_inside_qcqp.reset();
    }
  }
}

bool ok(const SweepRecord &rec, Method method) {
  const auto it = rec.results.find(method);
  return it != rec.results.end() && it->second.status == Status::ok;
}

} // namespace

GridSpec GridSpec::over(const Box &box, double step, std::vector<double> levels) {
  GridSpec g;
  for (std::size_t k = 0; k < box.lower.size(); ++k) {
    g.axes.push_back({box.lower[k], box.upper[k], step});
  }
  g.refinement_levels = std::move(levels);
  return g;
}

void GridSpec::validate() const {
  if (axes.empty()) throw Error("grid needs at least one axis");
  if (refinement_levels.empty()) throw Error("grid needs at least one refinement level");
  for (const auto &a : axes) {
    if (!(a.step > 0.0)) throw Error("grid step must be positive");
    if (!(a.lower < a.upper)) throw Error("grid axis needs lower < upper");
  }
  for (double mult : refinement_levels) {
    if (!(mult > 0.0)) throw Error("refinement multipliers must be positive");
  }
  for (std::size_t l = 0; l < refinement_levels.size(); ++l) {
    double total = 1.0;
    for (std::size_t c : counts(l)) total *= static_cast<double>(c);
    if (total > kMaxGridPoints) {
      throw Error(fmt::format("grid level {} has {:.0f} points (limit {:.0f})", l, total,
                              kMaxGridPoints));
    }
  }
}

std::vector<std::size_t> GridSpec::counts(std::size_t level) const {
  std::vector<std::size_t> out;
  for (const auto &a : axes) {
    const double step = a.step * refinement_levels.at(level);
    const double cells = (a.upper - a.lower) / step;
    out.push_back(static_cast<std::size_t>(std::floor(cells + 1e-9)) + 1);
  }
  return out;
}

double GridSpec::coordinate(std::size_t axis, std::size_t level, std::size_t i) const {
  const GridAxis &a = axes.at(axis);
  const double step = a.step * refinement_levels.at(level);
  const double cells = (a.upper - a.lower) / step;
  const double whole = std::round(cells);
  // When the step divides the range, interpolate so that endpoints and the
  // midpoint come out exact.
  if (std::abs(cells - whole) <= 1e-9 * std::max(1.0, whole)) {
    return a.lower + (a.upper - a.lower) * (static_cast<double>(i) / whole);
  }
  return std::min(a.lower + static_cast<double>(i) * step, a.upper);
}

std::vector<SweepRecord> sweep(const ParametricProblem &problem, const std::vector<Method> &methods,
                               const GridSpec &grid, const SweepSettings &settings) {
  grid.validate();
  if (grid.axes.size() != problem.n) {
    throw Error(fmt::format("grid has {} axes, problem has n = {}", grid.axes.size(), problem.n));
  }
  for (std::size_t k = 0; k < problem.n; ++k) {
    if (grid.axes[k].lower < problem.domain.lower[k] - 1e-12 ||
        grid.axes[k].upper > problem.domain.upper[k] + 1e-12) {
      throw Error(fmt::format("grid axis {} leaves the problem domain", k + 1));
    }
  }
  const auto provider = make_provider(settings.provider, settings.provider_settings);

  std::vector<SweepRecord> records;
  for (std::size_t level = 0; level < grid.refinement_levels.size(); ++level) {
    const std::vector<std::size_t> counts = grid.counts(level);
    std::size_t total = 1;
    for (std::size_t c : counts) total *= c;
    const std::size_t base = records.size();
    records.resize(base + total);
    for (std::size_t flat = 0; flat < total; ++flat) {
      SweepRecord &rec = records[base + flat];
      rec.level = level;
      rec.step = grid.axes[0].step * grid.refinement_levels[level];
      rec.index.resize(counts.size());
      rec.x.resize(static_cast<Eigen::Index>(counts.size()));
      std::size_t rem = flat;
      for (std::size_t k = counts.size(); k-- > 0;) {
        rec.index[k] = rem % counts[k];
        rem /= counts[k];
        rec.x[static_cast<Eigen::Index>(k)] = grid.coordinate(k, level, rec.index[k]);
      }
    }
  }

  const std::size_t workers = std::max<std::size_t>(1, settings.workers);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < records.size(); i += stride) {
      fill_record(records[i], problem, methods, provider.get(), settings);
    }
  };
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto &t : pool) t.join();
  }
  return records;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
  case Verdict::lipschitz_stable:
    return "lipschitz_stable";
  case Verdict::diverging:
    return "diverging";
  case Verdict::discontinuous:
    return "discontinuous";
  }
  return "lipschitz_stable";
}

LipschitzReport estimate_lipschitz(const std::vector<SweepRecord> &records, Method method) {
  if (records.size() < 2) throw Error("Lipschitz estimation needs at least two records");
  LipschitzReport report;
  report.method = method;

  std::size_t begin = 0;
  std::vector<std::vector<Jump>> jumps_per_level;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].level == records[begin].level) ++end;

    const std::size_t dims = records[begin].index.size();
    std::vector<std::size_t> counts(dims, 0);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < dims; ++k) counts[k] = std::max(counts[k], records[i].index[k] + 1);
    }
    std::vector<std::size_t> stride(dims, 1);
    for (std::size_t k = dims; k-- > 1;) stride[k - 1] = stride[k] * counts[k];
    if (stride[0] * counts[0] != end - begin) {
      throw Error("records do not form a rectangular grid");
    }

    LevelEstimate est;
    est.step = records[begin].step;
    std::vector<Jump> jumps;
    for (std::size_t i = begin; i < end; ++i) {
      const SweepRecord &a = records[i];
      if (!ok(a, method)) continue;
      for (std::size_t k = 0; k < dims; ++k) {
        if (a.index[k] + 1 >= counts[k]) continue;
        const SweepRecord &b = records[i + stride[k]];
        if (!ok(b, method)) continue;
        const double du = (a.results.at(method).u - b.results.at(method).u).norm();
        const double dx = (a.x - b.x).norm();
        if (dx == 0.0) continue;
        const double q = du / dx;
        ++est.pairs;
        est.L_est = std::max(est.L_est, q);
        if (du > kJumpThreshold) {
          ++est.jumps;
          if (jumps.size() < kMaxReportedJumps) jumps.push_back({a.x, b.x, q});
        }
      }
    }
    report.levels.push_back(est);
    jumps_per_level.push_back(std::move(jumps));
    begin = end;
  }
  report.jump_locations = jumps_per_level.back();

  const bool jump_everywhere = std::all_of(report.levels.begin(), report.levels.end(),
                                           [](const LevelEstimate &l) { return l.jumps > 0; });
  if (jump_everywhere) {
    report.verdict = Verdict::discontinuous;
    return report;
  }
  report.verdict = Verdict::lipschitz_stable;
  for (std::size_t l = 1; l < report.levels.size(); ++l) {
    const LevelEstimate &coarse = report.levels[l - 1];
    const LevelEstimate &fine = report.levels[l];
    if (coarse.L_est <= 1e-12) {
      if (fine.L_est > 1e-9) report.verdict = Verdict::diverging;
      continue;
    }
    const double decades = std::log10(coarse.step / fine.step);
    const double ratio = fine.L_est / coarse.L_est;
    const double per_decade = decades > 0.0 ? std::pow(ratio, 1.0 / decades) : ratio;
    if (per_decade >= kDivergenceFactor) report.verdict = Verdict::diverging;
  }
  return report;
}

double lipschitz_bound(const LipschitzMetadata &meta, std::size_t p) {
  if (meta.L_a.size() != p || meta.L_b.size() != p) {
    throw Error(fmt::format("Lipschitz metadata needs {} entries in L_a and L_b", p));
  }
  double L_r = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    L_r = std::max(L_r, meta.L_b[i] + meta.L_pi_f + meta.L_a[i] * meta.U_f_bar);
  }
  return meta.L_pi_des + 2.0 * meta.L_pi_f + L_r;
}

ComparisonSummary compare_methods(const std::vector<SweepRecord> &records) {
  std::vector<Method> methods;
  bool has_baseline = false;
  for (const auto &rec : records) {
    for (const auto &[m, out] : rec.results) {
      if (m == Method::qp_oracle) {
        has_baseline = true;
      } else if (std::find(methods.begin(), methods.end(), m) == methods.end()) {
        methods.push_back(m);
      }
    }
  }
  if (!has_baseline) throw Error("comparison needs qp_oracle results as the baseline");
  std::sort(methods.begin(), methods.end());

  ComparisonSummary summary;
  for (Method m : methods) {
    MethodComparison c;
    c.method = m;
    c.min_gap = std::numeric_limits<double>::infinity();
    c.max_gap = -std::numeric_limits<double>::infinity();
    double sum_dist = 0.0;
    double sum_gap = 0.0;
    for (const auto &rec : records) {
      if (!ok(rec, m) || !ok(rec, Method::qp_oracle)) continue;
      const Eigen::VectorXd &u = rec.results.at(m).u;
      const Eigen::VectorXd &uq = rec.results.at(Method::qp_oracle).u;
      const double dist = (u - uq).norm();
      const double gap = (u - rec.pi_des).norm() - (uq - rec.pi_des).norm();
      ++c.points;
      sum_dist += dist;
      sum_gap += gap;
      c.max_distance_to_qp = std::max(c.max_distance_to_qp, dist);
      c.max_gap = std::max(c.max_gap, gap);
      c.min_gap = std::min(c.min_gap, gap);
    }
    if (c.points > 0) {
      c.mean_distance_to_qp = sum_dist / static_cast<double>(c.points);
      c.mean_gap = sum_gap / static_cast<double>(c.points);
    } else {
      c.min_gap = c.max_gap = 0.0;
    }
    summary.methods.push_back(c);
  }

  for (const auto &rec : records) {
    if (!rec.socp_ball_inside_qcqp.value_or(false)) continue;
    if (!ok(rec, Method::socp) || !ok(rec, Method::qcqp)) continue;
    ++summary.certified_points;
    const double gq = (rec.results.at(Method::qcqp).u - rec.pi_des).norm();
    const double gs = (rec.results.at(Method::socp).u - rec.pi_des).norm();
    if (gq > gs + kGapTol) ++summary.dominance_violations;
  }
  return summary;
}

std::string format_float(double v) { return fmt::format("{:.17g}", v); }

void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records,
                     const std::vector<Method> &methods) {
  if (records.empty()) return;
  const auto n = records.front().x.size();
  Eigen::Index m = 0;
  for (const auto &rec : records) {
    for (const auto &[meth, res] : rec.results) m = std::max(m, res.u.size());
  }

  std::string line;
  for (Eigen::Index k = 0; k < n; ++k) line += fmt::format("{}x_{}", k ? "," : "", k + 1);
  for (Method meth : methods) {
    const std::string tag = to_string(meth);
    for (Eigen::Index j = 0; j < m; ++j) line += fmt::format(",{}_u_{}", tag, j + 1);
    line += fmt::format(",{}_residual,{}_status", tag, tag);
  }
  out << line << '\n';

  for (const auto &rec : records) {
    line.clear();
    for (Eigen::Index k = 0; k < n; ++k) line += (k ? "," : "") + format_float(rec.x[k]);
    for (Method meth : methods) {
      const auto it = rec.results.find(meth);
      for (Eigen::Index j = 0; j < m; ++j) {
        line += ',';
        if (it != rec.results.end() && j < it->second.u.size()) line += format_float(it->second.u[j]);
      }
      line += ',';
      if (it != rec.results.end()) {
        line += format_float(it->second.feasibility_residual) + ',' + to_string(it->second.status);
      } else {
        line += ',';
      }
    }
    out << line << '\n';
  }
}

std::string report_to_json(const LipschitzReport &report, int indent) {
  json j;
  j["method"] = to_string(report.method);
  json levels = json::array();
  for (const auto &l : report.levels) {
    levels.push_back({{"step", l.step}, {"L_est", l.L_est}, {"pairs", l.pairs}, {"jumps", l.jumps}});
  }
  j["levels"] = levels;
  json jumps = json::array();
  for (const auto &jp : report.jump_locations) {
    jumps.push_back({{"x1", vec_json(jp.x1)}, {"x2", vec_json(jp.x2)}, {"quotient", jp.quotient}});
  }
  j["jump_locations"] = jumps;
  j["verdict"] = to_string(report.verdict);
  return j.dump(indent);
}

std::string comparison_to_json(const ComparisonSummary &summary, int indent) {
  json j;
  json methods = json::array();
  for (const auto &c : summary.methods) {
    methods.push_back({{"method", to_string(c.method)},
                       {"points", c.points},
                       {"mean_distance_to_qp", c.mean_distance_to_qp},
                       {"max_distance_to_qp", c.max_distance_to_qp},
                       {"mean_gap", c.mean_gap},
                       {"max_gap", c.max_gap},
                       {"min_gap", c.min_gap}});
  }
  j["methods"] = methods;
  j["socp_ball_inside_qcqp_points"] = summary.certified_points;
  j["qcqp_over_socp_violations"] = summary.dominance_violations;
  return j.dump(indent);
}

} // namespace lipsol
