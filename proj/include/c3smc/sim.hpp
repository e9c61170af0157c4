// Copyright 2026 The c3smc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-loop simulation: sliding-mode nominal control, cone and soft
// barrier rows, QP safety filter, and RK4 physics with the filtered input
// held over each control period.

#ifndef C3SMC__SIM_HPP_
#define C3SMC__SIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "c3smc/cbf.hpp"
#include "c3smc/disturbance.hpp"
#include "c3smc/models.hpp"
#include "c3smc/qp.hpp"
#include "c3smc/reference.hpp"
#include "c3smc/scenario.hpp"
#include "c3smc/smc.hpp"

namespace c3smc
{

/// Tolerance on min h_c3bf for a run to count as safe.
inline constexpr double kSafetyTolerance = 1e-3;

struct TraceRow
{
  double t{0.0};
  std::vector<double> native;
  CanonicalState canonical;
  Vec2 u_smc{Vec2::Zero()};
  Vec2 u_star{Vec2::Zero()};
  Vec2 d{Vec2::Zero()};
  Vec2 s{Vec2::Zero()};
  Vec2 e1{Vec2::Zero()};
  std::vector<double> h_obs;     // NaN while inside the inflated disk
  std::vector<double> dist_obs;  // center distance
  std::vector<double> slacks;
  QpStatus qp_status{QpStatus::kOptimal};
  std::vector<int> active_set;
};

struct Trace
{
  std::string vehicle;
  std::vector<std::string> state_names;
  std::vector<std::string> slack_names;
  std::size_t obstacle_count{0};
  std::vector<TraceRow> rows;
  std::vector<double> final_native;  // state at the end of the run
};

struct Metrics
{
  std::optional<double> rms_e1_post_reach;
  double max_e1{0.0};
  std::optional<double> reaching_time_measured;
  std::optional<double> reaching_time_bound;
  std::optional<double> min_h_c3bf;
  std::optional<double> min_clearance;
  int qp_infeasible_count{0};
  int slack_activation_count{0};
  int degenerate_row_count{0};
  int steps{0};
  GainReport gain_check;

  bool safe() const
  {
    return (!min_h_c3bf || *min_h_c3bf >= -kSafetyTolerance) &&
           (!min_clearance || *min_clearance >= 0.0);
  }
};

struct RunResult
{
  Trace trace;
  Metrics metrics;
};

/// Thrown when a control step cannot be computed; carries the partial run.
class SimulationAborted : public Error
{
public:
  SimulationAborted(std::size_t step, const std::string & what, RunResult partial)
  : Error(ErrorKind::kAborted, "step " + std::to_string(step) + ": " + what),
    step_(step), partial_(std::move(partial))
  {
  }

  std::size_t step() const {return step_;}
  const RunResult & partial() const {return partial_;}

private:
  std::size_t step_;
  RunResult partial_;
};

/// Everything one control update produces.
struct ControlStep
{
  Vec2 u_smc{Vec2::Zero()};
  Vec2 u_star{Vec2::Zero()};
  CanonicalState canonical;
  TrackingError error;
  Vec2 s{Vec2::Zero()};
  std::vector<double> h_obs;
  std::vector<double> dist_obs;
  std::vector<double> slacks;
  QpProblem qp;
  QpSolution solution;
  bool fallback{false};
  int degenerate_rows{0};
};

namespace detail
{

template<VehicleModel M>
std::optional<double> steering_of(const typename M::State & s)
{
  if constexpr (std::is_same_v<M, Ackermann>) {
    return s.delta3;
  } else {
    (void)s;
    return std::nullopt;
  }
}

inline InputBox effective_box(const InputBox & vehicle, const InputBox & limits)
{
  return {std::min(vehicle.u1_max, limits.u1_max), std::min(vehicle.u2_max, limits.u2_max)};
}

}  // namespace detail

/// One pass of to_canonical -> affine terms -> SMC -> barrier rows -> QP.
/// `hold` is applied when the QP is infeasible or hits its iteration cap.
template<VehicleModel M>
ControlStep control_step(
  const Scenario & sc, const VehicleSetup<M> & vehicle, const typename M::State & state,
  double t, ActiveSetSolver & solver, const Vec2 & hold)
{
  ControlStep out;
  out.canonical = M::canonical(vehicle.params, state);
  const AffineDynamics dyn = M::affine(vehicle.params, state);
  const ReferenceSample ref = reference(sc.reference, t);
  out.error = tracking_error(out.canonical, ref);
  out.s = surface_value(sc.surface, out.error);
  out.u_smc = smc_control(dyn, ref, out.error, sc.surface, sc.gains);

  const double d_bar = sc.disturbance.d_bar;
  const auto soft = soft_rows(
    out.canonical, dyn, detail::steering_of<M>(state), soft_bounds(sc.vehicle),
    sc.barriers.soft, d_bar);
  const auto k = static_cast<Eigen::Index>(soft.size());
  const Eigen::Index n = 2 + k;

  QpProblem & qp = out.qp;
  qp.h_diag = Eigen::VectorXd::Constant(n, sc.barriers.rho);
  qp.h_diag.head<2>().setOnes();
  qp.g = Eigen::VectorXd::Zero(n);
  qp.g.head<2>() = -out.u_smc;

  auto input_row = [n](const Vec2 & a, double b) {
      QpRow row{Eigen::VectorXd::Zero(n), b};
      row.a.head<2>() = a;
      return row;
    };

  for (const auto & obs : sc.obstacles) {
    const ObstacleState os = obstacle_state(obs, t);
    const double r_eff = obs.radius + sc.barriers.ego_radius;
    const double dist = (os.p - out.canonical.p).norm();
    out.dist_obs.push_back(dist);
    if (!(dist > r_eff)) {
      out.h_obs.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const C3bfRow row = c3bf_row(out.canonical, dyn, os, r_eff, sc.barriers.alpha_c3bf, d_bar);
    out.h_obs.push_back(row.h_value);
    if (row.degenerate) {
      ++out.degenerate_rows;
      continue;
    }
    qp.rows.push_back(input_row(row.a, -row.b));
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    QpRow row = input_row(soft[static_cast<std::size_t>(i)].a, soft[static_cast<std::size_t>(i)].rhs);
    row.a(2 + i) = 1.0;
    qp.rows.push_back(std::move(row));
  }
  const InputBox box = detail::effective_box(M::input_box(vehicle.params), sc.input_limits);
  if (std::isfinite(box.u1_max)) {
    qp.rows.push_back(input_row(Vec2(1.0, 0.0), -box.u1_max));
    qp.rows.push_back(input_row(Vec2(-1.0, 0.0), -box.u1_max));
  }
  if (std::isfinite(box.u2_max)) {
    qp.rows.push_back(input_row(Vec2(0.0, 1.0), -box.u2_max));
    qp.rows.push_back(input_row(Vec2(0.0, -1.0), -box.u2_max));
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    QpRow row{Eigen::VectorXd::Zero(n), 0.0};
    row.a(2 + i) = 1.0;
    qp.rows.push_back(std::move(row));
  }

  out.solution = solver.solve(qp);
  if (out.solution.status == QpStatus::kOptimal) {
    out.u_star = out.solution.x.head<2>();
    for (Eigen::Index i = 0; i < k; ++i) {
      out.slacks.push_back(out.solution.x(2 + i));
    }
  } else {
    out.fallback = true;
    out.u_star = hold;
    out.slacks.assign(static_cast<std::size_t>(k), 0.0);
  }
  return out;
}

/// Runs one scenario for a given vehicle model.
template<VehicleModel M>
RunResult simulate(const Scenario & sc, const VehicleSetup<M> & vehicle)
{
  using Vector = typename M::Vector;

  RunResult result;
  Trace & trace = result.trace;
  Metrics & metrics = result.metrics;
  trace.vehicle = M::kName;
  for (const char * name : M::kStateNames) {
    trace.state_names.emplace_back(name);
  }
  for (const auto & spec : sc.barriers.soft) {
    trace.slack_names.emplace_back(to_string(spec.kind));
  }
  trace.obstacle_count = sc.obstacles.size();
  metrics.gain_check = check_gains(sc);

  const double dt = sc.sim.dt_physics;
  const auto substeps =
    static_cast<std::int64_t>(std::llround(sc.sim.control_period / sc.sim.dt_physics));
  const auto steps =
    static_cast<std::int64_t>(std::floor(sc.sim.duration / sc.sim.control_period + 1e-9));

  DisturbanceGenerator disturbance(sc.disturbance, sc.sim.seed);
  ActiveSetSolver solver;
  Vector x = M::pack(vehicle.initial);
  Vec2 hold = Vec2::Zero();

  // Cone value and clearance at physics rate.
  auto observe = [&](const Vector & xv, double t) {
      if (sc.obstacles.empty()) {
        return;
      }
      const CanonicalState c = M::canonical(vehicle.params, M::unpack(xv));
      for (const auto & obs : sc.obstacles) {
        const ObstacleState os = obstacle_state(obs, t);
        const double r_eff = obs.radius + sc.barriers.ego_radius;
        const Vec2 p_rel = os.p - c.p;
        const double clearance = p_rel.norm() - r_eff;
        metrics.min_clearance = std::min(metrics.min_clearance.value_or(kInf), clearance);
        // Inside the disk the cone is undefined; the clearance records the violation.
        if (clearance > 0.0) {
          const double h = c3bf_value(p_rel, os.v - c.upsilon, r_eff);
          metrics.min_h_c3bf = std::min(metrics.min_h_c3bf.value_or(kInf), h);
        }
      }
    };

  auto deriv = [&](const Vector & xv, const Vec2 & u, double t) {
      return M::derivative(vehicle.params, M::unpack(xv), u, disturbance.at(t));
    };

  if (steps > 0) {
    observe(x, 0.0);
  }
  for (std::int64_t step = 0; step < steps; ++step) {
    const std::int64_t base = step * substeps;
    const double t = static_cast<double>(base) * dt;
    disturbance.begin_period();
    ControlStep cs;
    try {
      cs = control_step(sc, vehicle, M::unpack(x), t, solver, hold);
    } catch (const Error & e) {
      metrics.steps = static_cast<int>(trace.rows.size());
      throw SimulationAborted(static_cast<std::size_t>(step), e.what(), result);
    }
    if (cs.fallback) {
      ++metrics.qp_infeasible_count;
    } else {
      hold = cs.u_star;
    }
    metrics.degenerate_row_count += cs.degenerate_rows;
    if (std::any_of(cs.slacks.begin(), cs.slacks.end(), [](double s) {return s > 1e-9;})) {
      ++metrics.slack_activation_count;
    }

    TraceRow row;
    row.t = t;
    row.native.assign(x.data(), x.data() + x.size());
    row.canonical = cs.canonical;
    row.u_smc = cs.u_smc;
    row.u_star = cs.u_star;
    row.d = disturbance.at(t);
    row.s = cs.s;
    row.e1 = cs.error.e1;
    row.h_obs = std::move(cs.h_obs);
    row.dist_obs = std::move(cs.dist_obs);
    row.slacks = std::move(cs.slacks);
    row.qp_status = cs.solution.status;
    row.active_set = cs.solution.active_set;
    trace.rows.push_back(std::move(row));

    const Vec2 u = cs.u_star;
    for (std::int64_t j = 0; j < substeps; ++j) {
      const double tj = static_cast<double>(base + j) * dt;
      const Vector k1 = deriv(x, u, tj);
      const Vector k2 = deriv(x + 0.5 * dt * k1, u, tj + 0.5 * dt);
      const Vector k3 = deriv(x + 0.5 * dt * k2, u, tj + 0.5 * dt);
      const Vector k4 = deriv(x + dt * k3, u, tj + dt);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      observe(x, static_cast<double>(base + j + 1) * dt);
    }
  }

  metrics.steps = static_cast<int>(trace.rows.size());
  trace.final_native.assign(x.data(), x.data() + x.size());
  if (trace.rows.empty()) {
    return result;
  }
  metrics.reaching_time_bound = reaching_time_bound(trace.rows.front().s, sc.gains.eta);
  for (const auto & row : trace.rows) {
    metrics.max_e1 = std::max(metrics.max_e1, row.e1.norm());
    if (!metrics.reaching_time_measured &&
      row.s.lpNorm<Eigen::Infinity>() <= sc.gains.lambda_bl)
    {
      metrics.reaching_time_measured = row.t;
    }
  }
  if (metrics.reaching_time_measured) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto & row : trace.rows) {
      if (row.t >= *metrics.reaching_time_measured) {
        sum += row.e1.squaredNorm();
        ++count;
      }
    }
    metrics.rms_e1_post_reach = std::sqrt(sum / static_cast<double>(count));
  }
  return result;
}

inline RunResult run(const Scenario & sc)
{
  validate(sc);
  return std::visit([&sc](const auto & vehicle) {return simulate(sc, vehicle);}, sc.vehicle);
}

}  // namespace c3smc

#endif  // C3SMC__SIM_HPP_
