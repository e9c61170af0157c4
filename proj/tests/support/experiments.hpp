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


// Closed-loop experiments shared by the unit tests and the acceptance binary.

#ifndef TESTS__SUPPORT__EXPERIMENTS_HPP_
#define TESTS__SUPPORT__EXPERIMENTS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "c3smc/presets.hpp"
#include "c3smc/sim.hpp"

namespace experiments
{

struct ReachingTrial
{
  double s0_norm{0.0};
  double bound{0.0};
  double measured{-1.0};  // < 0: never reached within the horizon
  double allowed{0.0};    // bound + one control period
  bool stays{true};       // |S|_2 <= sqrt(2) lambda_bl from first entry on
  bool ok{false};
};

/// Double integrator on the drone circle from a random state, no obstacles,
/// a box wide enough never to bind. `disturbed` injects the worst-case
/// sinusoid at d_bar = 0.1 with a gain that passes the reaching check.
template<class Rng>
ReachingTrial reaching_trial(Rng & rng, bool disturbed)
{
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  c3smc::Scenario sc = c3smc::presets::drone_circle();
  c3smc::VehicleSetup<c3smc::DoubleIntegrator> v;
  v.params.a_max = 1e3;
  v.initial.p = c3smc::Vec2(pos(rng), pos(rng));
  v.initial.upsilon = c3smc::Vec2(vel(rng), vel(rng));
  sc.vehicle = v;
  sc.gains = {1.0, 0.01, 0.05};
  if (disturbed) {
    sc.disturbance.d_bar = 0.1;
    sc.disturbance.shape =
      c3smc::SinusoidalDisturbance{c3smc::Vec2(0.1, 0.1), c3smc::Vec2(2.0, 1.1), c3smc::Vec2(0.0, 0.3)};
  } else {
    sc.disturbance = {};
  }

  ReachingTrial out;
  const auto start = c3smc::tracking_error(
    c3smc::DoubleIntegrator::canonical(v.params, v.initial), c3smc::reference(sc.reference, 0.0));
  const c3smc::Vec2 s0 = c3smc::surface_value(sc.surface, start);
  out.s0_norm = s0.norm();
  out.bound = c3smc::reaching_time_bound(s0, sc.gains.eta);
  out.allowed = out.bound + sc.sim.control_period;
  // Past the allowance the outcome is already decided.
  sc.sim.duration = std::min(out.allowed + 2 * sc.sim.control_period, 30.0);
  const auto result = c3smc::run(sc);
  if (result.metrics.reaching_time_measured) {
    out.measured = *result.metrics.reaching_time_measured;
    for (const auto & row : result.trace.rows) {
      if (row.t >= out.measured && row.s.norm() > std::sqrt(2.0) * sc.gains.lambda_bl) {
        out.stays = false;
      }
    }
  }
  out.ok = result.metrics.gain_check.ok && out.stays &&
    (out.measured >= 0.0 ? out.measured <= out.allowed : sc.sim.duration < out.allowed);
  return out;
}

inline std::vector<double> final_state(c3smc::Scenario sc, double dt)
{
  sc.sim.dt_physics = dt;
  return c3smc::run(sc).trace.final_native;
}

inline double distance(const std::vector<double> & a, const std::vector<double> & b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

struct OrderCheck
{
  double diff_coarse{0.0};  // |x(dt) - x(dt/2)|_inf
  double diff_fine{0.0};    // |x(dt/2) - x(dt/4)|_inf
  double ratio{0.0};
};

/// The car on its circle without obstacle or disturbance, coarse physics
/// steps so the integration error is well above rounding. The double
/// integrator is useless here: RK4 integrates it exactly.
inline c3smc::Scenario order_scenario()
{
  c3smc::Scenario sc = c3smc::presets::f1tenth_circle();
  sc.obstacles.clear();
  sc.disturbance = {};
  sc.sim.control_period = 0.04;
  sc.sim.duration = 4.0;
  return sc;
}

inline OrderCheck rk4_order(const c3smc::Scenario & sc, double dt)
{
  const auto a = final_state(sc, dt);
  const auto b = final_state(sc, dt / 2);
  const auto c = final_state(sc, dt / 4);
  OrderCheck out;
  out.diff_coarse = distance(a, b);
  out.diff_fine = distance(b, c);
  out.ratio = out.diff_coarse / out.diff_fine;
  return out;
}

}  // namespace experiments

#endif  // TESTS__SUPPORT__EXPERIMENTS_HPP_
