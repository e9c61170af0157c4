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

#ifndef C3SMC__SCENARIO_HPP_
#define C3SMC__SCENARIO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "c3smc/cbf.hpp"
#include "c3smc/disturbance.hpp"
#include "c3smc/models.hpp"
#include "c3smc/reference.hpp"
#include "c3smc/smc.hpp"

namespace c3smc
{

template<VehicleModel M>
struct VehicleSetup
{
  using Model = M;
  typename M::Params params;
  typename M::State initial;

  bool operator==(const VehicleSetup &) const = default;
};

using VehicleConfig = std::variant<
  VehicleSetup<Ackermann>, VehicleSetup<DiffDrive>, VehicleSetup<DoubleIntegrator>>;

struct BarrierConfig
{
  double alpha_c3bf{1.0};  // linear class-K gain of the cone rows
  double rho{1e3};         // slack penalty
  double ego_radius{0.2};  // added to each obstacle radius
  std::vector<SoftBarrierSpec> soft;

  bool operator==(const BarrierConfig &) const = default;
};

struct SimConfig
{
  double dt_physics{1e-3};
  double control_period{1e-2};
  double duration{0.0};
  std::uint64_t seed{0};

  bool operator==(const SimConfig &) const = default;
};

struct Scenario
{
  std::string name;
  VehicleConfig vehicle{VehicleSetup<DoubleIntegrator>{}};
  ReferenceSpec reference{CircleReference{}};
  std::vector<Obstacle> obstacles;
  DisturbanceSpec disturbance;
  SlidingSurface surface{LinearSurface{}};
  SmcGains gains;
  InputBox input_limits;  // intersected with the vehicle's own box
  BarrierConfig barriers;
  SimConfig sim;

  bool operator==(const Scenario &) const = default;
};

/// Soft barriers a vehicle supports, in row order.
inline std::vector<SoftBarrierKind> supported_soft_barriers(const VehicleConfig & v)
{
  switch (v.index()) {
    case 0:
      return {SoftBarrierKind::kVMin, SoftBarrierKind::kVMax, SoftBarrierKind::kDelta3};
    case 1:
      return {SoftBarrierKind::kVMin, SoftBarrierKind::kVMax};
    default:
      return {};
  }
}

inline std::vector<SoftBarrierSpec> default_soft_barriers(const VehicleConfig & v)
{
  std::vector<SoftBarrierSpec> specs;
  for (auto kind : supported_soft_barriers(v)) {
    specs.push_back({kind, 1.0, std::nullopt});
  }
  return specs;
}

inline SoftBounds soft_bounds(const VehicleConfig & v)
{
  if (const auto * a = std::get_if<VehicleSetup<Ackermann>>(&v)) {
    return {a->params.v_min, a->params.v_max, a->params.delta3_max};
  }
  if (const auto * d = std::get_if<VehicleSetup<DiffDrive>>(&v)) {
    return {d->params.v_min, d->params.v_max, 0.0};
  }
  return {};
}

inline const char * vehicle_kind(const VehicleConfig & v)
{
  return std::visit([](const auto & s) {return std::decay_t<decltype(s)>::Model::kName;}, v);
}

inline double circular_speed(const CircularMotion & c)
{
  return std::abs(c.omega) * c.path_radius;
}

/// Reaching-gain check for the scenario's vehicle, gains and d_bar.
inline GainReport check_gains(const Scenario & sc)
{
  return std::visit(
    [&sc](const auto & v) {
      return validate_gain(sc.gains.K, v.params, sc.disturbance.d_bar, sc.gains.eta);
    },
    sc.vehicle);
}

inline void validate(const Obstacle & obs)
{
  if (!(obs.radius > 0.0) || !std::isfinite(obs.radius)) {
    throw Error(ErrorKind::kValidation, "obstacle radius must be positive");
  }
  if (const auto * cv = std::get_if<ConstantVelocity>(&obs.motion)) {
    if (!cv->p0.allFinite() || !cv->velocity.allFinite()) {
      throw Error(ErrorKind::kValidation, "obstacle motion terms must be finite");
    }
  } else {
    const auto & c = std::get<CircularMotion>(obs.motion);
    if (!(c.path_radius > 0.0) || !std::isfinite(c.omega) || !c.center.allFinite() ||
      !std::isfinite(c.theta0))
    {
      throw Error(ErrorKind::kValidation, "circular obstacle needs path_radius > 0");
    }
  }
}

inline void validate(const Scenario & sc)
{
  std::visit(
    [](const auto & v) {
      validate(v.params);
      const auto c = std::decay_t<decltype(v)>::Model::canonical(v.params, v.initial);
      (void)c;
    },
    sc.vehicle);
  validate(sc.reference);
  for (const auto & obs : sc.obstacles) {
    validate(obs);
  }
  validate(sc.disturbance);
  validate(sc.surface);
  validate(sc.gains);
  if (!(sc.input_limits.u1_max > 0.0) || !(sc.input_limits.u2_max > 0.0)) {
    throw Error(ErrorKind::kValidation, "input limits must be positive");
  }
  const auto & b = sc.barriers;
  if (!(b.alpha_c3bf > 0.0) || !(b.rho > 0.0) || !(b.ego_radius >= 0.0)) {
    throw Error(ErrorKind::kValidation, "barriers need alpha > 0, rho > 0, ego_radius >= 0");
  }
  const auto allowed = supported_soft_barriers(sc.vehicle);
  for (std::size_t i = 0; i < b.soft.size(); ++i) {
    const auto & spec = b.soft[i];
    if (std::find(allowed.begin(), allowed.end(), spec.kind) == allowed.end()) {
      throw Error(
        ErrorKind::kValidation,
        std::string("soft barrier '") + to_string(spec.kind) + "' is not available for " +
        vehicle_kind(sc.vehicle));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (b.soft[j].kind == spec.kind) {
        throw Error(ErrorKind::kValidation, "duplicate soft barrier");
      }
    }
    if (!(spec.alpha_gain > 0.0) || (spec.margin_delta && !(*spec.margin_delta >= 0.0))) {
      throw Error(ErrorKind::kValidation, "soft barrier needs alpha > 0 and margin >= 0");
    }
  }
  const auto & s = sc.sim;
  if (!(s.dt_physics > 0.0) || !(s.control_period >= s.dt_physics) || !(s.duration >= 0.0) ||
    !std::isfinite(s.duration))
  {
    throw Error(
      ErrorKind::kValidation, "sim needs dt_physics > 0, control_period >= dt_physics, duration >= 0");
  }
  const double ratio = s.control_period / s.dt_physics;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw Error(ErrorKind::kValidation, "control_period must be an integer multiple of dt_physics");
  }
}

}  // namespace c3smc

#endif  // C3SMC__SCENARIO_HPP_
