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

// Collision-cone barrier for moving disk obstacles and the soft
// speed/steering barriers. Every barrier is turned into a linear row in the
// input u, `a . u + b >= 0` for the hard cone rows and
// `a . u + slack >= rhs` for the soft rows.

#ifndef C3SMC__CBF_HPP_
#define C3SMC__CBF_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "c3smc/models.hpp"

namespace c3smc
{

/// Linear motion with constant velocity.
struct ConstantVelocity
{
  Vec2 p0{Vec2::Zero()};
  Vec2 velocity{Vec2::Zero()};

  bool operator==(const ConstantVelocity &) const = default;
};

/// Uniform motion on a circle:
///   p(t) = center + R (cos(omega t + theta0), sin(omega t + theta0)).
struct CircularMotion
{
  Vec2 center{Vec2::Zero()};
  double path_radius{1.0};
  double omega{0.0};
  double theta0{0.0};

  bool operator==(const CircularMotion &) const = default;
};

using ObstacleMotion = std::variant<ConstantVelocity, CircularMotion>;

struct Obstacle
{
  double radius{0.1};
  ObstacleMotion motion{ConstantVelocity{}};

  bool operator==(const Obstacle &) const = default;
};

struct ObstacleState
{
  Vec2 p{Vec2::Zero()};
  Vec2 v{Vec2::Zero()};
  Vec2 a{Vec2::Zero()};
};

inline ObstacleState obstacle_state(const ConstantVelocity & cv, double t)
{
  return {cv.p0 + t * cv.velocity, cv.velocity, Vec2::Zero()};
}

inline ObstacleState obstacle_state(const CircularMotion & circ, double t)
{
  const double phase = circ.omega * t + circ.theta0;
  const Vec2 radial(std::cos(phase), std::sin(phase));
  const Vec2 tangent(-std::sin(phase), std::cos(phase));
  ObstacleState s;
  s.p = circ.center + circ.path_radius * radial;
  s.v = circ.omega * circ.path_radius * tangent;
  s.a = -circ.omega * circ.omega * circ.path_radius * radial;
  return s;
}

inline ObstacleState obstacle_state(const Obstacle & obs, double t)
{
  return std::visit([t](const auto & m) {return obstacle_state(m, t);}, obs.motion);
}

/// cos of the collision-cone half angle, sqrt(|p|^2 - r^2) / |p|.
inline double cos_half_angle(const Vec2 & p_rel, double r)
{
  const double d2 = p_rel.squaredNorm();
  if (!(d2 > r * r)) {
    throw Error(ErrorKind::kInCollision, "relative position is inside the obstacle disk");
  }
  return std::sqrt(d2 - r * r) / std::sqrt(d2);
}

namespace detail
{
inline double tangent_length(const Vec2 & p_rel, double r)
{
  const double d2 = p_rel.squaredNorm();
  if (!(d2 > r * r)) {
    throw Error(ErrorKind::kInCollision, "relative position is inside the obstacle disk");
  }
  return std::sqrt(d2 - r * r);
}
}  // namespace detail

/// h = p_rel . v_rel + |p_rel| |v_rel| cos(phi); nonnegative iff v_rel points
/// outside the collision cone.
inline double c3bf_value(const Vec2 & p_rel, const Vec2 & v_rel, double r)
{
  return p_rel.dot(v_rel) + v_rel.norm() * detail::tangent_length(p_rel, r);
}

struct C3bfGradient
{
  Vec2 d_prel{Vec2::Zero()};
  Vec2 d_vrel{Vec2::Zero()};
};

/// Analytic gradient of c3bf_value. Uses |p| cos(phi) = sqrt(|p|^2 - r^2).
/// At v_rel = 0 the v_rel/|v_rel| factor is taken as zero.
inline C3bfGradient c3bf_gradient(const Vec2 & p_rel, const Vec2 & v_rel, double r)
{
  const double tangent = detail::tangent_length(p_rel, r);
  const double speed = v_rel.norm();
  C3bfGradient g;
  g.d_prel = v_rel + (speed / tangent) * p_rel;
  g.d_vrel = p_rel;
  if (speed > 0.0) {
    g.d_vrel += (tangent / speed) * v_rel;
  }
  return g;
}

/// Constraint row a . u + b >= 0.
struct C3bfRow
{
  Vec2 a{Vec2::Zero()};
  double b{0.0};
  double h_value{0.0};
  bool degenerate{false};
};

/// Robust time-varying cone constraint for one obstacle. With
/// p_rel = p_obs - p and v_rel = v_obs - upsilon,
///   h_dot = grad_p . v_rel + grad_v . (a_obs - f - H (u + d)),
/// so a = -H^T grad_v and the disturbance term is bounded by |a|_1 d_bar.
inline C3bfRow c3bf_row(
  const CanonicalState & c, const AffineDynamics & dyn, const ObstacleState & os,
  double r_eff, double alpha_gain, double d_bar)
{
  const Vec2 p_rel = os.p - c.p;
  const Vec2 v_rel = os.v - c.upsilon;
  const auto grad = c3bf_gradient(p_rel, v_rel, r_eff);
  C3bfRow row;
  row.h_value = c3bf_value(p_rel, v_rel, r_eff);
  row.a = -dyn.h_upsilon.transpose() * grad.d_vrel;
  const double lf = -grad.d_vrel.dot(dyn.f_upsilon);
  const double lt = grad.d_vrel.dot(os.a);
  const double transport = grad.d_prel.dot(v_rel);
  row.b = transport + lf + lt + alpha_gain * row.h_value - row.a.lpNorm<1>() * d_bar;
  row.degenerate = row.a.norm() < 1e-9;
  return row;
}

enum class SoftBarrierKind
{
  kVMin,
  kVMax,
  kDelta3,
};

inline const char * to_string(SoftBarrierKind kind)
{
  switch (kind) {
    case SoftBarrierKind::kVMin:
      return "v_min";
    case SoftBarrierKind::kVMax:
      return "v_max";
    case SoftBarrierKind::kDelta3:
      return "delta3";
  }
  return "?";
}

struct SoftBarrierSpec
{
  SoftBarrierKind kind{SoftBarrierKind::kVMin};
  double alpha_gain{1.0};
  std::optional<double> margin_delta;  // empty: |L_g h|_1 d_bar

  bool operator==(const SoftBarrierSpec &) const = default;
};

struct SoftBounds
{
  double v_min{0.0};
  double v_max{kInf};
  double delta3_max{0.0};
};

/// a . u + slack >= rhs, rhs = margin - L_f h - alpha h.
struct SoftRow
{
  SoftBarrierKind kind{SoftBarrierKind::kVMin};
  Vec2 a{Vec2::Zero()};
  double rhs{0.0};
  double h_value{0.0};
  double margin{0.0};
};

/// Soft rows for speed bands (through |upsilon|^2) and the steering bound.
/// `delta3` must be set when a kDelta3 barrier is requested.
inline std::vector<SoftRow> soft_rows(
  const CanonicalState & c, const AffineDynamics & dyn, std::optional<double> delta3,
  const SoftBounds & bounds, std::span<const SoftBarrierSpec> specs, double d_bar)
{
  std::vector<SoftRow> rows;
  rows.reserve(specs.size());
  const double speed2 = c.upsilon.squaredNorm();
  const Vec2 lg_speed = 2.0 * dyn.h_upsilon.transpose() * c.upsilon;
  const double lf_speed = 2.0 * c.upsilon.dot(dyn.f_upsilon);
  for (const auto & spec : specs) {
    SoftRow row;
    row.kind = spec.kind;
    double lf = 0.0;
    switch (spec.kind) {
      case SoftBarrierKind::kVMin:
        row.h_value = speed2 - bounds.v_min * bounds.v_min;
        row.a = lg_speed;
        lf = lf_speed;
        break;
      case SoftBarrierKind::kVMax:
        row.h_value = bounds.v_max * bounds.v_max - speed2;
        row.a = -lg_speed;
        lf = -lf_speed;
        break;
      case SoftBarrierKind::kDelta3:
        if (!delta3) {
          throw Error(ErrorKind::kInvalidInput, "steering barrier needs a steering angle");
        }
        row.h_value = bounds.delta3_max * bounds.delta3_max - (*delta3) * (*delta3);
        row.a = Vec2(0.0, -2.0 * (*delta3));
        break;
    }
    row.margin = spec.margin_delta.value_or(row.a.lpNorm<1>() * d_bar);
    row.rhs = row.margin - lf - spec.alpha_gain * row.h_value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace c3smc

#endif  // C3SMC__CBF_HPP_
