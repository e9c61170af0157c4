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

// Planar vehicle kinematics and their transformation into the
// strict-feedback form
//
//   p_dot = upsilon,   upsilon_dot = f(p, upsilon) + h(p, upsilon) (u + d).
//
// Three models are provided: a kinematic bicycle (Ackermann), a unicycle
// (differential drive) and a planar double integrator. Each model is a
// stateless traits struct so the simulator can be instantiated per model.

#ifndef C3SMC__MODELS_HPP_
#define C3SMC__MODELS_HPP_

#include <Eigen/Dense>

#include <array>
#include <concepts>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "c3smc/error.hpp"

namespace c3smc
{

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Guard on |v| below which the ground-vehicle input matrix is treated as singular.
inline constexpr double kSingularSpeed = 1e-9;

namespace detail
{
inline void require_finite(double x, const char * what)
{
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + " is not finite");
  }
}
inline void require_finite(const Vec2 & x, const char * what)
{
  if (!x.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + " is not finite");
  }
}
}  // namespace detail

struct AckermannParams
{
  double l_f{0.0};         // CoM to front axle [m]
  double l_r{0.0};         // CoM to rear axle [m]
  double v_min{0.0};       // [m/s]
  double v_max{0.0};       // [m/s]
  double delta3_max{0.0};  // steering bound [rad]

  bool operator==(const AckermannParams &) const = default;
};

struct DiffDriveParams
{
  double v_min{0.0};
  double v_max{0.0};
  double omega_max{0.0};  // heading-rate bound [rad/s]

  bool operator==(const DiffDriveParams &) const = default;
};

struct DoubleIntegratorParams
{
  double a_max{0.0};  // per-axis acceleration bound [m/s^2]

  bool operator==(const DoubleIntegratorParams &) const = default;
};

inline void validate(const AckermannParams & p)
{
  if (!(p.l_f > 0.0) || !(p.l_r > 0.0)) {
    throw Error(ErrorKind::kValidation, "ackermann: l_f and l_r must be positive");
  }
  if (!(p.v_min > 0.0) || !(p.v_min < p.v_max) || !std::isfinite(p.v_max)) {
    throw Error(ErrorKind::kValidation, "ackermann: require 0 < v_min < v_max");
  }
  if (!(p.delta3_max > 0.0) || !(p.delta3_max < std::numbers::pi / 2.0)) {
    throw Error(ErrorKind::kValidation, "ackermann: require 0 < delta3_max < pi/2");
  }
}

inline void validate(const DiffDriveParams & p)
{
  if (!(p.v_min > 0.0) || !(p.v_min < p.v_max) || !std::isfinite(p.v_max)) {
    throw Error(ErrorKind::kValidation, "diff_drive: require 0 < v_min < v_max");
  }
  if (!(p.omega_max > 0.0)) {
    throw Error(ErrorKind::kValidation, "diff_drive: omega_max must be positive");
  }
}

inline void validate(const DoubleIntegratorParams & p)
{
  if (!(p.a_max > 0.0)) {
    throw Error(ErrorKind::kValidation, "double_integrator: a_max must be positive");
  }
}

// Angles are stored unwrapped.
struct AckermannState
{
  Vec2 p{Vec2::Zero()};
  double v{0.0};
  double delta1{0.0};  // heading
  double delta3{0.0};  // steering angle

  bool operator==(const AckermannState &) const = default;
};

struct DiffDriveState
{
  Vec2 p{Vec2::Zero()};
  double v{0.0};
  double theta{0.0};

  bool operator==(const DiffDriveState &) const = default;
};

struct DoubleIntegratorState
{
  Vec2 p{Vec2::Zero()};
  Vec2 upsilon{Vec2::Zero()};

  bool operator==(const DoubleIntegratorState &) const = default;
};

struct CanonicalState
{
  Vec2 p{Vec2::Zero()};
  Vec2 upsilon{Vec2::Zero()};

  bool operator==(const CanonicalState &) const = default;
};

/// Drift and input matrix of the canonical form, evaluated at one state.
struct AffineDynamics
{
  Vec2 f_upsilon{Vec2::Zero()};
  Mat2 h_upsilon{Mat2::Identity()};
};

struct SingularValues
{
  double min{0.0};
  double max{0.0};
};

struct SigmaBounds
{
  double lower{0.0};
  double upper{0.0};
};

/// kappa = l_r / (l_r + l_f), the curvature factor at zero steering.
inline double curvature_ratio(const AckermannParams & params)
{
  return params.l_r / (params.l_r + params.l_f);
}

inline double slip_angle(double delta3, const AckermannParams & params)
{
  detail::require_finite(delta3, "steering angle");
  if (std::abs(delta3) >= std::numbers::pi / 2.0) {
    throw Error(ErrorKind::kDomain, "slip angle requires |delta3| < pi/2");
  }
  return std::atan(curvature_ratio(params) * std::tan(delta3));
}

/// d(slip angle)/d(delta3). Even in delta3, equal to kappa at zero and
/// strictly increasing in |delta3|.
inline double curvature_factor(double delta3, const AckermannParams & params)
{
  detail::require_finite(delta3, "steering angle");
  if (std::abs(delta3) >= std::numbers::pi / 2.0) {
    throw Error(ErrorKind::kDomain, "curvature factor requires |delta3| < pi/2");
  }
  const double kappa = curvature_ratio(params);
  const double t = std::tan(delta3);
  const double sec2 = 1.0 + t * t;
  return kappa * sec2 / (1.0 + kappa * kappa * t * t);
}

/// Exact singular values of a 2x2 matrix, sorted ascending.
inline SingularValues singular_values(const Mat2 & h)
{
  const Mat2 g = h.transpose() * h;
  const double half_trace = 0.5 * (g(0, 0) + g(1, 1));
  const double half_diff = 0.5 * (g(0, 0) - g(1, 1));
  const double disc = std::hypot(half_diff, g(0, 1));
  const double sigma_max = std::sqrt(half_trace + disc);
  if (sigma_max == 0.0) {
    return {0.0, 0.0};
  }
  // |det h| = sigma_min * sigma_max avoids cancellation in the small root.
  const double sigma_min = std::abs(h.determinant()) / sigma_max;
  return {sigma_min, sigma_max};
}

inline SigmaBounds sigma_bounds(const AckermannParams & params)
{
  const double kappa = curvature_ratio(params);
  return {
    std::min(1.0, kappa * params.v_min),
    std::max(1.0, curvature_factor(params.delta3_max, params) * params.v_max)};
}

inline SigmaBounds sigma_bounds(const DiffDriveParams & params)
{
  return {std::min(1.0, params.v_min), std::max(1.0, params.v_max)};
}

inline SigmaBounds sigma_bounds(const DoubleIntegratorParams &)
{
  return {1.0, 1.0};
}

/// Input box implied by the vehicle itself. Infinite entries mean unbounded.
struct InputBox
{
  double u1_max{kInf};
  double u2_max{kInf};

  bool operator==(const InputBox &) const = default;
};

// ---------------------------------------------------------------------------
// Model traits. Native state vectors are packed as:
//   Ackermann:        [x, y, v, delta1, delta3]
//   DiffDrive:        [x, y, v, theta]
//   DoubleIntegrator: [x, y, vx, vy]

struct Ackermann
{
  using Params = AckermannParams;
  using State = AckermannState;
  static constexpr int kDim = 5;
  using Vector = Eigen::Matrix<double, kDim, 1>;
  static constexpr const char * kName = "ackermann";
  static constexpr std::array<const char *, kDim> kStateNames{"x", "y", "v", "delta1", "delta3"};

  static Vector pack(const State & s)
  {
    Vector x;
    x << s.p.x(), s.p.y(), s.v, s.delta1, s.delta3;
    return x;
  }

  static State unpack(const Vector & x)
  {
    return {Vec2(x(0), x(1)), x(2), x(3), x(4)};
  }

  static CanonicalState canonical(const Params & params, const State & s)
  {
    detail::require_finite(s.p, "position");
    detail::require_finite(s.v, "speed");
    detail::require_finite(s.delta1, "heading");
    const double psi = s.delta1 + slip_angle(s.delta3, params);
    return {s.p, s.v * Vec2(std::cos(psi), std::sin(psi))};
  }

  static AffineDynamics affine(const Params & params, const State & s)
  {
    if (!(std::abs(s.v) >= kSingularSpeed)) {
      throw Error(ErrorKind::kSingularity, "ackermann input matrix is singular at v = 0");
    }
    const double delta2 = slip_angle(s.delta3, params);
    const double psi = s.delta1 + delta2;
    const double c = std::cos(psi);
    const double sn = std::sin(psi);
    const double kv = curvature_factor(s.delta3, params) * s.v;
    AffineDynamics dyn;
    dyn.f_upsilon = (s.v * s.v / params.l_r) * std::sin(delta2) * Vec2(-sn, c);
    dyn.h_upsilon << c, -kv * sn,
      sn, kv * c;
    return dyn;
  }

  static Vector derivative(const Params & params, const State & s, const Vec2 & u, const Vec2 & d)
  {
    const double delta2 = slip_angle(s.delta3, params);
    const double psi = s.delta1 + delta2;
    Vector dx;
    dx << s.v * std::cos(psi), s.v * std::sin(psi), u(0) + d(0),
      s.v / params.l_r * std::sin(delta2), u(1) + d(1);
    return dx;
  }

  static InputBox input_box(const Params &) {return {};}
};

struct DiffDrive
{
  using Params = DiffDriveParams;
  using State = DiffDriveState;
  static constexpr int kDim = 4;
  using Vector = Eigen::Matrix<double, kDim, 1>;
  static constexpr const char * kName = "diff_drive";
  static constexpr std::array<const char *, kDim> kStateNames{"x", "y", "v", "theta"};

  static Vector pack(const State & s)
  {
    Vector x;
    x << s.p.x(), s.p.y(), s.v, s.theta;
    return x;
  }

  static State unpack(const Vector & x)
  {
    return {Vec2(x(0), x(1)), x(2), x(3)};
  }

  static CanonicalState canonical(const Params &, const State & s)
  {
    detail::require_finite(s.p, "position");
    detail::require_finite(s.v, "speed");
    detail::require_finite(s.theta, "heading");
    return {s.p, s.v * Vec2(std::cos(s.theta), std::sin(s.theta))};
  }

  static AffineDynamics affine(const Params &, const State & s)
  {
    if (!(std::abs(s.v) >= kSingularSpeed)) {
      throw Error(ErrorKind::kSingularity, "diff-drive input matrix is singular at v = 0");
    }
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    AffineDynamics dyn;
    dyn.f_upsilon = Vec2::Zero();
    dyn.h_upsilon << c, -s.v * sn,
      sn, s.v * c;
    return dyn;
  }

  // u = (linear acceleration, angular velocity)
  static Vector derivative(const Params &, const State & s, const Vec2 & u, const Vec2 & d)
  {
    Vector dx;
    dx << s.v * std::cos(s.theta), s.v * std::sin(s.theta), u(0) + d(0), u(1) + d(1);
    return dx;
  }

  static InputBox input_box(const Params & params) {return {kInf, params.omega_max};}
};

struct DoubleIntegrator
{
  using Params = DoubleIntegratorParams;
  using State = DoubleIntegratorState;
  static constexpr int kDim = 4;
  using Vector = Eigen::Matrix<double, kDim, 1>;
  static constexpr const char * kName = "double_integrator";
  static constexpr std::array<const char *, kDim> kStateNames{"x", "y", "vx", "vy"};

  static Vector pack(const State & s)
  {
    Vector x;
    x << s.p.x(), s.p.y(), s.upsilon.x(), s.upsilon.y();
    return x;
  }

  static State unpack(const Vector & x)
  {
    return {Vec2(x(0), x(1)), Vec2(x(2), x(3))};
  }

  static CanonicalState canonical(const Params &, const State & s)
  {
    detail::require_finite(s.p, "position");
    detail::require_finite(s.upsilon, "velocity");
    return {s.p, s.upsilon};
  }

  static AffineDynamics affine(const Params &, const State &) {return {};}

  static Vector derivative(const Params &, const State & s, const Vec2 & u, const Vec2 & d)
  {
    Vector dx;
    dx << s.upsilon, u + d;
    return dx;
  }

  static InputBox input_box(const Params & params) {return {params.a_max, params.a_max};}
};

template<class M>
concept VehicleModel = requires(
  const typename M::Params & params, const typename M::State & s, const Vec2 & u)
{
  {M::kDim} -> std::convertible_to<int>;
  {M::canonical(params, s)} -> std::same_as<CanonicalState>;
  {M::affine(params, s)} -> std::same_as<AffineDynamics>;
  {M::derivative(params, s, u, u)} -> std::same_as<typename M::Vector>;
  {M::pack(s)} -> std::same_as<typename M::Vector>;
  {M::input_box(params)} -> std::same_as<InputBox>;
};

// Free-function spellings used by callers that hold a concrete state.

inline CanonicalState to_canonical(const AckermannState & s, const AckermannParams & params)
{
  return Ackermann::canonical(params, s);
}
inline CanonicalState to_canonical(const DiffDriveState & s, const DiffDriveParams & params = {})
{
  return DiffDrive::canonical(params, s);
}
inline CanonicalState to_canonical(const DoubleIntegratorState & s)
{
  return DoubleIntegrator::canonical({}, s);
}

inline AffineDynamics affine_terms(const AckermannState & s, const AckermannParams & params)
{
  return Ackermann::affine(params, s);
}
inline AffineDynamics affine_terms(const DiffDriveState & s, const DiffDriveParams & params = {})
{
  return DiffDrive::affine(params, s);
}
inline AffineDynamics affine_terms(const DoubleIntegratorState & s)
{
  return DoubleIntegrator::affine({}, s);
}

inline Ackermann::Vector state_derivative(
  const AckermannState & s, const AckermannParams & params, const Vec2 & u, const Vec2 & d)
{
  return Ackermann::derivative(params, s, u, d);
}
inline DiffDrive::Vector state_derivative(const DiffDriveState & s, const Vec2 & u, const Vec2 & d)
{
  return DiffDrive::derivative({}, s, u, d);
}
inline DoubleIntegrator::Vector state_derivative(
  const DoubleIntegratorState & s, const Vec2 & u, const Vec2 & d)
{
  return DoubleIntegrator::derivative({}, s, u, d);
}

/// Planar rotation R(psi).
inline Mat2 rotation(double psi)
{
  Mat2 r;
  r << std::cos(psi), -std::sin(psi),
    std::sin(psi), std::cos(psi);
  return r;
}

}  // namespace c3smc

#endif  // C3SMC__MODELS_HPP_
