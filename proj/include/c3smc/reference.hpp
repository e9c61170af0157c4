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

// C2 reference trajectories with analytic first and second derivatives.

#ifndef C3SMC__REFERENCE_HPP_
#define C3SMC__REFERENCE_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "c3smc/smc.hpp"

namespace c3smc
{

/// center + radius (cos(omega t + phase), sin(omega t + phase))
struct CircleReference
{
  Vec2 center{Vec2::Zero()};
  double radius{1.0};
  double omega{1.0};
  double phase{0.0};

  bool operator==(const CircleReference &) const = default;
};

/// Per axis: center_i + amp_i sin(omega_i t + phase_i). A cosine term is a
/// sine with phase pi/2.
struct LissajousReference
{
  Vec2 center{Vec2::Zero()};
  Vec2 amp{Vec2::Ones()};
  Vec2 omega{Vec2::Ones()};
  Vec2 phase{Vec2::Zero()};

  bool operator==(const LissajousReference &) const = default;
};

/// Clamped cubic spline through timed waypoints. Before the first time the
/// first waypoint is held, after the last time the last one is held.
struct SplineReference
{
  std::vector<double> times;
  std::vector<Vec2> points;
  Vec2 start_velocity{Vec2::Zero()};
  Vec2 end_velocity{Vec2::Zero()};

  bool operator==(const SplineReference &) const = default;
};

using ReferenceSpec = std::variant<CircleReference, LissajousReference, SplineReference>;

inline void validate(const ReferenceSpec & spec)
{
  if (const auto * c = std::get_if<CircleReference>(&spec)) {
    if (!(c->radius > 0.0) || !std::isfinite(c->omega) || !c->center.allFinite()) {
      throw Error(ErrorKind::kValidation, "circle reference needs radius > 0 and finite terms");
    }
    return;
  }
  if (const auto * l = std::get_if<LissajousReference>(&spec)) {
    if (!l->amp.allFinite() || !l->omega.allFinite() || !l->center.allFinite() ||
      !l->phase.allFinite())
    {
      throw Error(ErrorKind::kValidation, "lissajous reference terms must be finite");
    }
    return;
  }
  const auto & s = std::get<SplineReference>(spec);
  if (s.times.size() < 2 || s.times.size() != s.points.size()) {
    throw Error(ErrorKind::kValidation, "spline needs >= 2 waypoints with matching times");
  }
  for (std::size_t i = 1; i < s.times.size(); ++i) {
    if (!(s.times[i] > s.times[i - 1])) {
      throw Error(ErrorKind::kValidation, "spline times must be strictly increasing");
    }
  }
}

namespace detail
{

/// Second derivatives at the knots of a clamped cubic spline, one axis.
inline Eigen::VectorXd clamped_spline_moments(
  const std::vector<double> & t, const Eigen::VectorXd & y, double v0, double vn)
{
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  const double h0 = t[1] - t[0];
  a(0, 0) = 2.0 * h0;
  a(0, 1) = h0;
  rhs(0) = 6.0 * ((y(1) - y(0)) / h0 - v0);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double hl = t[i] - t[i - 1];
    const double hr = t[i + 1] - t[i];
    a(i, i - 1) = hl;
    a(i, i) = 2.0 * (hl + hr);
    a(i, i + 1) = hr;
    rhs(i) = 6.0 * ((y(i + 1) - y(i)) / hr - (y(i) - y(i - 1)) / hl);
  }
  const double hn = t[n - 1] - t[n - 2];
  a(n - 1, n - 2) = hn;
  a(n - 1, n - 1) = 2.0 * hn;
  rhs(n - 1) = 6.0 * (vn - (y(n - 1) - y(n - 2)) / hn);
  return a.partialPivLu().solve(rhs);
}

inline ReferenceSample sample_spline(const SplineReference & s, double t)
{
  ReferenceSample out;
  if (t <= s.times.front()) {
    out.p = s.points.front();
    return out;
  }
  if (t >= s.times.back()) {
    out.p = s.points.back();
    return out;
  }
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  const auto i = static_cast<std::size_t>(std::distance(s.times.begin(), it)) - 1;
  const auto n = static_cast<Eigen::Index>(s.points.size());
  for (int axis = 0; axis < 2; ++axis) {
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      y(k) = s.points[static_cast<std::size_t>(k)](axis);
    }
    const Eigen::VectorXd m = clamped_spline_moments(
      s.times, y, s.start_velocity(axis), s.end_velocity(axis));
    const double t0 = s.times[i];
    const double t1 = s.times[i + 1];
    const double h = t1 - t0;
    const double a = t1 - t;
    const double b = t - t0;
    const auto ii = static_cast<Eigen::Index>(i);
    const double c0 = y(ii) / h - m(ii) * h / 6.0;
    const double c1 = y(ii + 1) / h - m(ii + 1) * h / 6.0;
    out.p(axis) = m(ii) * a * a * a / (6.0 * h) + m(ii + 1) * b * b * b / (6.0 * h) +
      c0 * a + c1 * b;
    out.pdot(axis) = -m(ii) * a * a / (2.0 * h) + m(ii + 1) * b * b / (2.0 * h) - c0 + c1;
    out.pddot(axis) = (m(ii) * a + m(ii + 1) * b) / h;
  }
  return out;
}

}  // namespace detail

inline ReferenceSample reference(const ReferenceSpec & spec, double t)
{
  if (const auto * c = std::get_if<CircleReference>(&spec)) {
    const double th = c->omega * t + c->phase;
    const Vec2 radial(std::cos(th), std::sin(th));
    const Vec2 tangent(-std::sin(th), std::cos(th));
    return {
      c->center + c->radius * radial,
      c->radius * c->omega * tangent,
      -c->radius * c->omega * c->omega * radial};
  }
  if (const auto * l = std::get_if<LissajousReference>(&spec)) {
    ReferenceSample r;
    for (int i = 0; i < 2; ++i) {
      const double th = l->omega(i) * t + l->phase(i);
      r.p(i) = l->center(i) + l->amp(i) * std::sin(th);
      r.pdot(i) = l->amp(i) * l->omega(i) * std::cos(th);
      r.pddot(i) = -l->amp(i) * l->omega(i) * l->omega(i) * std::sin(th);
    }
    return r;
  }
  return detail::sample_spline(std::get<SplineReference>(spec), t);
}

}  // namespace c3smc

#endif  // C3SMC__REFERENCE_HPP_
