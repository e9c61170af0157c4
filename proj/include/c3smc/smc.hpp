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

#ifndef C3SMC__SMC_HPP_
#define C3SMC__SMC_HPP_

#include <cmath>
#include <variant>

#include "c3smc/models.hpp"

namespace c3smc
{

struct ReferenceSample
{
  Vec2 p{Vec2::Zero()};
  Vec2 pdot{Vec2::Zero()};
  Vec2 pddot{Vec2::Zero()};

  bool operator==(const ReferenceSample &) const = default;
};

/// e1 = p_ref - p, e2 = pdot_ref - upsilon.
struct TrackingError
{
  Vec2 e1{Vec2::Zero()};
  Vec2 e2{Vec2::Zero()};
};

/// S = diag(lambda) e1 + e2
struct LinearSurface
{
  Vec2 lambda{1.0, 1.0};

  bool operator==(const LinearSurface &) const = default;
};

/// Nonsingular terminal surface S = e1 + diag(1/beta) |e2|^(p/q) sgn(e2),
/// with p, q odd and 1 < p/q < 2.
struct NtsmSurface
{
  Vec2 beta{1.0, 1.0};
  int p_exp{5};
  int q_exp{3};

  bool operator==(const NtsmSurface &) const = default;
};

using SlidingSurface = std::variant<LinearSurface, NtsmSurface>;

struct SmcGains
{
  double K{1.0};
  double eta{0.01};
  double lambda_bl{0.05};

  bool operator==(const SmcGains &) const = default;
};

inline void validate(const SlidingSurface & surface)
{
  if (const auto * lin = std::get_if<LinearSurface>(&surface)) {
    if (!(lin->lambda.array() > 0.0).all() || !lin->lambda.allFinite()) {
      throw Error(ErrorKind::kValidation, "linear surface gains must be positive");
    }
    return;
  }
  const auto & ntsm = std::get<NtsmSurface>(surface);
  if (!(ntsm.beta.array() > 0.0).all() || !ntsm.beta.allFinite()) {
    throw Error(ErrorKind::kValidation, "ntsm beta must be positive");
  }
  const int p = ntsm.p_exp;
  const int q = ntsm.q_exp;
  if (p <= 0 || q <= 0 || p % 2 == 0 || q % 2 == 0 || !(q < p && p < 2 * q)) {
    throw Error(ErrorKind::kValidation, "ntsm exponents must be odd with 1 < p/q < 2");
  }
}

inline void validate(const SmcGains & gains)
{
  if (!(gains.K > 0.0) || !(gains.eta > 0.0) || !(gains.lambda_bl > 0.0)) {
    throw Error(ErrorKind::kValidation, "K, eta and lambda_bl must be positive");
  }
}

namespace detail
{
/// sgn(x) |x|^a, componentwise.
inline Vec2 signed_power(const Vec2 & x, double a)
{
  Vec2 y;
  for (int i = 0; i < 2; ++i) {
    const double m = std::pow(std::abs(x(i)), a);
    y(i) = x(i) > 0.0 ? m : (x(i) < 0.0 ? -m : 0.0);
  }
  return y;
}
}  // namespace detail

inline TrackingError tracking_error(const CanonicalState & c, const ReferenceSample & r)
{
  return {r.p - c.p, r.pdot - c.upsilon};
}

inline Vec2 surface_value(const SlidingSurface & surface, const TrackingError & err)
{
  if (const auto * lin = std::get_if<LinearSurface>(&surface)) {
    return lin->lambda.cwiseProduct(err.e1) + err.e2;
  }
  const auto & ntsm = std::get<NtsmSurface>(surface);
  const double ratio = static_cast<double>(ntsm.p_exp) / ntsm.q_exp;
  return err.e1 + detail::signed_power(err.e2, ratio).cwiseQuotient(ntsm.beta);
}

/// Term added inside h^-1(.) that cancels the surface's dependence on e1 along
/// the error dynamics. Finite at e2 = 0 for the terminal surface since
/// 2 - p/q > 0.
inline Vec2 equivalent_correction(const SlidingSurface & surface, const TrackingError & err)
{
  if (const auto * lin = std::get_if<LinearSurface>(&surface)) {
    return lin->lambda.cwiseProduct(err.e2);
  }
  const auto & ntsm = std::get<NtsmSurface>(surface);
  const double p = ntsm.p_exp;
  const double q = ntsm.q_exp;
  return (q / p) * ntsm.beta.cwiseProduct(detail::signed_power(err.e2, 2.0 - p / q));
}

/// Componentwise clamp to [-1, 1].
inline Vec2 saturate(const Vec2 & x)
{
  return x.cwiseMax(-1.0).cwiseMin(1.0);
}

/// Inverse of the canonical input matrix; throws when it is numerically singular.
inline Mat2 invert_input_matrix(const Mat2 & h)
{
  const auto sv = singular_values(h);
  if (!(sv.min > 1e-9)) {
    throw Error(ErrorKind::kSingularity, "input matrix has sigma_min <= 1e-9");
  }
  const double det = h.determinant();
  Mat2 inv;
  inv << h(1, 1), -h(0, 1),
    -h(1, 0), h(0, 0);
  return inv / det;
}

/// Practical sliding-mode law
///   u = h^-1 (pddot_ref - f + correction + K sat(S / lambda_bl)).
inline Vec2 smc_control(
  const AffineDynamics & dyn, const ReferenceSample & ref, const TrackingError & err,
  const SlidingSurface & surface, const SmcGains & gains)
{
  const Vec2 s = surface_value(surface, err);
  const Vec2 v = ref.pddot - dyn.f_upsilon + equivalent_correction(surface, err) +
    gains.K * saturate(s / gains.lambda_bl);
  return invert_input_matrix(dyn.h_upsilon) * v;
}

struct GainReport
{
  bool ok{false};
  double K{0.0};
  double threshold{0.0};  // sqrt(2) sigma_upper d_bar + eta
  double sigma_lower{0.0};
  double sigma_upper{0.0};
  double d_bar{0.0};
  double eta{0.0};
};

/// Sufficient reaching condition K > sqrt(2) sigma_max(h) d_bar + eta, using
/// ||A||_inf <= sqrt(2) sigma_max(A) for 2x2 matrices.
inline GainReport validate_gain(double K, SigmaBounds sigma, double d_bar, double eta)
{
  GainReport report;
  report.K = K;
  report.sigma_lower = sigma.lower;
  report.sigma_upper = sigma.upper;
  report.d_bar = d_bar;
  report.eta = eta;
  report.threshold = std::sqrt(2.0) * sigma.upper * d_bar + eta;
  report.ok = K > report.threshold;
  return report;
}

template<class Params>
GainReport validate_gain(double K, const Params & params, double d_bar, double eta)
{
  return validate_gain(K, sigma_bounds(params), d_bar, eta);
}

/// Upper bound ||S(0)|| / eta on the time to reach the sliding manifold.
inline double reaching_time_bound(const Vec2 & s0, double eta)
{
  if (!(eta > 0.0)) {
    throw Error(ErrorKind::kDomain, "reaching time bound requires eta > 0");
  }
  return s0.norm() / eta;
}

}  // namespace c3smc

#endif  // C3SMC__SMC_HPP_
