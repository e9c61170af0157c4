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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "c3smc/reference.hpp"
#include "c3smc/smc.hpp"
#include "support/oracles.hpp"

namespace
{

using c3smc::AffineDynamics;
using c3smc::LinearSurface;
using c3smc::NtsmSurface;
using c3smc::ReferenceSample;
using c3smc::TrackingError;
using c3smc::Vec2;

constexpr double kPi = std::numbers::pi;

TEST(TrackingError, Examples)
{
  const auto a = c3smc::tracking_error({Vec2::Zero(), Vec2::Zero()},
      ReferenceSample{Vec2(1, 1), Vec2::Zero(), Vec2::Zero()});
  EXPECT_EQ(a.e1, Vec2(1, 1));
  EXPECT_EQ(a.e2, Vec2::Zero());

  const auto b = c3smc::tracking_error({Vec2(0.3, 0.4), Vec2(1, 2)},
      ReferenceSample{Vec2(0.3, 0.4), Vec2(1, 2), Vec2::Zero()});
  EXPECT_EQ(b.e1, Vec2::Zero());
  EXPECT_EQ(b.e2, Vec2::Zero());

  // Circle of radius 1 about (1.58, 1.78) at 0.2 pi rad/s, sampled at t = 0.
  const auto ref = c3smc::reference(
    c3smc::CircleReference{Vec2(1.58, 1.78), 1.0, 0.2 * kPi, 0.0}, 0.0);
  const auto c = c3smc::tracking_error({Vec2(1.58, 1.78), Vec2::Zero()}, ref);
  EXPECT_NEAR(c.e1.x(), 1.0, 1e-15);
  EXPECT_NEAR(c.e1.y(), 0.0, 1e-15);
  EXPECT_NEAR(c.e2.x(), 0.0, 1e-15);
  EXPECT_NEAR(c.e2.y(), 0.2 * kPi, 1e-15);
  EXPECT_NEAR(c.e2.y(), 0.62832, 5e-6);
}

TEST(SurfaceValue, Examples)
{
  EXPECT_EQ(c3smc::surface_value(LinearSurface{Vec2(1, 1)}, {Vec2(1, 2), Vec2(3, 4)}), Vec2(4, 6));
  const NtsmSurface ntsm{Vec2(1, 1), 5, 3};
  EXPECT_EQ(c3smc::surface_value(ntsm, {Vec2(1, 0), Vec2(1, -1)}), Vec2(2, -1));
  EXPECT_EQ(c3smc::surface_value(ntsm, {Vec2::Zero(), Vec2::Zero()}), Vec2::Zero());
  EXPECT_EQ(
    c3smc::surface_value(LinearSurface{Vec2(2, 3)}, {Vec2::Zero(), Vec2::Zero()}), Vec2::Zero());
}

TEST(SurfaceValue, NtsmSignedPower)
{
  const NtsmSurface ntsm{Vec2(2, 0.5), 7, 5};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const TrackingError e{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    const Vec2 s = c3smc::surface_value(ntsm, e);
    for (int k = 0; k < 2; ++k) {
      const long double want = e.e1(k) + std::pow(std::fabs(e.e2(k)), 1.4L) *
        (e.e2(k) < 0 ? -1 : 1) / ntsm.beta(k);
      EXPECT_NEAR(s(k), static_cast<double>(want), 1e-12 * (1 + std::fabs(static_cast<double>(want))));
    }
  }
}

TEST(EquivalentCorrection, Examples)
{
  EXPECT_EQ(
    c3smc::equivalent_correction(LinearSurface{Vec2(2, 3)}, {Vec2::Zero(), Vec2(1, 1)}),
    Vec2(2, 3));
  const NtsmSurface ntsm{Vec2(1, 1), 5, 3};
  EXPECT_EQ(c3smc::equivalent_correction(ntsm, {Vec2::Zero(), Vec2::Zero()}), Vec2::Zero());
  const Vec2 c = c3smc::equivalent_correction(ntsm, {Vec2::Zero(), Vec2(1, 0)});
  EXPECT_NEAR(c.x(), 0.6, 1e-15);
  EXPECT_EQ(c.y(), 0.0);
}

// Along e2-dot = -correction the surface derivative has no e1-driven part:
// d/dt [e1 + |e2|^(p/q) sgn(e2) / beta] = e2 - (p/(q beta)) |e2|^(p/q-1) * correction = 0.
TEST(EquivalentCorrection, CancelsSurfaceDrift)
{
  for (auto [p, q] : {std::pair{5, 3}, std::pair{7, 5}, std::pair{9, 7}}) {
    const NtsmSurface ntsm{Vec2(1.5, 0.7), p, q};
    std::mt19937_64 rng(static_cast<unsigned>(p));
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 500; ++i) {
      const TrackingError e{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
      const Vec2 corr = c3smc::equivalent_correction(ntsm, e);
      const double h = 1e-6;
      // Numerical derivative of S along (e1', e2') = (e2, -corr).
      const TrackingError fwd{e.e1 + h * e.e2, e.e2 - h * corr};
      const TrackingError bwd{e.e1 - h * e.e2, e.e2 + h * corr};
      const Vec2 sdot = (c3smc::surface_value(ntsm, fwd) - c3smc::surface_value(ntsm, bwd)) /
        (2 * h);
      EXPECT_NEAR(sdot.lpNorm<Eigen::Infinity>(), 0.0, 1e-6);
    }
  }
}

TEST(EquivalentCorrection, NtsmContinuousAtZero)
{
  for (auto [p, q] : {std::pair{5, 3}, std::pair{7, 5}, std::pair{3, 2}}) {
    const NtsmSurface ntsm{Vec2(1, 1), p, q};
    double prev = 1.0;
    for (double e = 1e-1; e > 1e-14; e *= 0.1) {
      const Vec2 c = c3smc::equivalent_correction(ntsm, {Vec2::Zero(), Vec2(e, -e)});
      ASSERT_TRUE(c.allFinite());
      EXPECT_LT(c.lpNorm<Eigen::Infinity>(), prev);
      prev = c.lpNorm<Eigen::Infinity>();
    }
    EXPECT_LT(prev, 1e-4);
  }
}

TEST(SmcControl, DoubleIntegratorExamples)
{
  const AffineDynamics di;
  const c3smc::SmcGains g{1.0, 0.01, 0.5};
  const LinearSurface lin{Vec2(1, 1)};
  const ReferenceSample still{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};

  EXPECT_EQ(c3smc::smc_control(di, still, {Vec2::Zero(), Vec2::Zero()}, lin, g), Vec2::Zero());

  const Vec2 u = c3smc::smc_control(di, still, {Vec2::Zero(), Vec2(0.1, 0)}, lin, g);
  EXPECT_NEAR(u.x(), 0.1 + 0.2, 1e-15);
  EXPECT_EQ(u.y(), 0.0);

  // S = e1 = (5, 0) is far outside the layer: switching term is K sgn(S).
  const Vec2 sat = c3smc::smc_control(di, still, {Vec2(5, 0), Vec2::Zero()}, lin, g);
  EXPECT_EQ(sat, Vec2(1, 0));
}

TEST(SmcControl, InvertsInputMatrix)
{
  // For any nonsingular h the closed loop is e2-dot = -(correction + K sat) exactly.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  const c3smc::SmcGains g{0.8, 0.01, 0.05};
  const LinearSurface lin{Vec2(1.2, 0.7)};
  for (int i = 0; i < 1000; ++i) {
    AffineDynamics dyn;
    dyn.f_upsilon = Vec2(u(rng), u(rng));
    dyn.h_upsilon = c3smc::rotation(u(rng)) * Vec2(1.0, 0.1 + std::abs(u(rng))).asDiagonal();
    const ReferenceSample ref{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    const TrackingError e{Vec2(u(rng), u(rng)) * 0.05, Vec2(u(rng), u(rng)) * 0.05};
    const Vec2 uu = c3smc::smc_control(dyn, ref, e, lin, g);
    const Vec2 e2dot = ref.pddot - (dyn.f_upsilon + dyn.h_upsilon * uu);
    const Vec2 s = c3smc::surface_value(lin, e);
    const Vec2 want = -(lin.lambda.cwiseProduct(e.e2) +
      g.K * (s / g.lambda_bl).cwiseMax(-1.0).cwiseMin(1.0));
    EXPECT_NEAR((e2dot - want).lpNorm<Eigen::Infinity>(), 0.0, 1e-12);
  }
}

TEST(SmcControl, SingularInputMatrix)
{
  AffineDynamics dyn;
  dyn.h_upsilon << 1, 0, 0, 1e-12;
  const ReferenceSample still{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  try {
    c3smc::smc_control(dyn, still, {Vec2::Zero(), Vec2::Zero()}, LinearSurface{}, {});
    FAIL();
  } catch (const c3smc::Error & e) {
    EXPECT_EQ(e.kind(), c3smc::ErrorKind::kSingularity);
  }
}

// Local Lipschitz continuity of the linear-surface law: difference quotients
// stay bounded by the analytic constant as the probe shrinks.
TEST(SmcControl, LipschitzProbes)
{
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  const c3smc::SmcGains g{1.0, 0.01, 0.05};
  const LinearSurface lin{Vec2(1, 1)};
  AffineDynamics dyn;
  dyn.h_upsilon = c3smc::rotation(0.3) * Vec2(1.0, 0.5).asDiagonal();
  const ReferenceSample ref{Vec2::Zero(), Vec2::Zero(), Vec2(0.1, -0.2)};
  // |h^-1| <= 2, slope of K sat(S/lambda) <= K/lambda = 20 per S unit, S moves
  // by at most 2 per unit of (e1, e2) in the inf-norm, plus Lambda e2.
  const double bound = 2.0 * (20.0 * 2.0 + 1.0) * 2.0;
  for (int i = 0; i < 2000; ++i) {
    const TrackingError e{Vec2(u(rng), u(rng)) * 0.1, Vec2(u(rng), u(rng)) * 0.1};
    const Vec2 u0 = c3smc::smc_control(dyn, ref, e, lin, g);
    for (double eps : {1e-3, 1e-6, 1e-9}) {
      const TrackingError ep{e.e1 + Vec2(eps, -eps), e.e2 + Vec2(-eps, eps)};
      const Vec2 u1 = c3smc::smc_control(dyn, ref, ep, lin, g);
      EXPECT_LE((u1 - u0).lpNorm<Eigen::Infinity>() / eps, bound);
    }
  }
}

TEST(SmcControl, NtsmContinuity)
{
  const c3smc::SmcGains g{0.3, 0.01, 0.05};
  const NtsmSurface ntsm{Vec2(1, 1), 5, 3};
  const AffineDynamics dyn;
  const ReferenceSample ref{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 2000; ++i) {
    TrackingError e{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    if (i % 4 == 0) {
      e.e2 = Vec2::Zero();
    }
    const Vec2 u0 = c3smc::smc_control(dyn, ref, e, ntsm, g);
    const TrackingError ep{e.e1, e.e2 + Vec2(1e-12, -1e-12)};
    // Holder-1/3 at e2 = 0: a 1e-12 change moves u by at most ~1e-4.
    EXPECT_LT((c3smc::smc_control(dyn, ref, ep, ntsm, g) - u0).lpNorm<Eigen::Infinity>(), 1e-3);
  }
}

TEST(ValidateGain, Examples)
{
  const c3smc::AckermannParams car{oracle::kLf, oracle::kLr, 0.25, 3.0, 0.4};
  const double upper = static_cast<double>(3.0L * oracle::slip_rate(0.4L));
  const double rhs = std::sqrt(2.0) * upper * 0.2 + 0.01;

  const auto a = c3smc::validate_gain(1.0, car, 0.2, 0.01);
  EXPECT_TRUE(a.ok);
  EXPECT_NEAR(a.threshold, rhs, 1e-10);
  EXPECT_NEAR(a.threshold, 0.47179, 5e-6);
  EXPECT_NEAR(a.threshold - a.eta, 0.46179, 5e-6);

  const auto b = c3smc::validate_gain(0.3, c3smc::DiffDriveParams{0.01, 0.2, 2.0}, 0.1, 0.01);
  EXPECT_TRUE(b.ok);
  EXPECT_NEAR(b.threshold, std::sqrt(2.0) * 0.1 + 0.01, 1e-15);
  EXPECT_NEAR(b.threshold, 0.15142, 5e-6);

  const auto c = c3smc::validate_gain(0.1, car, 0.2, 0.01);
  EXPECT_FALSE(c.ok);
  EXPECT_NEAR(c.threshold, rhs, 1e-10);
}

TEST(ReachingTimeBound, Examples)
{
  EXPECT_EQ(c3smc::reaching_time_bound(Vec2(3, 4), 1.0), 5.0);
  EXPECT_EQ(c3smc::reaching_time_bound(Vec2::Zero(), 0.3), 0.0);
  EXPECT_NEAR(c3smc::reaching_time_bound(Vec2(0.1, 0), 0.05), 2.0, 1e-15);
  try {
    c3smc::reaching_time_bound(Vec2(1, 0), 0.0);
    FAIL();
  } catch (const c3smc::Error & e) {
    EXPECT_EQ(e.kind(), c3smc::ErrorKind::kDomain);
  }
}

TEST(SurfaceSpec, Validation)
{
  EXPECT_NO_THROW(c3smc::validate(c3smc::SlidingSurface{NtsmSurface{Vec2(1, 1), 5, 3}}));
  EXPECT_THROW(c3smc::validate(c3smc::SlidingSurface{NtsmSurface{Vec2(1, 1), 4, 3}}), c3smc::Error);
  EXPECT_THROW(c3smc::validate(c3smc::SlidingSurface{NtsmSurface{Vec2(1, 1), 7, 3}}), c3smc::Error);
  EXPECT_THROW(c3smc::validate(c3smc::SlidingSurface{NtsmSurface{Vec2(1, 1), 3, 3}}), c3smc::Error);
  EXPECT_THROW(c3smc::validate(c3smc::SlidingSurface{LinearSurface{Vec2(1, 0)}}), c3smc::Error);
  EXPECT_THROW(c3smc::validate(c3smc::SmcGains{1.0, 0.0, 0.05}), c3smc::Error);
  EXPECT_THROW(c3smc::validate(c3smc::SmcGains{1.0, 0.01, -1.0}), c3smc::Error);
}

}  // namespace
