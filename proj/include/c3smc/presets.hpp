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

// Built-in case studies: an F1Tenth-scale Ackermann car on a circle, a
// TurtleBot-scale differential drive on a Lissajous curve with an obstacle
// circling through its workspace, and a planar double-integrator drone.

#ifndef C3SMC__PRESETS_HPP_
#define C3SMC__PRESETS_HPP_

#include <array>
#include <numbers>
#include <optional>
#include <string_view>

#include "c3smc/scenario.hpp"

namespace c3smc::presets
{

inline constexpr std::array<std::string_view, 3> kIds{
  "f1tenth_circle", "turtlebot_lissajous", "drone_circle"};

inline Scenario f1tenth_circle()
{
  constexpr double pi = std::numbers::pi;
  Scenario sc;
  sc.name = "f1tenth_circle";

  VehicleSetup<Ackermann> car;
  car.params = {0.17145, 0.15875, 0.25, 3.0, 0.4};
  car.initial.p = Vec2(2.3, 1.6);
  car.initial.v = 0.5;
  car.initial.delta1 = pi / 2.0;
  car.initial.delta3 = 0.0;
  sc.vehicle = car;

  sc.reference = CircleReference{Vec2(1.58, 1.78), 1.0, 0.2 * pi, 0.0};

  // Crosses the circle through its center at t = 5 s, faster than the car, so
  // the cone stops binding once it has passed.
  sc.obstacles.push_back({0.15, ConstantVelocity{Vec2(-3.42, 1.78), Vec2(1.0, 0.0)}});

  sc.disturbance.d_bar = 0.2;
  sc.disturbance.shape = SinusoidalDisturbance{Vec2(0.2, 0.2), Vec2(1.3, 0.7), Vec2(0.0, 0.5)};

  sc.surface = LinearSurface{Vec2(1.0, 1.0)};
  sc.gains = {1.0, 0.01, 0.05};
  sc.barriers.soft = default_soft_barriers(sc.vehicle);
  for (auto & spec : sc.barriers.soft) {
    spec.alpha_gain = 10.0;
  }
  sc.sim.duration = 60.0;
  return sc;
}

inline Scenario turtlebot_lissajous()
{
  constexpr double pi = std::numbers::pi;
  Scenario sc;
  sc.name = "turtlebot_lissajous";

  VehicleSetup<DiffDrive> bot;
  bot.params = {0.01, 0.2, 2.0};
  bot.initial.p = Vec2(2.2, 2.45);
  bot.initial.v = 0.1;
  bot.initial.theta = 0.0;
  sc.vehicle = bot;

  // x = 2.2 + 1.8 sin(0.23 pi t), y = 1.5 + 0.95 cos(0.15 pi t)
  sc.reference = LissajousReference{
    Vec2(2.2, 1.5), Vec2(1.8, 0.95), Vec2(0.23 * pi, 0.15 * pi), Vec2(0.0, pi / 2.0)};

  // 0.16 m/s along a 0.8 m circle about (2.5, 1.75).
  sc.obstacles.push_back({0.15, CircularMotion{Vec2(2.5, 1.75), 0.8, 0.2, -pi / 2.0}});

  sc.disturbance.d_bar = 0.1;
  sc.disturbance.shape = SinusoidalDisturbance{Vec2(0.1, 0.1), Vec2(0.9, 1.7), Vec2(0.0, 1.0)};

  sc.surface = NtsmSurface{Vec2(1.0, 1.0), 5, 3};
  sc.gains = {0.3, 0.01, 0.05};
  sc.barriers.soft = default_soft_barriers(sc.vehicle);
  sc.sim.duration = 60.0;
  return sc;
}

inline Scenario drone_circle()
{
  constexpr double pi = std::numbers::pi;
  Scenario sc;
  sc.name = "drone_circle";

  VehicleSetup<DoubleIntegrator> drone;
  drone.params = {5.0};
  drone.initial.p = Vec2(1.3, 0.3);
  drone.initial.upsilon = Vec2::Zero();
  sc.vehicle = drone;

  sc.reference = CircleReference{Vec2(0.0, 0.0), 1.0, 0.2 * pi, 0.0};

  sc.disturbance.d_bar = 0.1;
  sc.disturbance.shape = SinusoidalDisturbance{Vec2(0.1, 0.1), Vec2(2.0, 1.1), Vec2(0.0, 0.3)};

  sc.surface = LinearSurface{Vec2(1.0, 1.0)};
  sc.gains = {1.0, 0.01, 0.05};
  sc.sim.duration = 30.0;
  return sc;
}

inline std::optional<Scenario> by_id(std::string_view id)
{
  if (id == "f1tenth_circle") {
    return f1tenth_circle();
  }
  if (id == "turtlebot_lissajous") {
    return turtlebot_lissajous();
  }
  if (id == "drone_circle") {
    return drone_circle();
  }
  return std::nullopt;
}

}  // namespace c3smc::presets

#endif  // C3SMC__PRESETS_HPP_
