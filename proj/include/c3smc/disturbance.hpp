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

#ifndef C3SMC__DISTURBANCE_HPP_
#define C3SMC__DISTURBANCE_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>

#include "c3smc/models.hpp"

namespace c3smc
{

struct NoDisturbance
{
  bool operator==(const NoDisturbance &) const = default;
};

/// d_i(t) = amp_i sin(freq_i t + phase_i), freq in rad/s.
struct SinusoidalDisturbance
{
  Vec2 amp{Vec2::Zero()};
  Vec2 freq{Vec2::Ones()};
  Vec2 phase{Vec2::Zero()};

  bool operator==(const SinusoidalDisturbance &) const = default;
};

/// Each component uniform on [-d_bar, d_bar], redrawn once per control period
/// from a generator seeded with the scenario seed.
struct UniformRandomDisturbance
{
  bool operator==(const UniformRandomDisturbance &) const = default;
};

using DisturbanceShape =
  std::variant<NoDisturbance, SinusoidalDisturbance, UniformRandomDisturbance>;

/// `d_bar` is also the design bound used by the controller and the barriers.
struct DisturbanceSpec
{
  double d_bar{0.0};
  DisturbanceShape shape{NoDisturbance{}};

  bool operator==(const DisturbanceSpec &) const = default;
};

inline void validate(const DisturbanceSpec & spec)
{
  if (!(spec.d_bar >= 0.0) || !std::isfinite(spec.d_bar)) {
    throw Error(ErrorKind::kValidation, "disturbance d_bar must be finite and >= 0");
  }
  if (const auto * s = std::get_if<SinusoidalDisturbance>(&spec.shape)) {
    if (!s->amp.allFinite() || !s->freq.allFinite() || !s->phase.allFinite()) {
      throw Error(ErrorKind::kValidation, "sinusoidal disturbance terms must be finite");
    }
    if (s->amp.lpNorm<Eigen::Infinity>() > spec.d_bar) {
      throw Error(ErrorKind::kValidation, "sinusoidal amplitude exceeds d_bar");
    }
  }
}

/// Stateful disturbance source for one run.
class DisturbanceGenerator
{
public:
  DisturbanceGenerator(DisturbanceSpec spec, std::uint64_t seed)
  : spec_(std::move(spec)), rng_(seed)
  {
  }

  /// Called at the start of every control period.
  void begin_period()
  {
    if (std::holds_alternative<UniformRandomDisturbance>(spec_.shape)) {
      held_ = Vec2(draw(), draw());
    }
  }

  Vec2 at(double t) const
  {
    Vec2 d = Vec2::Zero();
    if (const auto * s = std::get_if<SinusoidalDisturbance>(&spec_.shape)) {
      for (int i = 0; i < 2; ++i) {
        d(i) = s->amp(i) * std::sin(s->freq(i) * t + s->phase(i));
      }
    } else if (std::holds_alternative<UniformRandomDisturbance>(spec_.shape)) {
      d = held_;
    }
    if (d.lpNorm<Eigen::Infinity>() > spec_.d_bar) {
      throw std::logic_error("applied disturbance exceeds d_bar");
    }
    return d;
  }

  const DisturbanceSpec & spec() const {return spec_;}

private:
  // Uniform on [-d_bar, d_bar] from the raw 64-bit stream, so the sequence is
  // fixed by the seed alone.
  double draw()
  {
    const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return spec_.d_bar * (2.0 * unit - 1.0);
  }

  DisturbanceSpec spec_;
  std::mt19937_64 rng_;
  Vec2 held_{Vec2::Zero()};
};

}  // namespace c3smc

#endif  // C3SMC__DISTURBANCE_HPP_
