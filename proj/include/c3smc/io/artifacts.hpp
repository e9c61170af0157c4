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

#ifndef C3SMC__IO__ARTIFACTS_HPP_
#define C3SMC__IO__ARTIFACTS_HPP_

#include <filesystem>
#include <string>
#include <system_error>

#include "c3smc/io/output.hpp"
#include "c3smc/io/svg.hpp"

namespace c3smc::io
{

/// Writes trace.csv and metrics.json, plus the two plots when asked.
inline void write_artifacts(
  const std::filesystem::path & dir, const Scenario & sc, const RunResult & result, bool plots)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kInvalidInput, "cannot create '" + dir.string() + "': " + ec.message());
  }
  write_text((dir / "trace.csv").string(), trace_csv(result.trace));
  write_text((dir / "metrics.json").string(), metrics_json(result.metrics).dump(2) + "\n");
  if (plots) {
    write_text((dir / "trajectory.svg").string(), trajectory_svg(sc, result.trace));
    write_text((dir / "timeseries.svg").string(), timeseries_svg(sc, result.trace));
  }
}

}  // namespace c3smc::io

#endif  // C3SMC__IO__ARTIFACTS_HPP_
