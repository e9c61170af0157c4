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

// trace.csv and metrics.json. Numbers are written in shortest round-trip
// form, so identical runs give byte-identical files.

#ifndef C3SMC__IO__OUTPUT_HPP_
#define C3SMC__IO__OUTPUT_HPP_

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "c3smc/sim.hpp"

namespace c3smc::io
{

/// Column names of trace.csv, in order.
inline std::vector<std::string> trace_columns(const Trace & trace)
{
  std::vector<std::string> cols{"t"};
  cols.insert(cols.end(), trace.state_names.begin(), trace.state_names.end());
  for (const char * c : {"px", "py", "upsx", "upsy", "usmc1", "usmc2", "ustar1", "ustar2",
      "d1", "d2", "S1", "S2", "e1x", "e1y"})
  {
    cols.emplace_back(c);
  }
  for (std::size_t i = 0; i < trace.obstacle_count; ++i) {
    cols.push_back(fmt::format("h_obs{}", i));
  }
  for (std::size_t i = 0; i < trace.obstacle_count; ++i) {
    cols.push_back(fmt::format("dist_obs{}", i));
  }
  for (const auto & s : trace.slack_names) {
    cols.push_back("slack_" + s);
  }
  cols.emplace_back("qp_status");
  cols.emplace_back("active_set");
  return cols;
}

namespace detail
{

inline void put(std::string & line, double v)
{
  line += ',';
  if (std::isnan(v)) {
    line += "nan";
  } else {
    fmt::format_to(std::back_inserter(line), "{}", v);
  }
}

inline void put(std::string & line, const Vec2 & v)
{
  put(line, v.x());
  put(line, v.y());
}

}  // namespace detail

inline std::string trace_row_csv(const TraceRow & row)
{
  std::string line = fmt::format("{}", row.t);
  for (double v : row.native) {
    detail::put(line, v);
  }
  detail::put(line, row.canonical.p);
  detail::put(line, row.canonical.upsilon);
  detail::put(line, row.u_smc);
  detail::put(line, row.u_star);
  detail::put(line, row.d);
  detail::put(line, row.s);
  detail::put(line, row.e1);
  for (double v : row.h_obs) {
    detail::put(line, v);
  }
  for (double v : row.dist_obs) {
    detail::put(line, v);
  }
  for (double v : row.slacks) {
    detail::put(line, v);
  }
  line += ',';
  line += to_string(row.qp_status);
  line += ',';
  // Indices into the QP row list, separated by ';'.
  for (std::size_t i = 0; i < row.active_set.size(); ++i) {
    if (i > 0) {
      line += ';';
    }
    line += std::to_string(row.active_set[i]);
  }
  return line;
}

inline std::string trace_csv(const Trace & trace)
{
  const auto cols = trace_columns(trace);
  std::string out = fmt::format("{}\n", fmt::join(cols, ","));
  for (const auto & row : trace.rows) {
    out += trace_row_csv(row);
    out += '\n';
  }
  return out;
}

inline nlohmann::json metrics_json(const Metrics & m)
{
  auto opt = [](const std::optional<double> & v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
  const GainReport & g = m.gain_check;
  return {
    {"rms_e1_post_reach", opt(m.rms_e1_post_reach)},
    {"max_e1", m.max_e1},
    {"reaching_time_measured", opt(m.reaching_time_measured)},
    {"reaching_time_bound", opt(m.reaching_time_bound)},
    {"min_h_c3bf", opt(m.min_h_c3bf)},
    {"min_clearance", opt(m.min_clearance)},
    {"qp_infeasible_count", m.qp_infeasible_count},
    {"slack_activation_count", m.slack_activation_count},
    {"degenerate_row_count", m.degenerate_row_count},
    {"steps", m.steps},
    {"safe", m.safe()},
    {"gain_check", {
      {"ok", g.ok}, {"K", g.K}, {"threshold", g.threshold}, {"sigma_lower", g.sigma_lower},
      {"sigma_upper", g.sigma_upper}, {"d_bar", g.d_bar}, {"eta", g.eta}}}};
}

inline void write_text(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    throw Error(ErrorKind::kInvalidInput, "cannot write '" + path + "'");
  }
}

}  // namespace c3smc::io

#endif  // C3SMC__IO__OUTPUT_HPP_
