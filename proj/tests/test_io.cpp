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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "c3smc/io/artifacts.hpp"
#include "c3smc/io/output.hpp"
#include "c3smc/io/scenario_json.hpp"
#include "c3smc/presets.hpp"

namespace
{

using c3smc::io::Json;

std::string validation_message(const std::string & text)
{
  try {
    c3smc::io::parse_scenario(text);
  } catch (const c3smc::Error & e) {
    return e.what();
  }
  return "";
}

Json drone_doc()
{
  return c3smc::io::scenario_to_json(c3smc::presets::drone_circle());
}

TEST(ScenarioJson, PresetsRoundTrip)
{
  for (auto id : c3smc::presets::kIds) {
    const auto sc = *c3smc::presets::by_id(id);
    const std::string text = c3smc::io::write_scenario(sc);
    const auto back = c3smc::io::parse_scenario(text);
    EXPECT_EQ(back, sc) << id;
    EXPECT_EQ(c3smc::io::write_scenario(back), text) << id;
  }
}

TEST(ScenarioJson, PresetValues)
{
  const Json j = c3smc::io::scenario_to_json(c3smc::presets::f1tenth_circle());
  EXPECT_EQ(j["vehicle"]["type"], "ackermann");
  EXPECT_EQ(j["vehicle"]["l_f"], 0.17145);
  EXPECT_EQ(j["vehicle"]["l_r"], 0.15875);
  EXPECT_EQ(j["controller"]["K"], 1.0);
  const Json t = c3smc::io::scenario_to_json(c3smc::presets::turtlebot_lissajous());
  EXPECT_EQ(t["controller"]["surface"]["type"], "ntsm");
  EXPECT_EQ(t["controller"]["surface"]["p"], 5);
  EXPECT_EQ(t["controller"]["surface"]["q"], 3);
  EXPECT_EQ(t["controller"]["K"], 0.3);
  EXPECT_EQ(t["obstacles"][0]["motion"]["type"], "circular");
}

TEST(ScenarioJson, OptionalFieldsTakeDefaults)
{
  const Json j = {
    {"vehicle", {{"type", "double_integrator"}, {"a_max", 2.0},
      {"initial", {{"p", {0.0, 0.0}}, {"upsilon", {0.0, 0.0}}}}}},
    {"reference", {{"type", "circle"}, {"center", {0.0, 0.0}}, {"radius", 1.0}, {"omega", 1.0}}},
    {"controller", {{"surface", {{"type", "linear"}, {"lambda", {1.0, 1.0}}}}, {"K", 1.0}}},
    {"sim", {{"duration", 2.0}}}};
  const auto sc = c3smc::io::scenario_from_json(j);
  EXPECT_EQ(sc.sim.dt_physics, 1e-3);
  EXPECT_EQ(sc.sim.control_period, 1e-2);
  EXPECT_EQ(sc.barriers.rho, 1e3);
  EXPECT_TRUE(sc.obstacles.empty());
  EXPECT_EQ(sc.disturbance.d_bar, 0.0);
}

TEST(ScenarioJson, MissingDurationNamesTheField)
{
  Json j = drone_doc();
  j["sim"].erase("duration");
  const auto msg = validation_message(j.dump());
  EXPECT_NE(msg.find("sim.duration"), std::string::npos) << msg;
}

TEST(ScenarioJson, UnknownKeyIsRejected)
{
  Json j = drone_doc();
  j["controller"]["gain"] = 2.0;
  const auto msg = validation_message(j.dump());
  EXPECT_NE(msg.find("controller.gain"), std::string::npos) << msg;
}

TEST(ScenarioJson, InconsistentCircularSpeedIsRejected)
{
  Json j = c3smc::io::scenario_to_json(c3smc::presets::turtlebot_lissajous());
  j["obstacles"][0]["motion"]["speed"] = 0.5;  // |omega| R = 0.16
  const auto msg = validation_message(j.dump());
  EXPECT_NE(msg.find("obstacles[0].motion.speed"), std::string::npos) << msg;
  j["obstacles"][0]["motion"]["speed"] = 0.16;
  EXPECT_EQ(validation_message(j.dump()), "");
}

TEST(ScenarioJson, SemanticErrorsSurface)
{
  Json j = drone_doc();
  j["disturbance"]["amp"] = {0.5, 0.0};
  EXPECT_NE(validation_message(j.dump()).find("d_bar"), std::string::npos);
  Json k = drone_doc();
  k["vehicle"]["type"] = "hovercraft";
  EXPECT_NE(validation_message(k.dump()).find("vehicle.type"), std::string::npos);
}

TEST(ScenarioJson, SyntaxErrorsReportPosition)
{
  const auto msg = validation_message("{\n  \"sim\": [1,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ScenarioJson, UnreadableFile)
{
  try {
    c3smc::io::load_scenario("/nonexistent/scenario.json");
    FAIL();
  } catch (const c3smc::Error & e) {
    EXPECT_EQ(e.kind(), c3smc::ErrorKind::kInvalidInput);
  }
}

TEST(TraceCsv, HeaderForEachVehicle)
{
  const auto f1 = c3smc::run([] {
        auto sc = c3smc::presets::f1tenth_circle();
        sc.sim.duration = 0.02;
        return sc;
      }());
  EXPECT_EQ(
    c3smc::io::trace_csv(f1.trace).substr(0, c3smc::io::trace_csv(f1.trace).find('\n')),
    "t,x,y,v,delta1,delta3,px,py,upsx,upsy,usmc1,usmc2,ustar1,ustar2,d1,d2,S1,S2,e1x,e1y,"
    "h_obs0,dist_obs0,slack_v_min,slack_v_max,slack_delta3,qp_status,active_set");
  const auto dr = c3smc::run([] {
        auto sc = c3smc::presets::drone_circle();
        sc.sim.duration = 0.0;
        return sc;
      }());
  EXPECT_EQ(
    c3smc::io::trace_csv(dr.trace),
    "t,x,y,vx,vy,px,py,upsx,upsy,usmc1,usmc2,ustar1,ustar2,d1,d2,S1,S2,e1x,e1y,"
    "qp_status,active_set\n");
}

TEST(TraceCsv, RowsRoundTripNumbers)
{
  auto sc = c3smc::presets::turtlebot_lissajous();
  sc.sim.duration = 0.5;
  const auto r = c3smc::run(sc);
  const std::string csv = c3smc::io::trace_csv(r.trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const auto ncols = std::count(line.begin(), line.end(), ',') + 1;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ASSERT_EQ(std::count(line.begin(), line.end(), ',') + 1, ncols);
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    EXPECT_EQ(std::stod(cell), r.trace.rows[k].t);
    std::getline(cells, cell, ',');
    EXPECT_EQ(std::stod(cell), r.trace.rows[k].native[0]);
    ++k;
  }
  EXPECT_EQ(k, r.trace.rows.size());
}

TEST(MetricsJson, NullsForMissingValues)
{
  c3smc::Metrics m;
  const auto j = c3smc::io::metrics_json(m);
  EXPECT_TRUE(j["rms_e1_post_reach"].is_null());
  EXPECT_TRUE(j["min_h_c3bf"].is_null());
  EXPECT_EQ(j["safe"], true);
  EXPECT_EQ(j["qp_infeasible_count"], 0);
}

TEST(Artifacts, WritesAllFiles)
{
  auto sc = c3smc::presets::turtlebot_lissajous();
  sc.sim.duration = 1.0;
  const auto r = c3smc::run(sc);
  const auto dir = std::filesystem::temp_directory_path() / "c3smc_test_artifacts";
  std::filesystem::remove_all(dir);
  c3smc::io::write_artifacts(dir.string(), sc, r, true);
  for (const char * f : {"trace.csv", "metrics.json", "trajectory.svg", "timeseries.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream svg(dir / "trajectory.svg");
  std::string first;
  std::getline(svg, first);
  EXPECT_NE(first.find("<svg"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
