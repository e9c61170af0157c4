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

// Scenario files. The schema is strict: unknown keys are rejected and every
// error names the offending field path, e.g. `obstacles[0].motion.omega`.

#ifndef C3SMC__IO__SCENARIO_JSON_HPP_
#define C3SMC__IO__SCENARIO_JSON_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "c3smc/scenario.hpp"

namespace c3smc::io
{

using Json = nlohmann::json;

namespace detail
{

[[noreturn]] inline void fail(const std::string & path, const std::string & msg)
{
  throw Error(ErrorKind::kValidation, (path.empty() ? std::string("<root>") : path) + ": " + msg);
}

/// A JSON value together with its path from the document root.
class Node
{
public:
  Node(const Json & j, std::string path)
  : j_(&j), path_(std::move(path)) {}

  const std::string & path() const {return path_;}

  void expect_object(std::initializer_list<std::string_view> allowed) const
  {
    if (!j_->is_object()) {
      fail(path_, "expected an object");
    }
    for (const auto & [key, value] : j_->items()) {
      (void)value;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(child(key), "unknown key");
      }
    }
  }

  bool has(std::string_view key) const {return j_->contains(key);}

  bool is_string() const {return j_->is_string();}

  Node at(std::string_view key) const
  {
    const auto it = j_->find(key);
    if (it == j_->end()) {
      fail(child(key), "missing required field");
    }
    return Node(*it, child(key));
  }

  std::optional<Node> find(std::string_view key) const
  {
    const auto it = j_->find(key);
    if (it == j_->end()) {
      return std::nullopt;
    }
    return Node(*it, child(key));
  }

  double number() const
  {
    if (!j_->is_number()) {
      fail(path_, "expected a number");
    }
    return j_->get<double>();
  }

  int integer() const
  {
    if (!j_->is_number_integer()) {
      fail(path_, "expected an integer");
    }
    return j_->get<int>();
  }

  std::uint64_t unsigned_integer() const
  {
    if (j_->is_number_unsigned()) {
      return j_->get<std::uint64_t>();
    }
    fail(path_, "expected a non-negative integer");
  }

  std::string string() const
  {
    if (!j_->is_string()) {
      fail(path_, "expected a string");
    }
    return j_->get<std::string>();
  }

  Vec2 vec2() const
  {
    if (!j_->is_array() || j_->size() != 2) {
      fail(path_, "expected an array of two numbers");
    }
    return Vec2(element(0).number(), element(1).number());
  }

  std::size_t size() const
  {
    if (!j_->is_array()) {
      fail(path_, "expected an array");
    }
    return j_->size();
  }

  Node element(std::size_t i) const
  {
    return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]");
  }

  double number_or(std::string_view key, double fallback) const
  {
    const auto n = find(key);
    return n ? n->number() : fallback;
  }

  Vec2 vec2_or(std::string_view key, const Vec2 & fallback) const
  {
    const auto n = find(key);
    return n ? n->vec2() : fallback;
  }

private:
  std::string child(std::string_view key) const
  {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json * j_;
  std::string path_;
};

inline Json vec2_json(const Vec2 & v) {return Json::array({v.x(), v.y()});}

// --- vehicle ---------------------------------------------------------------

inline VehicleConfig read_vehicle(const Node & n)
{
  const std::string type = n.at("type").string();
  if (type == Ackermann::kName) {
    n.expect_object({"type", "l_f", "l_r", "v_min", "v_max", "delta3_max", "initial"});
    VehicleSetup<Ackermann> s;
    s.params = {
      n.at("l_f").number(), n.at("l_r").number(), n.at("v_min").number(),
      n.at("v_max").number(), n.at("delta3_max").number()};
    const Node init = n.at("initial");
    init.expect_object({"p", "v", "delta1", "delta3"});
    s.initial.p = init.at("p").vec2();
    s.initial.v = init.at("v").number();
    s.initial.delta1 = init.at("delta1").number();
    s.initial.delta3 = init.at("delta3").number();
    return s;
  }
  if (type == DiffDrive::kName) {
    n.expect_object({"type", "v_min", "v_max", "omega_max", "initial"});
    VehicleSetup<DiffDrive> s;
    s.params = {n.at("v_min").number(), n.at("v_max").number(), n.at("omega_max").number()};
    const Node init = n.at("initial");
    init.expect_object({"p", "v", "theta"});
    s.initial.p = init.at("p").vec2();
    s.initial.v = init.at("v").number();
    s.initial.theta = init.at("theta").number();
    return s;
  }
  if (type == DoubleIntegrator::kName) {
    n.expect_object({"type", "a_max", "initial"});
    VehicleSetup<DoubleIntegrator> s;
    s.params = {n.at("a_max").number()};
    const Node init = n.at("initial");
    init.expect_object({"p", "upsilon"});
    s.initial.p = init.at("p").vec2();
    s.initial.upsilon = init.at("upsilon").vec2();
    return s;
  }
  fail(n.path() + ".type", "unknown vehicle type '" + type + "'");
}

inline Json write_vehicle(const VehicleConfig & v)
{
  if (const auto * a = std::get_if<VehicleSetup<Ackermann>>(&v)) {
    return {
      {"type", Ackermann::kName}, {"l_f", a->params.l_f}, {"l_r", a->params.l_r},
      {"v_min", a->params.v_min}, {"v_max", a->params.v_max},
      {"delta3_max", a->params.delta3_max},
      {"initial", {{"p", vec2_json(a->initial.p)}, {"v", a->initial.v},
        {"delta1", a->initial.delta1}, {"delta3", a->initial.delta3}}}};
  }
  if (const auto * d = std::get_if<VehicleSetup<DiffDrive>>(&v)) {
    return {
      {"type", DiffDrive::kName}, {"v_min", d->params.v_min}, {"v_max", d->params.v_max},
      {"omega_max", d->params.omega_max},
      {"initial", {{"p", vec2_json(d->initial.p)}, {"v", d->initial.v},
        {"theta", d->initial.theta}}}};
  }
  const auto & di = std::get<VehicleSetup<DoubleIntegrator>>(v);
  return {
    {"type", DoubleIntegrator::kName}, {"a_max", di.params.a_max},
    {"initial", {{"p", vec2_json(di.initial.p)}, {"upsilon", vec2_json(di.initial.upsilon)}}}};
}

// --- reference -------------------------------------------------------------

inline ReferenceSpec read_reference(const Node & n)
{
  const std::string type = n.at("type").string();
  if (type == "circle") {
    n.expect_object({"type", "center", "radius", "omega", "phase"});
    return CircleReference{
      n.at("center").vec2(), n.at("radius").number(), n.at("omega").number(),
      n.number_or("phase", 0.0)};
  }
  if (type == "lissajous") {
    n.expect_object({"type", "center", "amp", "omega", "phase"});
    return LissajousReference{
      n.at("center").vec2(), n.at("amp").vec2(), n.at("omega").vec2(),
      n.vec2_or("phase", Vec2::Zero())};
  }
  if (type == "spline") {
    n.expect_object({"type", "times", "points", "start_velocity", "end_velocity"});
    SplineReference s;
    const Node times = n.at("times");
    for (std::size_t i = 0; i < times.size(); ++i) {
      s.times.push_back(times.element(i).number());
    }
    const Node points = n.at("points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      s.points.push_back(points.element(i).vec2());
    }
    s.start_velocity = n.vec2_or("start_velocity", Vec2::Zero());
    s.end_velocity = n.vec2_or("end_velocity", Vec2::Zero());
    return s;
  }
  fail(n.path() + ".type", "unknown reference type '" + type + "'");
}

inline Json write_reference(const ReferenceSpec & r)
{
  if (const auto * c = std::get_if<CircleReference>(&r)) {
    return {{"type", "circle"}, {"center", vec2_json(c->center)}, {"radius", c->radius},
      {"omega", c->omega}, {"phase", c->phase}};
  }
  if (const auto * l = std::get_if<LissajousReference>(&r)) {
    return {{"type", "lissajous"}, {"center", vec2_json(l->center)}, {"amp", vec2_json(l->amp)},
      {"omega", vec2_json(l->omega)}, {"phase", vec2_json(l->phase)}};
  }
  const auto & s = std::get<SplineReference>(r);
  Json points = Json::array();
  for (const auto & p : s.points) {
    points.push_back(vec2_json(p));
  }
  return {{"type", "spline"}, {"times", s.times}, {"points", points},
    {"start_velocity", vec2_json(s.start_velocity)}, {"end_velocity", vec2_json(s.end_velocity)}};
}

// --- obstacles -------------------------------------------------------------

inline Obstacle read_obstacle(const Node & n)
{
  n.expect_object({"radius", "motion"});
  Obstacle obs;
  obs.radius = n.at("radius").number();
  const Node m = n.at("motion");
  const std::string type = m.at("type").string();
  if (type == "constant_velocity") {
    m.expect_object({"type", "p0", "velocity"});
    obs.motion = ConstantVelocity{m.at("p0").vec2(), m.at("velocity").vec2()};
  } else if (type == "circular") {
    m.expect_object({"type", "center", "path_radius", "omega", "theta0", "speed"});
    CircularMotion c{
      m.at("center").vec2(), m.at("path_radius").number(), m.at("omega").number(),
      m.number_or("theta0", 0.0)};
    if (const auto speed = m.find("speed")) {
      const double given = speed->number();
      const double implied = circular_speed(c);
      if (std::abs(given - implied) > 1e-9 * std::max(1.0, std::abs(given))) {
        std::ostringstream msg;
        msg << "speed " << given << " is inconsistent with |omega| * path_radius = " << implied;
        fail(speed->path(), msg.str());
      }
    }
    obs.motion = c;
  } else {
    fail(m.path() + ".type", "unknown motion type '" + type + "'");
  }
  return obs;
}

inline Json write_obstacle(const Obstacle & obs)
{
  Json motion;
  if (const auto * cv = std::get_if<ConstantVelocity>(&obs.motion)) {
    motion = {{"type", "constant_velocity"}, {"p0", vec2_json(cv->p0)},
      {"velocity", vec2_json(cv->velocity)}};
  } else {
    const auto & c = std::get<CircularMotion>(obs.motion);
    motion = {{"type", "circular"}, {"center", vec2_json(c.center)},
      {"path_radius", c.path_radius}, {"omega", c.omega}, {"theta0", c.theta0},
      {"speed", circular_speed(c)}};
  }
  return {{"radius", obs.radius}, {"motion", motion}};
}

// --- disturbance -----------------------------------------------------------

inline DisturbanceSpec read_disturbance(const Node & n)
{
  DisturbanceSpec d;
  const std::string type = n.at("type").string();
  if (type == "none") {
    n.expect_object({"type", "d_bar"});
    d.d_bar = n.number_or("d_bar", 0.0);
    d.shape = NoDisturbance{};
  } else if (type == "sinusoidal") {
    n.expect_object({"type", "d_bar", "amp", "freq", "phase"});
    d.d_bar = n.at("d_bar").number();
    d.shape = SinusoidalDisturbance{
      n.at("amp").vec2(), n.at("freq").vec2(), n.vec2_or("phase", Vec2::Zero())};
  } else if (type == "uniform_random") {
    n.expect_object({"type", "d_bar"});
    d.d_bar = n.at("d_bar").number();
    d.shape = UniformRandomDisturbance{};
  } else {
    fail(n.path() + ".type", "unknown disturbance type '" + type + "'");
  }
  return d;
}

inline Json write_disturbance(const DisturbanceSpec & d)
{
  if (const auto * s = std::get_if<SinusoidalDisturbance>(&d.shape)) {
    return {{"type", "sinusoidal"}, {"d_bar", d.d_bar}, {"amp", vec2_json(s->amp)},
      {"freq", vec2_json(s->freq)}, {"phase", vec2_json(s->phase)}};
  }
  if (std::holds_alternative<UniformRandomDisturbance>(d.shape)) {
    return {{"type", "uniform_random"}, {"d_bar", d.d_bar}};
  }
  return {{"type", "none"}, {"d_bar", d.d_bar}};
}

// --- controller ------------------------------------------------------------

inline void read_controller(const Node & n, Scenario & sc)
{
  n.expect_object({"surface", "K", "eta", "lambda_bl", "input_limits"});
  const Node s = n.at("surface");
  const std::string type = s.at("type").string();
  if (type == "linear") {
    s.expect_object({"type", "lambda"});
    sc.surface = LinearSurface{s.at("lambda").vec2()};
  } else if (type == "ntsm") {
    s.expect_object({"type", "beta", "p", "q"});
    NtsmSurface ntsm;
    ntsm.beta = s.at("beta").vec2();
    ntsm.p_exp = s.at("p").integer();
    ntsm.q_exp = s.at("q").integer();
    sc.surface = ntsm;
  } else {
    fail(s.path() + ".type", "unknown surface type '" + type + "'");
  }
  const SmcGains defaults;
  sc.gains.K = n.at("K").number();
  sc.gains.eta = n.number_or("eta", defaults.eta);
  sc.gains.lambda_bl = n.number_or("lambda_bl", defaults.lambda_bl);
  if (const auto lim = n.find("input_limits")) {
    lim->expect_object({"u1_max", "u2_max"});
    sc.input_limits.u1_max = lim->number_or("u1_max", kInf);
    sc.input_limits.u2_max = lim->number_or("u2_max", kInf);
  }
}

inline Json write_controller(const Scenario & sc)
{
  Json surface;
  if (const auto * l = std::get_if<LinearSurface>(&sc.surface)) {
    surface = {{"type", "linear"}, {"lambda", vec2_json(l->lambda)}};
  } else {
    const auto & n = std::get<NtsmSurface>(sc.surface);
    surface = {{"type", "ntsm"}, {"beta", vec2_json(n.beta)}, {"p", n.p_exp}, {"q", n.q_exp}};
  }
  Json out = {{"surface", surface}, {"K", sc.gains.K}, {"eta", sc.gains.eta},
    {"lambda_bl", sc.gains.lambda_bl}};
  Json limits = Json::object();
  if (std::isfinite(sc.input_limits.u1_max)) {
    limits["u1_max"] = sc.input_limits.u1_max;
  }
  if (std::isfinite(sc.input_limits.u2_max)) {
    limits["u2_max"] = sc.input_limits.u2_max;
  }
  if (!limits.empty()) {
    out["input_limits"] = limits;
  }
  return out;
}

// --- barriers --------------------------------------------------------------

inline SoftBarrierKind read_soft_kind(const Node & n)
{
  const std::string s = n.string();
  for (auto kind : {SoftBarrierKind::kVMin, SoftBarrierKind::kVMax, SoftBarrierKind::kDelta3}) {
    if (s == to_string(kind)) {
      return kind;
    }
  }
  fail(n.path(), "unknown soft barrier '" + s + "'");
}

inline void read_barriers(const std::optional<Node> & n, Scenario & sc)
{
  sc.barriers = BarrierConfig{};
  sc.barriers.soft = default_soft_barriers(sc.vehicle);
  if (!n) {
    return;
  }
  n->expect_object({"alpha_c3bf", "rho", "ego_radius", "soft"});
  sc.barriers.alpha_c3bf = n->number_or("alpha_c3bf", sc.barriers.alpha_c3bf);
  sc.barriers.rho = n->number_or("rho", sc.barriers.rho);
  sc.barriers.ego_radius = n->number_or("ego_radius", sc.barriers.ego_radius);
  if (const auto soft = n->find("soft")) {
    sc.barriers.soft.clear();
    for (std::size_t i = 0; i < soft->size(); ++i) {
      const Node e = soft->element(i);
      e.expect_object({"kind", "alpha", "margin"});
      SoftBarrierSpec spec;
      spec.kind = read_soft_kind(e.at("kind"));
      spec.alpha_gain = e.number_or("alpha", 1.0);
      if (const auto margin = e.find("margin")) {
        // "auto" keeps the disturbance-derived margin.
        if (!margin->is_string()) {
          spec.margin_delta = margin->number();
        } else if (margin->string() != "auto") {
          fail(margin->path(), "expected a number or \"auto\"");
        }
      }
      sc.barriers.soft.push_back(spec);
    }
  }
}

inline Json write_barriers(const BarrierConfig & b)
{
  Json soft = Json::array();
  for (const auto & s : b.soft) {
    Json margin = s.margin_delta ? Json(*s.margin_delta) : Json("auto");
    soft.push_back({{"kind", to_string(s.kind)}, {"alpha", s.alpha_gain}, {"margin", margin}});
  }
  return {{"alpha_c3bf", b.alpha_c3bf}, {"rho", b.rho}, {"ego_radius", b.ego_radius},
    {"soft", soft}};
}

}  // namespace detail

/// Builds and validates a scenario from a parsed document.
inline Scenario scenario_from_json(const Json & doc)
{
  using detail::Node;
  const Node root(doc, "");
  root.expect_object(
    {"name", "vehicle", "reference", "obstacles", "disturbance", "controller", "barriers", "sim"});
  Scenario sc;
  if (const auto name = root.find("name")) {
    sc.name = name->string();
  }
  sc.vehicle = detail::read_vehicle(root.at("vehicle"));
  sc.reference = detail::read_reference(root.at("reference"));
  if (const auto obstacles = root.find("obstacles")) {
    for (std::size_t i = 0; i < obstacles->size(); ++i) {
      sc.obstacles.push_back(detail::read_obstacle(obstacles->element(i)));
    }
  }
  if (const auto dist = root.find("disturbance")) {
    sc.disturbance = detail::read_disturbance(*dist);
  }
  detail::read_controller(root.at("controller"), sc);
  detail::read_barriers(root.find("barriers"), sc);

  const Node sim = root.at("sim");
  sim.expect_object({"dt_physics", "control_period", "duration", "seed"});
  sc.sim.dt_physics = sim.number_or("dt_physics", sc.sim.dt_physics);
  sc.sim.control_period = sim.number_or("control_period", sc.sim.control_period);
  sc.sim.duration = sim.at("duration").number();
  if (const auto seed = sim.find("seed")) {
    sc.sim.seed = seed->unsigned_integer();
  }
  validate(sc);
  return sc;
}

inline Json scenario_to_json(const Scenario & sc)
{
  Json obstacles = Json::array();
  for (const auto & o : sc.obstacles) {
    obstacles.push_back(detail::write_obstacle(o));
  }
  return {
    {"name", sc.name},
    {"vehicle", detail::write_vehicle(sc.vehicle)},
    {"reference", detail::write_reference(sc.reference)},
    {"obstacles", obstacles},
    {"disturbance", detail::write_disturbance(sc.disturbance)},
    {"controller", detail::write_controller(sc)},
    {"barriers", detail::write_barriers(sc.barriers)},
    {"sim", {{"dt_physics", sc.sim.dt_physics}, {"control_period", sc.sim.control_period},
      {"duration", sc.sim.duration}, {"seed", sc.sim.seed}}}};
}

inline std::string write_scenario(const Scenario & sc)
{
  return scenario_to_json(sc).dump(2) + "\n";
}

/// Parses scenario text. Syntax errors report line and column.
inline Scenario parse_scenario(const std::string & text)
{
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error & e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(
      ErrorKind::kValidation,
      "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kInvalidInput, "cannot read scenario file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace c3smc::io

#endif  // C3SMC__IO__SCENARIO_JSON_HPP_
