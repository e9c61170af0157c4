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

// Static SVG plots of a finished run.
//
// trajectory.svg: reference (dashed) and robot path in the plane, with the
// robot path colored by time and matched timestamp markers on the reference
// (square), robot (dot) and each obstacle (disk outline).
// timeseries.svg: |S| with the boundary-layer width, and |e1|, against time.

#ifndef C3SMC__IO__SVG_HPP_
#define C3SMC__IO__SVG_HPP_

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "c3smc/scenario.hpp"
#include "c3smc/sim.hpp"

namespace c3smc::io
{

namespace detail
{

/// Time colormap, dark blue through green to yellow.
inline std::string time_color(double frac)
{
  static constexpr std::array<std::array<double, 3>, 5> kStops{{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  frac = std::clamp(frac, 0.0, 1.0) * (kStops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(frac), kStops.size() - 2);
  const double w = frac - static_cast<double>(i);
  std::array<int, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround((1.0 - w) * kStops[i][c] + w * kStops[i + 1][c]));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

struct Box
{
  double x0{std::numeric_limits<double>::infinity()};
  double y0{std::numeric_limits<double>::infinity()};
  double x1{-std::numeric_limits<double>::infinity()};
  double y1{-std::numeric_limits<double>::infinity()};

  void add(const Vec2 & p, double pad = 0.0)
  {
    if (!p.allFinite()) {
      return;
    }
    x0 = std::min(x0, p.x() - pad);
    y0 = std::min(y0, p.y() - pad);
    x1 = std::max(x1, p.x() + pad);
    y1 = std::max(y1, p.y() + pad);
  }

  bool empty() const {return !(x1 >= x0);}
};

inline double nice_step(double span, int target)
{
  const double raw = span / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      return m * mag;
    }
  }
  return 10.0 * mag;
}

constexpr const char * kSvgFooter = "</svg>\n";

inline std::string svg_header(int w, int h)
{
  return fmt::format(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
    "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
    w, h);
}

}  // namespace detail

inline std::string trajectory_svg(const Scenario & sc, const Trace & trace)
{
  constexpr int kW = 720;
  constexpr int kH = 640;
  constexpr int kMargin = 50;
  constexpr int kMarkers = 7;
  const auto & rows = trace.rows;

  std::vector<Vec2> ref;
  ref.reserve(rows.size());
  detail::Box box;
  for (const auto & r : rows) {
    ref.push_back(reference(sc.reference, r.t).p);
    box.add(ref.back());
    box.add(r.canonical.p);
  }
  const double r_pad = sc.barriers.ego_radius;
  for (const auto & obs : sc.obstacles) {
    for (const auto & r : rows) {
      box.add(obstacle_state(obs, r.t).p, obs.radius + r_pad);
    }
  }
  if (box.empty()) {
    box = {-1.0, -1.0, 1.0, 1.0};
  }
  const double span = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-6}) * 1.08;
  const double cx = 0.5 * (box.x0 + box.x1);
  const double cy = 0.5 * (box.y0 + box.y1);
  const double plot = std::min(kW - 2 * kMargin - 100, kH - 2 * kMargin);
  const double scale = plot / span;
  const double ox = kMargin + 0.5 * plot;
  const double oy = kMargin + 0.5 * plot;
  auto X = [&](double x) {return ox + (x - cx) * scale;};
  auto Y = [&](double y) {return oy - (y - cy) * scale;};

  std::string s = detail::svg_header(kW, kH);
  s += fmt::format(
    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n",
    kMargin, kMargin, plot, plot);

  // Grid ticks in metres.
  const double step = detail::nice_step(span, 6);
  for (double g = std::ceil((cx - span / 2) / step) * step; g <= cx + span / 2; g += step) {
    s += fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#eee\"/>"
      "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
      X(g), kMargin, kMargin + plot, kMargin + plot + 16, g);
  }
  for (double g = std::ceil((cy - span / 2) / step) * step; g <= cy + span / 2; g += step) {
    s += fmt::format(
      "<line x1=\"{1}\" y1=\"{0:.2f}\" x2=\"{2}\" y2=\"{0:.2f}\" stroke=\"#eee\"/>"
      "<text x=\"{3}\" y=\"{0:.2f}\" text-anchor=\"end\">{4:g}</text>\n",
      Y(g), kMargin, kMargin + plot, kMargin - 6, g);
  }
  s += fmt::format(
    "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">x [m]</text>\n", kMargin + plot / 2,
    kMargin + plot + 34);
  s += fmt::format(
    "<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">y [m]</text>\n",
    kMargin + plot / 2, kMargin + plot / 2);

  if (!rows.empty()) {
    s += "<polyline fill=\"none\" stroke=\"#888\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" points=\"";
    for (const auto & p : ref) {
      s += fmt::format("{:.2f},{:.2f} ", X(p.x()), Y(p.y()));
    }
    s += "\"/>\n";

    const double t_end = std::max(rows.back().t, 1e-12);
    constexpr std::size_t kChunks = 120;
    const std::size_t per = std::max<std::size_t>(1, rows.size() / kChunks);
    for (std::size_t i = 0; i + 1 < rows.size(); i += per) {
      const std::size_t j = std::min(i + per, rows.size() - 1);
      s += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"",
        detail::time_color(rows[i].t / t_end));
      for (std::size_t k = i; k <= j; ++k) {
        const Vec2 & p = rows[k].canonical.p;
        s += fmt::format("{:.2f},{:.2f} ", X(p.x()), Y(p.y()));
      }
      s += "\"/>\n";
    }

    for (int m = 0; m < kMarkers; ++m) {
      const std::size_t k = (rows.size() - 1) * static_cast<std::size_t>(m) / (kMarkers - 1);
      const double t = rows[k].t;
      const std::string col = detail::time_color(t / t_end);
      for (const auto & obs : sc.obstacles) {
        const Vec2 o = obstacle_state(obs, t).p;
        s += fmt::format(
          "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"{}\" fill-opacity=\"0.15\" "
          "stroke=\"{}\" stroke-width=\"1.5\"/>\n",
          X(o.x()), Y(o.y()), obs.radius * scale, col, col);
      }
      s += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"8\" height=\"8\" fill=\"{}\" stroke=\"black\" "
        "stroke-width=\"0.5\"/>\n",
        X(ref[k].x()) - 4, Y(ref[k].y()) - 4, col);
      const Vec2 & p = rows[k].canonical.p;
      s += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4.5\" fill=\"{}\" stroke=\"black\" "
        "stroke-width=\"0.5\"/>\n",
        X(p.x()), Y(p.y()), col);
    }

    // Time color bar.
    const int bx = kMargin + static_cast<int>(plot) + 30;
    for (int i = 0; i < 50; ++i) {
      s += fmt::format(
        "<rect x=\"{}\" y=\"{:.2f}\" width=\"16\" height=\"{:.2f}\" fill=\"{}\"/>\n", bx,
        kMargin + plot * (1.0 - (i + 1) / 50.0), plot / 50.0 + 0.5,
        detail::time_color(i / 49.0));
    }
    s += fmt::format(
      "<text x=\"{0}\" y=\"{1}\">t = 0 s</text><text x=\"{0}\" y=\"{2}\">t = {3:g} s</text>\n",
      bx + 20, kMargin + plot, kMargin + 10, t_end);
  }
  s += fmt::format(
    "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">{}: reference (dashed), "
    "robot, obstacles</text>\n",
    kW / 2, sc.name.empty() ? std::string("scenario") : sc.name);
  s += detail::kSvgFooter;
  return s;
}

inline std::string timeseries_svg(const Scenario & sc, const Trace & trace)
{
  constexpr int kW = 760;
  constexpr int kH = 560;
  constexpr int kLeft = 70;
  constexpr int kRight = 20;
  constexpr int kTop = 40;
  constexpr int kPanel = 200;
  constexpr int kGap = 60;
  const auto & rows = trace.rows;
  const double t_end = rows.empty() ? 1.0 : std::max(rows.back().t, 1e-12);
  const double pw = kW - kLeft - kRight;

  std::string s = detail::svg_header(kW, kH);
  auto panel = [&](int top, const std::string & label, auto value, double guide) {
      double vmax = guide;
      for (const auto & r : rows) {
        vmax = std::max(vmax, value(r));
      }
      vmax = vmax > 0.0 ? vmax * 1.05 : 1.0;
      auto X = [&](double t) {return kLeft + pw * t / t_end;};
      auto Y = [&](double v) {return top + kPanel * (1.0 - v / vmax);};
      s += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n",
        kLeft, top, pw, kPanel);
      const double ys = detail::nice_step(vmax, 4);
      for (double g = 0.0; g <= vmax; g += ys) {
        s += fmt::format(
          "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#eee\"/>"
          "<text x=\"{3}\" y=\"{1:.2f}\" text-anchor=\"end\">{4:g}</text>\n",
          kLeft, Y(g), kLeft + pw, kLeft - 6, g);
      }
      const double xs = detail::nice_step(t_end, 8);
      for (double g = 0.0; g <= t_end + 1e-9; g += xs) {
        s += fmt::format(
          "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", X(g),
          top + kPanel + 16, g);
      }
      if (guide > 0.0) {
        s += fmt::format(
          "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#c33\" "
          "stroke-dasharray=\"5 3\"/>\n",
          kLeft, Y(guide), kLeft + pw);
      }
      s += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
      for (const auto & r : rows) {
        s += fmt::format("{:.2f},{:.2f} ", X(r.t), Y(value(r)));
      }
      s += "\"/>\n";
      s += fmt::format(
        "<text x=\"{}\" y=\"{}\" transform=\"rotate(-90 {} {})\" text-anchor=\"middle\">{}</text>\n",
        18, top + kPanel / 2, 18, top + kPanel / 2, label);
    };
  panel(kTop, "|S|", [](const TraceRow & r) {return r.s.norm();}, sc.gains.lambda_bl);
  panel(kTop + kPanel + kGap, "|e1| [m]", [](const TraceRow & r) {return r.e1.norm();}, 0.0);
  s += fmt::format(
    "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t [s]</text>\n", kLeft + pw / 2,
    kTop + 2 * kPanel + kGap + 36);
  s += fmt::format(
    "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}: sliding variable "
    "(dashed: boundary layer) and position error</text>\n",
    kW / 2, sc.name.empty() ? std::string("scenario") : sc.name);
  s += detail::kSvgFooter;
  return s;
}

}  // namespace c3smc::io

#endif  // C3SMC__IO__SVG_HPP_
