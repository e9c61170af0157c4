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

// c3smc: run, check and export tracking-plus-safety-filter scenarios.
//
// Exit codes: 0 ok, 1 usage/input/output error, 2 safety violation,
// 3 run aborted, 4 gain check failed.

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "c3smc/io/artifacts.hpp"
#include "c3smc/io/scenario_json.hpp"
#include "c3smc/presets.hpp"

namespace fs = std::filesystem;

namespace
{

enum Exit : int {kOk = 0, kUsage = 1, kUnsafe = 2, kAborted = 3, kGainFail = 4};

c3smc::Scenario load_preset(const std::string & id)
{
  auto sc = c3smc::presets::by_id(id);
  if (!sc) {
    std::string known;
    for (auto k : c3smc::presets::kIds) {
      known += known.empty() ? "" : ", ";
      known += k;
    }
    throw c3smc::Error(
      c3smc::ErrorKind::kInvalidInput, "unknown preset '" + id + "' (known: " + known + ")");
  }
  return *sc;
}

std::vector<c3smc::Scenario> load_all(
  const std::vector<std::string> & presets, const std::vector<std::string> & files)
{
  std::vector<c3smc::Scenario> out;
  for (const auto & p : presets) {
    out.push_back(load_preset(p));
  }
  for (const auto & f : files) {
    auto sc = c3smc::io::load_scenario(f);
    if (sc.name.empty()) {
      sc.name = fs::path(f).stem().string();
    }
    out.push_back(std::move(sc));
  }
  return out;
}

fs::path default_out_root()
{
  const char * env = std::getenv("C3SMC_OUT_DIR");
  return (env && *env) ? fs::path(env) : fs::path("out");
}

struct Outcome
{
  int code{kOk};
  std::string message;
};

Outcome run_one(const c3smc::Scenario & sc, const fs::path & dir, bool plots)
{
  try {
    const auto result = c3smc::run(sc);
    c3smc::io::write_artifacts(dir, sc, result, plots);
    const auto & m = result.metrics;
    auto opt = [](const std::optional<double> & v) {
        return v ? fmt::format("{:.6g}", *v) : std::string("n/a");
      };
    std::string msg = fmt::format(
      "{}: {} steps, rms_e1_post_reach={}, max_e1={:.6g}, min_h_c3bf={}, min_clearance={}, "
      "qp_infeasible={}, slack_active={} -> {}",
      sc.name, m.steps, opt(m.rms_e1_post_reach), m.max_e1, opt(m.min_h_c3bf),
      opt(m.min_clearance), m.qp_infeasible_count, m.slack_activation_count, dir.string());
    if (!m.gain_check.ok) {
      msg = fmt::format(
        "{}: warning: K = {:g} is below the reaching threshold {:.6f}\n", sc.name,
        m.gain_check.K, m.gain_check.threshold) + msg;
    }
    if (!m.safe()) {
      return {kUnsafe, msg + "\n" + sc.name + ": SAFETY VIOLATION"};
    }
    return {kOk, msg};
  } catch (const c3smc::SimulationAborted & e) {
    try {
      c3smc::io::write_artifacts(dir, sc, e.partial(), plots);
    } catch (const c3smc::Error &) {
    }
    return {kAborted, fmt::format("{}: aborted at {}", sc.name, e.what())};
  } catch (const c3smc::Error & e) {
    return {e.kind() == c3smc::ErrorKind::kInvalidInput ? kUsage : kAborted,
      fmt::format("{}: {}", sc.name, e.what())};
  }
}

int cmd_run(
  std::vector<c3smc::Scenario> scenarios, const std::optional<std::string> & out, bool plots,
  const std::optional<std::uint64_t> & seed, const std::optional<double> & duration)
{
  for (auto & sc : scenarios) {
    if (seed) {
      sc.sim.seed = *seed;
    }
    if (duration) {
      sc.sim.duration = *duration;
    }
    c3smc::validate(sc);
  }
  const bool batch = scenarios.size() > 1;
  const fs::path root = out ? fs::path(*out) : default_out_root();
  std::vector<fs::path> dirs;
  std::set<std::string> seen;
  for (const auto & sc : scenarios) {
    if (batch && !seen.insert(sc.name).second) {
      throw c3smc::Error(
        c3smc::ErrorKind::kInvalidInput, "batch contains two scenarios named '" + sc.name + "'");
    }
    // A single run with --out writes straight into that directory.
    dirs.push_back((out && !batch) ? root : root / sc.name);
  }

  std::vector<std::future<Outcome>> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    jobs.push_back(std::async(
      batch ? std::launch::async : std::launch::deferred,
      [&, i] {return run_one(scenarios[i], dirs[i], plots);}));
  }
  int code = kOk;
  for (auto & job : jobs) {
    const Outcome o = job.get();
    (o.code == kOk ? std::cout : std::cerr) << o.message << "\n";
    code = std::max(code, o.code);
  }
  return code;
}

int cmd_check_gains(const c3smc::Scenario & base, const std::optional<double> & k)
{
  c3smc::Scenario sc = base;
  if (k) {
    sc.gains.K = *k;
  }
  const auto r = c3smc::check_gains(sc);
  std::cout << fmt::format(
    "{} ({})\n"
    "  sigma_bounds     [{:.6f}, {:.6f}]\n"
    "  d_bar            {:g}\n"
    "  eta              {:g}\n"
    "  threshold        sqrt(2)*{:.6f}*{:g} + {:g} = {:.6f}\n"
    "  K                {:g}\n"
    "  result           {}\n",
    sc.name, c3smc::vehicle_kind(sc.vehicle), r.sigma_lower, r.sigma_upper, r.d_bar, r.eta,
    r.sigma_upper, r.d_bar, r.eta, r.threshold, r.K, r.ok ? "PASS" : "FAIL");
  return r.ok ? kOk : kGainFail;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Sliding-mode tracking with a collision-cone safety filter"};
  app.require_subcommand(1);

  std::vector<std::string> presets;
  std::vector<std::string> files;
  std::optional<std::string> out;
  bool plots = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  auto * run = app.add_subcommand("run", "simulate one or more scenarios (several run concurrently)");
  run->add_option("--preset", presets, "built-in scenario id (repeatable)");
  run->add_option("--scenario", files, "scenario JSON file (repeatable)")->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (default $C3SMC_OUT_DIR/<name> or out/<name>)");
  run->add_flag("--plots", plots, "also write trajectory.svg and timeseries.svg");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--duration", duration, "override the duration [s]")->check(CLI::NonNegativeNumber);

  std::string gain_preset;
  std::string gain_file;
  std::optional<double> gain_k;
  auto * gains = app.add_subcommand("check-gains", "check K against the reaching condition");
  auto * gp = gains->add_option("--preset", gain_preset, "built-in scenario id");
  auto * gf = gains->add_option("--scenario", gain_file, "scenario JSON file");
  gp->excludes(gf);
  gains->add_option("--K", gain_k, "override the switching gain");

  std::string validate_file;
  auto * val = app.add_subcommand("validate", "check a scenario file against the schema");
  val->add_option("--scenario", validate_file, "scenario JSON file")->required();

  std::string export_preset;
  std::optional<std::string> export_out;
  auto * exp = app.add_subcommand("export", "write a preset as a scenario JSON file");
  exp->add_option("--preset", export_preset, "built-in scenario id")->required();
  exp->add_option("--out", export_out, "destination file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      if (presets.empty() && files.empty()) {
        std::cerr << "run: give at least one --preset or --scenario\n";
        return kUsage;
      }
      return cmd_run(load_all(presets, files), out, plots, seed, duration);
    }
    if (*gains) {
      if (gain_preset.empty() == gain_file.empty()) {
        std::cerr << "check-gains: give exactly one of --preset or --scenario\n";
        return kUsage;
      }
      const auto sc = gain_file.empty() ? load_preset(gain_preset) :
        c3smc::io::load_scenario(gain_file);
      return cmd_check_gains(sc, gain_k);
    }
    if (*val) {
      const auto sc = c3smc::io::load_scenario(validate_file);
      std::cout << validate_file << ": ok (" << c3smc::vehicle_kind(sc.vehicle) << ", "
                << sc.obstacles.size() << " obstacles)\n";
      return kOk;
    }
    if (*exp) {
      const std::string text = c3smc::io::write_scenario(load_preset(export_preset));
      if (export_out) {
        c3smc::io::write_text(*export_out, text);
      } else {
        std::cout << text;
      }
      return kOk;
    }
  } catch (const c3smc::Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
