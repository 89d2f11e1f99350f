// Copyright 2026 The fishsim Authors.
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
#include "fishsim/cli.h"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fishsim/config.h"
#include "fishsim/dynamics.h"
#include "fishsim/ebt.h"
#include "fishsim/env.h"
#include "fishsim/spectrum.h"
#include "fishsim/swimmer.h"
#include "fishsim/sysid.h"

namespace fishsim {
namespace {

using nlohmann::json;

const char* const kSubcommands[] = {"simulate", "sysid",      "ebt-fit", "sweep",
                                    "env-rollout", "train-cem", "config"};

std::string Usage() {
  return "usage: fishsim [--config FILE] <subcommand> [flags]\n"
         "\n"
         "subcommands:\n"
         "  simulate         run the swimmer at a constant flap frequency, write markers\n"
         "  sysid stiffness  joint stiffness from a release frequency\n"
         "  sysid motor      crank arm, motor rate and phase from an out-of-water track\n"
         "  sysid fluid      fluid coefficients from in-water tracks\n"
         "  ebt-fit          elongated-body baseline fit on in-water tracks\n"
         "  sweep            commanded frequency vs cruise speed table\n"
         "  env-rollout      run a policy in the target-reaching environment\n"
         "  train-cem        train a biased-sinusoid policy with the cross-entropy method\n"
         "  config print-default\n"
         "\n"
         "Run 'fishsim <subcommand> --help' for flags.\n";
}

std::string Now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream s;
  s << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

json Versions() {
  return {{"fishsim", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
                        "." + std::to_string(BOOST_VERSION % 100)},
          {"compiler", __VERSION__}};
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string ReadText(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Manifest {
  json doc;

  Manifest(const std::vector<std::string>& args, const std::string& command, const SwimmerConfig& config,
           uint64_t seed) {
    doc["command"] = command;
    doc["args"] = args;
    doc["config_hash"] = ConfigHash(config);
    doc["config"] = json::parse(ConfigToJson(config));
    doc["seed"] = seed;
    doc["versions"] = Versions();
    doc["started"] = Now();
    doc["artifacts"] = json::array();
  }
  void Artifact(const std::string& path) { doc["artifacts"].push_back(path); }
  void Write(const std::string& path) { WriteText(path, doc.dump(2) + "\n"); }
};

json PolicyToJson(const BiasedSinusoidParams& p) {
  return {{"amplitude", p.amplitude}, {"frequency", p.frequency}, {"bias", p.bias}, {"heading_gain", p.heading_gain}};
}

BiasedSinusoidParams PolicyFromJson(const std::string& text) {
  const json j = json::parse(text);
  BiasedSinusoidParams p;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw SchemaError("policy." + key + ": expected a number");
    if (key == "amplitude") {
      p.amplitude = value.get<double>();
    } else if (key == "frequency") {
      p.frequency = value.get<double>();
    } else if (key == "bias") {
      p.bias = value.get<double>();
    } else if (key == "heading_gain") {
      p.heading_gain = value.get<double>();
    } else {
      throw SchemaError("policy." + key + ": unknown key");
    }
  }
  if (!(p.frequency > 0.0 && p.frequency <= 5.0)) throw SchemaError("policy.frequency: must be in (0, 5] Hz");
  return p;
}

// "path@hz"
std::pair<std::string, double> SplitRef(const std::string& spec) {
  const size_t at = spec.rfind('@');
  if (at == std::string::npos) throw Error("expected PATH@HZ, got '" + spec + "'");
  return {spec.substr(0, at), std::stod(spec.substr(at + 1))};
}

std::string Fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed << v;
  return s.str();
}

std::string TraceText(const FitResult& fit) {
  std::ostringstream s;
  s << "trace (evaluation, value, x):\n" << std::setprecision(9);
  for (size_t i = 0; i < fit.trace.size(); ++i) {
    s << "  " << i + 1 << " " << fit.trace[i].value;
    for (double v : fit.trace[i].x) s << " " << v;
    s << "\n";
  }
  return s.str();
}

}  // namespace

std::vector<double> ParseRange(const std::string& text) {
  std::vector<double> parts;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
    throw Error("range must be START:STEP:STOP with STEP > 0 and STOP >= START");
  }
  const long n = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(parts[0] + i * parts[1]);
  return out;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Unknown subcommand: usage and exit 2 before CLI11 sees it.
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.empty() || a[0] == '-') continue;
    // Values of the global options.
    if (i > 0 && (args[i - 1] == "--config" || args[i - 1] == "--seed")) continue;
    if (std::find(std::begin(kSubcommands), std::end(kSubcommands), a) == std::end(kSubcommands)) {
      err << "fishsim: unknown subcommand '" << a << "'\n" << Usage();
      return kExitUsage;
    }
    break;
  }

  CLI::App app{"Simulator and calibration toolkit for tendon-driven swimmers", "fishsim"};
  app.require_subcommand(1);
  std::string config_path;
  uint64_t seed = 0;
  app.add_option("--config", config_path, "swimmer config (JSON); defaults when omitted");
  app.add_option("--seed", seed, "random seed");

  // simulate
  auto* sim = app.add_subcommand("simulate", "constant flap frequency run");
  double sim_freq = 1.19, sim_duration = 8.0, sim_phase = 0.0;
  std::string sim_medium = "water", sim_out = "simulate.markers";
  bool sim_fixed = false;
  sim->add_option("--freq", sim_freq, "flap frequency, Hz");
  sim->add_option("--duration", sim_duration, "simulated time, s");
  sim->add_option("--phase", sim_phase, "initial motor angle, rad");
  sim->add_option("--medium", sim_medium, "water or air")->check(CLI::IsMember({"water", "air"}));
  sim->add_flag("--fixed-head", sim_fixed, "clamp the head");
  sim->add_option("--out", sim_out, "marker trajectory file");

  // sysid
  auto* sysid = app.add_subcommand("sysid", "parameter identification");
  sysid->require_subcommand(1);
  std::string sysid_out = "fitted.json";
  auto* stiff = sysid->add_subcommand("stiffness", "joint stiffness from the release frequency");
  double stiff_target = 3.5;
  std::string stiff_ref;
  stiff->add_option("--target-freq", stiff_target, "release frequency, Hz");
  stiff->add_option("--release", stiff_ref, "measured release track; its dominant frequency is the target");
  stiff->add_option("--out", sysid_out, "fitted config");

  auto* motor = sysid->add_subcommand("motor", "crank arm, rate and phase from an out-of-water track");
  std::string motor_ref;
  int motor_refine = 200;
  motor->add_option("--ref", motor_ref, "out-of-water marker track")->required();
  motor->add_option("--refine-evals", motor_refine, "Nelder-Mead evaluations after the grid");
  motor->add_option("--out", sysid_out, "fitted config");

  auto* fluid = sysid->add_subcommand("fluid", "fluid coefficients from in-water tracks");
  std::vector<std::string> fluid_refs;
  FluidFitOptions fluid_options;
  fluid->add_option("--ref", fluid_refs, "in-water track and its flap frequency, PATH@HZ")->required();
  fluid->add_option("--global-evals", fluid_options.global_evals, "surrogate-search evaluations");
  fluid->add_option("--local-evals", fluid_options.local_evals, "Nelder-Mead evaluations");
  fluid->add_option("--warmup", fluid_options.warmup, "excluded start window, s");
  fluid->add_option("--out", sysid_out, "fitted config");

  // ebt-fit
  auto* ebt = app.add_subcommand("ebt-fit", "elongated-body baseline");
  std::vector<std::string> ebt_refs, ebt_eval;
  double ebt_warmup = 1.0;
  std::string ebt_out = "ebt_report.txt";
  ebt->add_option("--ref", ebt_refs, "training tracks")->required();
  ebt->add_option("--eval", ebt_eval, "held-out tracks");
  ebt->add_option("--warmup", ebt_warmup, "excluded start window, s");
  ebt->add_option("--out", ebt_out, "report file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "frequency sweep");
  std::string sweep_freqs = "0.4:0.1:1.3", sweep_out = "sweep.txt";
  double sweep_duration = 8.0, sweep_warmup = 1.0;
  sweep->add_option("--freqs", sweep_freqs, "START:STEP:STOP, Hz");
  sweep->add_option("--duration", sweep_duration, "simulated time per frequency, s");
  sweep->add_option("--warmup", sweep_warmup, "excluded start window, s");
  sweep->add_option("--out", sweep_out, "table file");

  // env-rollout
  auto* rollout = app.add_subcommand("env-rollout", "run a policy in the environment");
  std::string rollout_policy, rollout_out = "rollout.markers";
  std::vector<double> rollout_target;
  double rollout_horizon = 30.0;
  rollout->add_option("--policy", rollout_policy, "policy file (JSON); defaults when omitted");
  rollout->add_option("--target", rollout_target, "target X Y in m; sampled from the seed when omitted")
      ->expected(2);
  rollout->add_option("--horizon", rollout_horizon, "episode length, s");
  rollout->add_option("--out", rollout_out, "marker trajectory file; rewards go to OUT.rewards");

  // train-cem
  auto* train = app.add_subcommand("train-cem", "cross-entropy training");
  CemOptions cem;
  int cem_targets = 8;
  std::string train_out = "policy.json";
  train->add_option("--population", cem.population, "samples per generation");
  train->add_option("--elites", cem.elites, "elite count");
  train->add_option("--generations", cem.generations, "generations after the initial population");
  train->add_option("--targets", cem_targets, "evaluation targets per candidate");
  train->add_option("--out", train_out, "policy file");

  // config
  auto* config_cmd = app.add_subcommand("config", "config management");
  config_cmd->require_subcommand(1);
  auto* print_default = config_cmd->add_subcommand("print-default", "write the default config to stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (CLI::App* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "fishsim: " << e.what() << "\n";
    return kExitError;
  }

  const std::string run_stamp = Now();
  try {
    if (print_default->parsed()) {
      out << ConfigToJson(SwimmerConfig{});
      return kExitOk;
    }
    const SwimmerConfig config = config_path.empty() ? SwimmerConfig{} : LoadConfig(config_path);

    if (sim->parsed()) {
      Manifest m(args, "simulate", config, seed);
      SimulateOptions options;
      options.swimmer.medium = sim_medium == "air" ? Medium::kAir : Medium::kWater;
      options.swimmer.fixed_head = sim_fixed;
      options.motor_phase = sim_phase;
      const SimTrajectory traj = simulate(config, ConstantRateController(2.0 * kPi * sim_freq), sim_duration, options);
      save_trajectory(traj.markers, sim_out);
      m.Artifact(sim_out);
      m.doc["realtime_factor"] = traj.realtime_factor();
      m.doc["wall_time"] = traj.wall_time;
      m.Write(sim_out + ".manifest.json");
      out << "wrote " << sim_out << " (" << traj.markers.size() << " frames)\n";
      out << "realtime factor " << Fixed(traj.realtime_factor(), 2) << "x\n";
      if (options.swimmer.medium == Medium::kWater && sim_duration > 1.0) {
        out << "cruise speed " << Fixed(MeasuredCruiseSpeed(traj.markers, 1.0)) << " m/s\n";
      }
      return kExitOk;
    }

    if (stiff->parsed()) {
      Manifest m(args, "sysid stiffness", config, seed);
      double target = stiff_target;
      if (!stiff_ref.empty()) target = ReleaseFrequency(load_trajectory(stiff_ref));
      const StiffnessFit fit = fit_stiffness(target, config);
      SwimmerConfig fitted = config;
      fitted.joints.stiffness = fit.stiffness;
      SaveConfig(fitted, sysid_out);
      std::ostringstream report;
      report << "target_frequency_hz " << Fixed(target) << "\n"
             << "stiffness_nm_per_rad " << std::setprecision(9) << fit.stiffness << "\n"
             << "resimulated_frequency_hz " << Fixed(fit.frequency) << "\n"
             << "evaluations " << fit.evaluations << "\n";
      WriteText(sysid_out + ".report.txt", report.str());
      out << report.str();
      m.Artifact(sysid_out);
      m.Artifact(sysid_out + ".report.txt");
      m.Write(sysid_out + ".manifest.json");
      return kExitOk;
    }

    if (motor->parsed()) {
      Manifest m(args, "sysid motor", config, seed);
      MotorFitOptions options;
      options.refine_evals = motor_refine;
      const FitResult fit = fit_motor(load_trajectory(motor_ref), config, options);
      SwimmerConfig fitted = config;
      fitted.motor.crank_arm = fit.best[0];
      SaveConfig(fitted, sysid_out);
      std::ostringstream report;
      report << "crank_arm_m " << std::setprecision(9) << fit.best[0] << "\n"
             << "motor_rate_rad_s " << fit.best[1] << "\n"
             << "flap_frequency_hz " << fit.best[1] / (2.0 * kPi) << "\n"
             << "phase_rad " << fit.best[2] << "\n"
             << "marker_error_m " << fit.best_value << "\n"
             << "evaluations " << fit.evaluations << "\n"
             << TraceText(fit);
      WriteText(sysid_out + ".report.txt", report.str());
      out << report.str();
      m.Artifact(sysid_out);
      m.Artifact(sysid_out + ".report.txt");
      m.Write(sysid_out + ".manifest.json");
      return kExitOk;
    }

    if (fluid->parsed()) {
      Manifest m(args, "sysid fluid", config, seed);
      fluid_options.seed = seed;
      std::vector<FluidReference> refs;
      for (const std::string& spec : fluid_refs) {
        const auto [path, hz] = SplitRef(spec);
        refs.push_back({load_trajectory(path), 2.0 * kPi * hz});
      }
      const FitResult fit = fit_fluid_coeffs(refs, config, fluid_options);
      const SwimmerConfig fitted = WithFluidCoeffs(config, fit.best);
      SaveConfig(fitted, sysid_out);
      std::ostringstream report;
      report << std::setprecision(9) << "c_blunt " << fit.best[0] << "\nc_slender " << fit.best[1]
             << "\nc_angular " << fit.best[2] << "\nc_kutta " << fit.best[3] << "\nc_magnus " << fit.best[4] << "\n";
      for (size_t r = 0; r < refs.size(); ++r) report << "phase_" << r << " " << fit.best[5 + r] << "\n";
      report << "marker_error_m " << fit.best_value << "\n"
             << "evaluations " << fit.evaluations << "\n"
             << TraceText(fit);
      WriteText(sysid_out + ".report.txt", report.str());
      out << report.str();
      m.Artifact(sysid_out);
      m.Artifact(sysid_out + ".report.txt");
      m.Write(sysid_out + ".manifest.json");
      return kExitOk;
    }

    if (ebt->parsed()) {
      Manifest m(args, "ebt-fit", config, seed);
      auto sample_of = [&](const std::string& path) {
        const MarkerTrajectory t = load_trajectory(path);
        EbtSample s;
        s.derivatives = tail_derivatives(TailKinematicsFromTrajectory(t, ebt_warmup));
        s.measured_speed = MeasuredCruiseSpeed(t, ebt_warmup);
        return s;
      };
      std::vector<EbtSample> train_samples, eval_samples;
      for (const std::string& p : ebt_refs) train_samples.push_back(sample_of(p));
      for (const std::string& p : ebt_eval) eval_samples.push_back(sample_of(p));
      EbtFitOptions options;
      options.seed = seed;
      const EbtFit fit = fit_ebt(train_samples, EbtParamsFromConfig(config), options);
      std::ostringstream report;
      report << std::setprecision(9) << "beta " << fit.params.beta << "\ndrag_coeff " << fit.params.drag_coeff
             << "\nsurface_area_m2 " << fit.params.surface_area << "\ndepth_m " << fit.params.depth
             << "\ntrain_mean_abs_error_m_s " << fit.mean_abs_error << "\n";
      report << "set,file,predicted_m_s,measured_m_s\n";
      double held_out = 0.0;
      auto rows = [&](const char* set, const std::vector<std::string>& paths, const std::vector<EbtSample>& samples) {
        for (size_t i = 0; i < samples.size(); ++i) {
          const double u = cruise_speed(samples[i].derivatives, fit.params);
          report << set << "," << paths[i] << "," << u << "," << samples[i].measured_speed << "\n";
          if (std::string(set) == "eval") held_out += std::abs(u - samples[i].measured_speed) / samples.size();
        }
      };
      rows("train", ebt_refs, train_samples);
      rows("eval", ebt_eval, eval_samples);
      if (!eval_samples.empty()) report << "heldout_mean_abs_error_m_s " << held_out << "\n";
      WriteText(ebt_out, report.str());
      out << report.str();
      m.Artifact(ebt_out);
      m.Write(ebt_out + ".manifest.json");
      return kExitOk;
    }

    if (sweep->parsed()) {
      Manifest m(args, "sweep", config, seed);
      std::ostringstream table;
      table << "freq_hz,omega_rad_s,cruise_speed_m_s,realtime_factor\n";
      double sim_time = 0.0, wall = 0.0;
      for (double hz : ParseRange(sweep_freqs)) {
        const SimTrajectory t = simulate(config, ConstantRateController(2.0 * kPi * hz), sweep_duration);
        table << Fixed(hz, 3) << "," << Fixed(2.0 * kPi * hz) << "," << Fixed(MeasuredCruiseSpeed(t.markers, sweep_warmup))
              << "," << Fixed(t.realtime_factor(), 2) << "\n";
        sim_time += t.sim_time;
        wall += t.wall_time;
      }
      WriteText(sweep_out, table.str());
      out << table.str();
      m.Artifact(sweep_out);
      m.doc["realtime_factor"] = wall > 0.0 ? sim_time / wall : 0.0;
      m.Write(sweep_out + ".manifest.json");
      return kExitOk;
    }

    if (rollout->parsed()) {
      Manifest m(args, "env-rollout", config, seed);
      EnvConfig env_config;
      env_config.horizon = rollout_horizon;
      const BiasedSinusoidParams params =
          rollout_policy.empty() ? BiasedSinusoidParams{} : PolicyFromJson(ReadText(rollout_policy));
      SwimEnv env(config, env_config);
      BiasedSinusoidPolicy policy(params, env_config, env.control_dt());
      Observation obs = rollout_target.empty()
                            ? env.Reset(seed)
                            : env.ResetWithTarget(Vec3(rollout_target[0], rollout_target[1], config.surface.z0));
      MarkerTrajectory traj;
      traj.sample_rate = 1.0 / env.control_dt();
      traj.frames.push_back(MarkerFrameOf(env.swimmer()));
      std::ostringstream rewards;
      rewards << "step,time_s,action,reward,distance_m,flap_hz,clamped\n";
      double total = 0.0;
      StepResult r;
      const auto wall_start = std::chrono::steady_clock::now();
      for (int k = 0; !r.done; ++k) {
        const double u = policy.Act(obs);
        r = env.Step(u);
        obs = r.observation;
        total += r.reward;
        traj.frames.push_back(MarkerFrameOf(env.swimmer()));
        rewards << k << "," << Fixed(env.time()) << "," << Fixed(u) << "," << Fixed(r.reward) << ","
                << Fixed(r.info.distance) << "," << Fixed(r.info.flap_frequency, 3) << "," << r.info.clamped << "\n";
      }
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
      save_trajectory(traj, rollout_out);
      WriteText(rollout_out + ".rewards", rewards.str());
      m.Artifact(rollout_out);
      m.Artifact(rollout_out + ".rewards");
      m.doc["policy"] = PolicyToJson(params);
      m.doc["target"] = {env.target().x(), env.target().y()};
      m.doc["realtime_factor"] = wall > 0.0 ? env.time() / wall : 0.0;
      m.Write(rollout_out + ".manifest.json");
      out << "target " << Fixed(env.target().x(), 3) << " " << Fixed(env.target().y(), 3) << "\n"
          << "return " << Fixed(total, 3) << "\nsuccess " << (r.info.success ? "yes" : "no") << "\n"
          << "time_s " << Fixed(env.time(), 2) << "\nfinal_distance_m " << Fixed(r.info.distance, 4) << "\n";
      return kExitOk;
    }

    if (train->parsed()) {
      Manifest m(args, "train-cem", config, seed);
      EnvConfig env_config;
      cem.seed = seed;
      cem.eval_targets = SampleTargets(env_config, seed + 1, cem_targets);
      const CemResult result = cem_train(config, env_config, cem);
      json doc = PolicyToJson(result.best);
      WriteText(train_out, doc.dump(2) + "\n");
      std::ostringstream report;
      report << "generation,elite_mean,best\n";
      for (size_t g = 0; g < result.history.size(); ++g) {
        report << g << "," << Fixed(result.history[g].elite_mean, 3) << "," << Fixed(result.history[g].best, 3) << "\n";
      }
      report << "best_return " << Fixed(result.best_return, 3) << "\nepisodes " << result.episodes << "\n";
      WriteText(train_out + ".report.txt", report.str());
      out << report.str() << "policy " << doc.dump() << "\n";
      m.Artifact(train_out);
      m.Artifact(train_out + ".report.txt");
      m.Write(train_out + ".manifest.json");
      return kExitOk;
    }
  } catch (const DivergenceError& e) {
    err << "fishsim: simulation diverged at t=" << e.time() << " s (body " << e.body() << "), run started "
        << run_stamp << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    err << "fishsim: " << e.what() << "\n";
    return kExitError;
  }
  err << Usage();
  return kExitUsage;
}

}  // namespace fishsim
