/*
 Copyright 2026 The seirctl Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "seirctl/cli.hpp"
#include "seirctl/checks.hpp"
#include "seirctl/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace seirctl {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::optional<ControlPoint> parse_pair(const std::string &text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    return std::nullopt;
  const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
  char *end_a = nullptr, *end_b = nullptr;
  const double u1 = std::strtod(a.c_str(), &end_a);
  const double u2 = std::strtod(b.c_str(), &end_b);
  if (a.empty() || b.empty() || *end_a != '\0' || *end_b != '\0')
    return std::nullopt;
  return ControlPoint{u1, u2};
}

struct Run {
  Solution sol;
  std::optional<OptimalityReport> report;
};

ordered_json solution_record(const Run &r) {
  const Solution &s = r.sol;
  const Diagnostics &d = s.diagnostics;
  ordered_json j;
  j["method"] = std::string(to_string(s.method));
  j["cost"] = s.cost;
  if (s.method == Method::DAL || s.method == Method::SLDAL) {
    j["iterations"] = d.iterations;
    j["converged"] = d.converged;
    if (d.termination)
      j["termination"] = std::string(to_string(*d.termination));
    j["gradient_residual"] = d.gradient_residual;
    j["cost_history_length"] = d.cost_history.size();
  }
  if (d.sl_cost)
    j["sl_cost"] = *d.sl_cost;
  if (d.grid_spec)
    j["grid"] = {{"nodes_per_axis", d.grid_spec->nodes_per_axis},
                 {"u1_count", d.grid_spec->u1_count},
                 {"u2_count", d.grid_spec->u2_count}};
  if (r.report) {
    const OptimalityReport &o = *r.report;
    j["optimality"] = {{"first_order_tol", o.first_tol},
                       {"first_order_pass_fraction", o.first_pass_fraction},
                       {"first_order_max_violation", o.max_first_violation},
                       {"second_order_tol", o.second_tol},
                       {"second_order_pass_fraction", o.second_pass_fraction},
                       {"second_order_max_violation", o.max_second_violation}};
  }
  return j;
}

void write_trajectory_json(std::ostream &out, const Scenario &scn,
                           const Solution &s) {
  const std::vector<double> r =
      recovered_fraction(scn, s.trajectory, s.controls);
  ordered_json j;
  std::vector<double> t, sv, ev, iv, u1, u2;
  for (std::size_t n = 0; n < s.trajectory.states.size(); ++n) {
    t.push_back(s.trajectory.grid.t(static_cast<int>(n)));
    sv.push_back(s.trajectory.states[n].s);
    ev.push_back(s.trajectory.states[n].e);
    iv.push_back(s.trajectory.states[n].i);
    u1.push_back(s.controls.controls[n].u1);
    u2.push_back(s.controls.controls[n].u2);
  }
  j["t"] = t;
  j["s"] = sv;
  j["e"] = ev;
  j["i"] = iv;
  j["r"] = r;
  j["u1"] = u1;
  j["u2"] = u2;
  out << j.dump(1) << '\n';
}

std::string method_tag(Method m) { return std::string(to_string(m)); }

void write_outputs(const RunConfig &cfg, const Scenario &scn,
                   const TimeGrid &grid, const std::vector<Run> &runs,
                   const std::optional<Vec3> &deviation) {
  for (const Run &r : runs) {
    const std::string stem = method_tag(r.sol.method);
    const fs::path traj_path =
        fs::path(cfg.output_dir) /
        ("trajectory_" + stem +
         (cfg.format == OutputFormat::Csv ? ".csv" : ".json"));
    std::ofstream traj(traj_path);
    if (cfg.format == OutputFormat::Csv)
      write_trajectory_csv(traj, scn, r.sol.trajectory, r.sol.controls);
    else
      write_trajectory_json(traj, scn, r.sol);
    if (!traj)
      throw std::runtime_error("cannot write " + traj_path.string());
    if (r.report) {
      const fs::path rep_path =
          fs::path(cfg.output_dir) / ("optimality_" + stem + ".csv");
      std::ofstream rep(rep_path);
      write_report_csv(rep, *r.report);
      if (!rep)
        throw std::runtime_error("cannot write " + rep_path.string());
    }
  }

  ordered_json meta;
  meta["scenario"] = scn.name;
  meta["variant"] = std::string(to_string(scn.variant));
  meta["t0"] = grid.t0;
  meta["T"] = grid.T;
  meta["dt"] = grid.dt();
  meta["n_max"] = grid.n_max;
  meta["runs"] = ordered_json::array();
  for (const Run &r : runs)
    meta["runs"].push_back(solution_record(r));
  if (deviation)
    meta["deviation_inf"] = {{"s", (*deviation)[0]},
                             {"e", (*deviation)[1]},
                             {"i", (*deviation)[2]}};
  const fs::path meta_path = fs::path(cfg.output_dir) / "metadata.json";
  std::ofstream m(meta_path);
  m << meta.dump(2) << '\n';
  if (!m)
    throw std::runtime_error("cannot write " + meta_path.string());
}

void check_config(const RunConfig &cfg) {
  try {
    cfg.grid.validate();
    cfg.dal.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw ConfigError("--dt must be positive");
  if (cfg.workers < 1)
    throw ConfigError("--threads must be at least 1");
  if (cfg.init_given && (cfg.summary || cfg.method != Method::DAL))
    throw ConfigError("--init-control applies to --method dal only");
  const bool has_grid = cfg.summary || cfg.method == Method::SL ||
                        cfg.method == Method::SLDAL ||
                        (cfg.method == Method::DAL && cfg.init == InitSource::SL);
  if (cfg.dump_value && !has_grid)
    throw ConfigError("--dump-value needs a method that solves on the grid");
}

} // namespace

Scenario load_scenario(const std::string &source) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), source) != names.end())
    return preset(source);
  if (!fs::exists(source))
    throw ConfigError("unknown preset or missing scenario file '" + source + "'");
  return parse_scenario_file(source);
}

std::optional<int> parse_command_line(int argc, const char *const *argv,
                                      RunConfig &cfg, std::ostream &out,
                                      std::ostream &err) {
  CLI::App app{"Finite-horizon optimal control of SEIR epidemic models"};
  app.name("seirctl");
  std::string method = std::string(to_string(cfg.method));
  std::string init;
  std::string format = "csv";
  std::string integrator = "euler";
  std::vector<int> mesh;
  cfg.workers = default_workers();

  app.add_option("-s,--scenario", cfg.scenario,
                 "preset (test1..test5) or YAML scenario file")
      ->capture_default_str();
  app.add_option("-m,--method", method, "uncontrolled, sl, dal or sl-dal")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid.nodes_per_axis, "nodes per state axis")
      ->capture_default_str();
  app.add_option("--control-mesh", mesh, "control mesh points per axis: N or N1,N2")
      ->delimiter(',')
      ->expected(1, 2);
  app.add_option("--dt", cfg.dt, "time step")->capture_default_str();
  app.add_option("--dal-sigma0", cfg.dal.sigma0, "initial descent step")
      ->capture_default_str();
  app.add_option("--dal-eps", cfg.dal.eps, "tolerance on the cost decrease")
      ->capture_default_str();
  app.add_option("--dal-max-iters", cfg.dal.max_iters, "iteration cap")
      ->capture_default_str();
  app.add_option("--dal-max-halvings", cfg.dal.max_halvings,
                 "step halvings per line search")
      ->capture_default_str();
  app.add_option("--integrator", integrator, "euler or rk4 (dal only)")
      ->capture_default_str();
  app.add_option("--init-control", init,
                 "initial DAL schedule: 'u1,u2' constants, 'sl', or a CSV file");
  app.add_option("-o,--output-dir", cfg.output_dir, "output directory")
      ->capture_default_str();
  app.add_option("--format", format, "trajectory format: csv or json")
      ->capture_default_str();
  app.add_flag("--check-optimality", cfg.check_optimality,
               "verify first- and second-order conditions");
  app.add_flag("--summary", cfg.summary,
               "run uncontrolled, sl and sl-dal and print a cost row");
  app.add_flag("--dump-value", cfg.dump_value,
               "write the value function and policy to value.hjbv");
  app.add_option("-j,--threads", cfg.workers,
                 "worker threads (default: SEIRCTL_THREADS or all cores)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "seirctl: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto m = parse_method(method);
  if (!m) {
    err << "seirctl: unknown method '" << method << "'\n";
    return kExitConfig;
  }
  cfg.method = *m;
  if (mesh.size() == 1) {
    cfg.grid.u1_count = cfg.grid.u2_count = mesh[0];
  } else if (mesh.size() == 2) {
    cfg.grid.u1_count = mesh[0];
    cfg.grid.u2_count = mesh[1];
  }
  if (format == "csv") {
    cfg.format = OutputFormat::Csv;
  } else if (format == "json") {
    cfg.format = OutputFormat::Json;
  } else {
    err << "seirctl: unknown format '" << format << "'\n";
    return kExitConfig;
  }
  if (integrator == "euler") {
    cfg.dal.integrator = Integrator::Euler;
  } else if (integrator == "rk4") {
    cfg.dal.integrator = Integrator::RK4;
  } else {
    err << "seirctl: unknown integrator '" << integrator << "'\n";
    return kExitConfig;
  }
  if (!init.empty()) {
    cfg.init_given = true;
    if (init == "sl") {
      cfg.init = InitSource::SL;
    } else if (auto pair = parse_pair(init)) {
      cfg.init = InitSource::Constants;
      cfg.init_constants = *pair;
    } else {
      cfg.init = InitSource::File;
      cfg.init_file = init;
    }
  }
  return std::nullopt;
}

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  Scenario scn;
  TimeGrid grid;
  std::optional<ControlSchedule> initial;
  try {
    check_config(cfg);
    scn = load_scenario(cfg.scenario);
    try {
      grid = TimeGrid::with_step(scn.t0, scn.T, cfg.dt);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
    if (std::abs(grid.dt() - cfg.dt) > 1e-12 * cfg.dt)
      err << "seirctl: dt adjusted to " << std::setprecision(17) << grid.dt()
          << " so that it divides the horizon\n";
    if (cfg.method == Method::DAL && !cfg.summary) {
      if (cfg.init == InitSource::Constants) {
        initial = ControlSchedule::constant(grid, cfg.init_constants);
      } else if (cfg.init == InitSource::File) {
        std::ifstream in(cfg.init_file);
        if (!in)
          throw ConfigError("cannot open control file '" + cfg.init_file + "'");
        initial = read_control_csv(in, grid, cfg.init_file);
      }
    }
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir))
      throw ConfigError("cannot create output directory '" + cfg.output_dir + "'");
  } catch (const ConfigError &e) {
    err << "seirctl: configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    std::vector<Run> runs;
    std::optional<Vec3> deviation;
    HjbSolution hjb;
    HjbSolution *keep = cfg.dump_value ? &hjb : nullptr;
    if (cfg.summary) {
      runs.push_back({solve_uncontrolled(scn, grid), {}});
      runs.push_back({solve_sl(scn, grid, cfg.grid, cfg.workers, keep), {}});
      runs.push_back({refine_with_dal(scn, runs[1].sol, cfg.dal), {}});
      deviation = trajectory_deviation(runs[1].sol.trajectory,
                                       runs[2].sol.trajectory);
    } else {
      switch (cfg.method) {
      case Method::Uncontrolled:
        runs.push_back({solve_uncontrolled(scn, grid), {}});
        break;
      case Method::SL:
        runs.push_back({solve_sl(scn, grid, cfg.grid, cfg.workers, keep), {}});
        break;
      case Method::DAL:
        if (cfg.init == InitSource::SL) {
          const Solution sl = solve_sl(scn, grid, cfg.grid, cfg.workers, keep);
          Solution d = refine_with_dal(scn, sl, cfg.dal);
          d.method = Method::DAL;
          deviation = trajectory_deviation(sl.trajectory, d.trajectory);
          runs.push_back({std::move(d), {}});
        } else {
          runs.push_back({solve_dal(scn, grid, *initial, cfg.dal), {}});
        }
        break;
      case Method::SLDAL: {
        Solution sl = solve_sl(scn, grid, cfg.grid, cfg.workers, keep);
        Solution d = refine_with_dal(scn, sl, cfg.dal);
        deviation = trajectory_deviation(sl.trajectory, d.trajectory);
        runs.push_back({std::move(sl), {}});
        runs.push_back({std::move(d), {}});
        break;
      }
      }
    }
    if (cfg.check_optimality)
      for (Run &r : runs)
        if (r.sol.method != Method::Uncontrolled)
          r.report = check_optimality(scn, r.sol);

    write_outputs(cfg, scn, grid, runs, deviation);
    if (keep)
      write_value_dump((fs::path(cfg.output_dir) / "value.hjbv").string(), hjb);

    out << std::setprecision(8);
    if (cfg.summary) {
      out << "scenario J_U J_SL J_SL-DAL dev_s dev_e dev_i\n"
          << scn.name << ' ' << runs[0].sol.cost << ' ' << runs[1].sol.cost
          << ' ' << runs[2].sol.cost << ' ' << (*deviation)[0] << ' '
          << (*deviation)[1] << ' ' << (*deviation)[2] << '\n';
    } else {
      for (const Run &r : runs)
        out << to_string(r.sol.method) << " cost " << r.sol.cost << '\n';
      if (deviation)
        out << "deviation_inf " << (*deviation)[0] << ' ' << (*deviation)[1]
            << ' ' << (*deviation)[2] << '\n';
    }
    for (const Run &r : runs)
      if (r.report) {
        out << to_string(r.sol.method) << ":\n";
        write_report_summary(out, *r.report);
      }
  } catch (const ConfigError &e) {
    err << "seirctl: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    err << "seirctl: solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

} // namespace seirctl
