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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Full-resolution solves make this take tens of minutes.

#include "seirctl/checks.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace seirctl {
namespace {

using testing::rel_err;

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel_dev(double got, double ref) { return (got - ref) / ref; }

/// "name got (+x.xx%)" with a mark when outside the band.
std::string against(const std::string &name, double got, double ref,
                    double band, bool &ok) {
  const double r = rel_dev(got, ref);
  const bool in = std::abs(r) <= band;
  ok = ok && in;
  return name + " " + fmt("%.6f", got) + " vs " + fmt("%.6f", ref) + " (" +
         fmt("%+.2f%%", 100.0 * r) + (in ? ")" : ", out)");
}

bool strictly_decreasing(const std::vector<double> &h) {
  for (std::size_t k = 1; k < h.size(); ++k)
    if (!(h[k] < h[k - 1]))
      return false;
  return true;
}

void progress(const std::string &msg) {
  static const auto start = std::chrono::steady_clock::now();
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::cerr << "[" << fmt("%7.1f", s) << "s] " << msg << std::endl;
}

const std::vector<std::string> kTests{"test1", "test2", "test3", "test4", "test5"};

const std::map<std::string, double> kUncontrolled{
    {"test1", 20.990463}, {"test2", 20.180178}, {"test3", 21.443343},
    {"test4", 6.413498},  {"test5", 6.936510}};
const std::map<std::string, double> kCombined{
    {"test1", 20.521155}, {"test2", 19.865984}, {"test3", 19.977807},
    {"test4", 0.296018},  {"test5", 0.333978}};
constexpr double kSlTest1 = 20.526586;
constexpr double kTest3Right = 22.321380;
constexpr double kTest3Left = 20.092728;
constexpr double kTest5Cold = 0.362150;

TimeGrid default_grid(const Scenario &scn) {
  return TimeGrid::with_step(scn.t0, scn.T, 0.05);
}

// -- criterion 1 ----------------------------------------------------------

Verdict uncontrolled_costs() {
  Verdict v{1, "uncontrolled costs within 2% (Euler, dt 0.05)", true, ""};
  for (const std::string &name : kTests) {
    const Scenario scn = preset(name);
    const Solution u = solve_uncontrolled(scn, default_grid(scn));
    v.detail += against(name, u.cost, kUncontrolled.at(name), 0.02, v.pass) + "; ";
  }
  return v;
}

// -- criterion 8 ----------------------------------------------------------

Verdict oracle_equivalence() {
  Verdict v{8, "tiny instances: solver and reconstruction equal exhaustive search", true, ""};
  std::mt19937_64 rng(20260814);
  constexpr int kInstances = 24;
  int exact = 0;
  std::map<int, int> by_steps;
  int largest_grid = 0;
  std::string first_miss;
  for (int k = 0; k < kInstances; ++k) {
    GridSpec spec;
    int n_max = 0;
    double budget = 0.0;
    do {
      spec.nodes_per_axis = 2 + static_cast<int>(rng() % 4);
      spec.u1_count = 2 + static_cast<int>(rng() % 2);
      spec.u2_count = 2 + static_cast<int>(rng() % 2);
      n_max = 1 + static_cast<int>(rng() % 4);
      budget = std::pow(8.0 * spec.u1_count * spec.u2_count, n_max) *
               std::pow(spec.nodes_per_axis, 3);
    } while (budget > 5e7);
    const Variant variant = testing::all_variants()[rng() % 5];
    Scenario scn = testing::scenario_for(variant);
    for (;;) {
      scn.x0 = {testing::uniform(rng, 0.0, 1.0), testing::uniform(rng, 0.0, 0.3),
                testing::uniform(rng, 0.0, 0.3)};
      if (scn.x0.s + scn.x0.e + scn.x0.i <= 1.0)
        break;
    }
    const double t0 = testing::uniform(rng, 0.0, 8.0);
    const double dt = testing::uniform(rng, 0.02, 0.2);
    scn.t0 = t0;
    scn.T = t0 + n_max * dt;
    const TimeGrid grid(scn.t0, scn.T, n_max);
    ++by_steps[n_max];
    largest_grid = std::max(largest_grid, spec.nodes_per_axis);

    const HjbSolution sol = solve_hjb(scn, spec, grid, 1);
    const SlTrajectory rec = reconstruct_trajectory(scn, sol.values);
    const testing::EnumerationOracle oracle(scn, spec, grid);
    std::vector<ControlPoint> controls;
    std::vector<State> states;
    const double cost = oracle.reconstructed_cost(&controls, &states);

    bool same = rec.cost == cost;
    const int m = spec.nodes_per_axis;
    for (int c = 0; c < m && same; ++c)
      for (int b = 0; b < m && same; ++b)
        for (int a = 0; a < m && same; ++a)
          same = sol.values.slice(0)[sol.values.index(a, b, c)] ==
                 oracle.value(a, b, c, 0);
    for (int n = 0; n < n_max && same; ++n)
      same = rec.controls.controls[n] == controls[n];
    same = same && rec.trajectory.states == states;
    exact += same;
    if (!same && first_miss.empty())
      first_miss = " first mismatch: instance " + std::to_string(k);
  }
  v.pass = exact == kInstances;
  v.detail = std::to_string(exact) + "/" + std::to_string(kInstances) +
             " instances bit-identical (grid <= 5^3, mesh <= 3x3, n_max <= 4);"
             " largest grid " + std::to_string(largest_grid) + "^3; instances per n_max";
  for (const auto &[steps, count] : by_steps)
    v.detail += " " + std::to_string(steps) + ":" + std::to_string(count);
  v.detail += first_miss;
  return v;
}

// -- criterion 9 ----------------------------------------------------------

Verdict gradient_suite() {
  Verdict v{9, "analytic gradients match central differences to 1e-6 relative", true, ""};
  constexpr int kPoints = 120;
  constexpr double kTol = 1e-6;
  for (Variant variant : testing::all_variants()) {
    const Scenario scn = testing::scenario_for(variant);
    const SeirProblem problem(scn);
    std::mt19937_64 rng(9000 + static_cast<int>(variant));
    double worst = 0.0;
    for (int k = 0; k < kPoints; ++k) {
      const State x = testing::random_state(rng, scn.costs.i_max);
      const ControlPoint u = testing::random_control(rng);
      const double t = testing::uniform(rng, 0.0, 12.0);
      const Vec3 p{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2),
                   testing::uniform(rng, -2, 2)};
      const Mat3 fy = grad_dynamics_state(scn, x, u, t);
      const Mat32 fu = grad_dynamics_control(scn, x, u, t);
      const Vec3 ly = grad_cost_state(scn, x, u, t);
      const Vec2 lu = grad_cost_control(scn, x, u, t);
      const Vec3 gy = grad_final_cost(scn, x);
      const Mat2 huu = hess_cost_control(scn, x, u, t);
      const Vec2 hu = hamiltonian_control_gradient(problem, x, u, p, t);
      auto note = [&](double a, double b) { worst = std::max(worst, rel_err(a, b)); };
      for (int c = 0; c < 3; ++c) {
        auto at = [&](double h) {
          Vec3 y = x.vec();
          y[c] += h;
          return State::from(y);
        };
        for (int r = 0; r < 3; ++r)
          note(fy(r, c), testing::central(
                             [&](double h) { return dynamics(scn, at(h), u, t)[r]; }, 0.0));
        note(ly[c], testing::central(
                        [&](double h) { return running_cost(scn, at(h), u, t); }, 0.0));
        note(gy[c], testing::central(
                        [&](double h) { return final_cost(scn, at(h)); }, 0.0));
      }
      for (int c = 0; c < 2; ++c) {
        auto at = [&](double h) {
          Vec2 w = u.vec();
          w[c] += h;
          return ControlPoint::from(w);
        };
        for (int r = 0; r < 3; ++r)
          note(fu(r, c), testing::central(
                             [&](double h) { return dynamics(scn, x, at(h), t)[r]; }, 0.0));
        note(lu[c], testing::central(
                        [&](double h) { return running_cost(scn, x, at(h), t); }, 0.0));
        note(hu[c], testing::central(
                        [&](double h) { return hamiltonian(problem, x, at(h), p, t); }, 0.0));
        for (int r = 0; r < 2; ++r)
          note(huu(r, c), testing::central(
                              [&](double h) {
                                return hamiltonian_control_gradient(problem, x, at(h), p, t)[r];
                              },
                              0.0));
      }
    }
    const bool ok = worst <= kTol;
    v.pass = v.pass && ok;
    v.detail += std::string(to_string(variant)) + " " + fmt("%.1e", worst) +
                (ok ? "" : " (out)") + "; ";
  }
  v.detail += std::to_string(kPoints) + " points per variant";
  return v;
}

// -- criterion 12 ---------------------------------------------------------

Verdict lqr_fixture() {
  Verdict v{12, "linear-quadratic fixture matches Riccati solution within 1e-3", true, ""};
  const testing::LqrProblem lqr;
  const TimeGrid grid(0.0, 1.0, 1000);
  const DalResult r =
      dal_solve(lqr, grid, ControlSchedule::constant(grid, {0.0, 0.0}));
  double err = 0.0;
  for (int n = 0; n < grid.n_max; ++n)
    err = std::max(err, std::abs(r.controls.controls[n].u1 +
                                 std::sinh(1.0 - grid.t(n)) / std::cosh(1.0)));
  v.pass = r.converged && err <= 1e-3;
  v.detail = "sup |u - u*| = " + fmt("%.3e", err) + " at dt 1e-3, " +
             std::to_string(r.iterations) + " iterations";
  return v;
}

// -- full-resolution runs -------------------------------------------------

struct ScenarioRuns {
  Scenario scn;
  Solution uncontrolled;
  Solution sl;
  Solution combined;
  Solution combined_tight; ///< same warm start, eps 1e-12
  OptimalityReport report;
  OptimalityReport report_tight;
};

ScenarioRuns run_scenario(const std::string &name) {
  ScenarioRuns r;
  r.scn = preset(name);
  const TimeGrid grid = default_grid(r.scn);
  r.uncontrolled = solve_uncontrolled(r.scn, grid);
  progress(name + ": semi-Lagrangian solve on 60^3, 30x30 mesh");
  r.sl = solve_sl(r.scn, grid, GridSpec{}, default_workers());
  progress(name + ": DAL refinement");
  r.combined = refine_with_dal(r.scn, r.sl);
  DalConfig tight;
  tight.eps = 1e-12;
  r.combined_tight = refine_with_dal(r.scn, r.sl, tight);
  r.report = check_optimality(r.scn, r.combined);
  r.report_tight = check_optimality(r.scn, r.combined_tight);
  progress(name + ": J_U " + fmt("%.6f", r.uncontrolled.cost) + " J_SL " +
           fmt("%.6f", r.sl.cost) + " J_SL-DAL " + fmt("%.6f", r.combined.cost));
  return r;
}

int main_impl() {
  std::vector<Verdict> out;
  auto record = [&](Verdict v) {
    progress(std::string(v.pass ? "PASS" : "FAIL") + " criterion " +
             std::to_string(v.id));
    out.push_back(std::move(v));
  };

  record(uncontrolled_costs());
  record(oracle_equivalence());
  record(gradient_suite());
  record(lqr_fixture());

  std::map<std::string, ScenarioRuns> runs;
  for (const std::string &name : kTests)
    runs.emplace(name, run_scenario(name));

  const Scenario test3 = preset("test3");
  const TimeGrid grid3 = default_grid(test3);
  progress("test3: cold starts");
  const Solution right =
      solve_dal(test3, grid3, ControlSchedule::constant(grid3, {0.0, 0.0}));
  const Solution left =
      solve_dal(test3, grid3, ControlSchedule::constant(grid3, {0.0, 1.0}));
  const Scenario test5 = preset("test5");
  const TimeGrid grid5 = default_grid(test5);
  progress("test5: cold start");
  const Solution cold5 =
      solve_dal(test5, grid5, ControlSchedule::constant(grid5, {0.0, 0.0}));

  {
    Verdict v{2, "combined costs within 2%; Test 1 SL within 5%", true, ""};
    for (const std::string &name : kTests)
      v.detail += against(name, runs.at(name).combined.cost, kCombined.at(name),
                          0.02, v.pass) + "; ";
    v.detail += against("test1 SL", runs.at("test1").sl.cost, kSlTest1, 0.05, v.pass);
    record(v);
  }
  {
    Verdict v{3, "Test 3 cold starts reach both stationary costs; warm start lower", true, ""};
    v.detail = against("(0,0)", right.cost, kTest3Right, 0.01, v.pass) + "; " +
               against("(0,1)", left.cost, kTest3Left, 0.01, v.pass) + "; ";
    const double warm = runs.at("test3").combined.cost;
    const bool below = warm < right.cost && warm < left.cost;
    v.pass = v.pass && below;
    v.detail += "SL-DAL " + fmt("%.6f", warm) + (below ? " below both" : " NOT below both");
    record(v);
  }
  {
    Verdict v{4, "Test 5 warm start escapes the cold-start basin", true, ""};
    const double warm = runs.at("test5").combined.cost;
    v.detail = against("cold DAL", cold5.cost, kTest5Cold, 0.02, v.pass) + "; " +
               against("SL-DAL", warm, kCombined.at("test5"), 0.02, v.pass) + "; ";
    const bool lower = warm < cold5.cost;
    v.pass = v.pass && lower;
    v.detail += lower ? "SL-DAL strictly lower" : "SL-DAL NOT lower";
    record(v);
  }
  {
    Verdict v{5, "J_SL-DAL <= J_SL + 1e-10 and J_SL <= J_U on all tests", true, ""};
    for (const std::string &name : kTests) {
      const ScenarioRuns &r = runs.at(name);
      const bool a = r.combined.cost <= r.sl.cost + 1e-10;
      const bool b = r.sl.cost <= r.uncontrolled.cost;
      v.pass = v.pass && a && b;
      v.detail += name + (a && b ? " ok" : " violated") + "; ";
    }
    record(v);
  }
  {
    Verdict v{6, "Tests 4, 5: i(t_n) <= 0.135 along SL-DAL", true, ""};
    for (const char *name : {"test4", "test5"}) {
      double peak = 0.0;
      for (const State &x : runs.at(name).combined.trajectory.states)
        peak = std::max(peak, x.i);
      const bool ok = peak <= 0.13 + 0.005;
      v.pass = v.pass && ok;
      v.detail += std::string(name) + " max i " + fmt("%.5f", peak) + (ok ? "" : " (out)") + "; ";
    }
    record(v);
  }
  {
    Verdict v{7, "SL vs SL-DAL trajectory deviation <= 0.1 per component", true, ""};
    for (const std::string &name : kTests) {
      const ScenarioRuns &r = runs.at(name);
      const Vec3 d = trajectory_deviation(r.sl.trajectory, r.combined.trajectory);
      const bool ok = d.maxCoeff() <= 0.1;
      v.pass = v.pass && ok;
      v.detail += name + " (" + fmt("%.4f", d[0]) + ", " + fmt("%.4f", d[1]) +
                  ", " + fmt("%.4f", d[2]) + ")" + (ok ? "" : " out") + "; ";
    }
    record(v);
  }
  {
    Verdict v{10, "optimality checks pass on 100% of steps (first order 1e-3, second order 1e-8)", true, ""};
    for (const std::string &name : kTests) {
      const ScenarioRuns &r = runs.at(name);
      const bool ok = r.report.first_pass_fraction == 1.0 &&
                      r.report.second_pass_fraction == 1.0;
      v.pass = v.pass && ok;
      v.detail += name + " " + fmt("%.1f", 100 * r.report.first_pass_fraction) +
                  "/" + fmt("%.1f", 100 * r.report.second_pass_fraction) +
                  "% max " + fmt("%.1e", r.report.max_first_violation) +
                  " [eps 1e-12: " +
                  fmt("%.1f", 100 * r.report_tight.first_pass_fraction) + "/" +
                  fmt("%.1f", 100 * r.report_tight.second_pass_fraction) +
                  "%]; ";
    }
    v.detail += "default eps 1e-8 unless bracketed";
    record(v);
  }
  {
    Verdict v{11, "cost history strictly decreasing in every DAL run", true, ""};
    int checked = 0;
    auto check = [&](const std::string &label, const Solution &s) {
      ++checked;
      if (!strictly_decreasing(s.diagnostics.cost_history)) {
        v.pass = false;
        v.detail += label + " not monotone; ";
      }
    };
    for (const std::string &name : kTests)
      check(name + " SL-DAL", runs.at(name).combined);
    check("test3 (0,0)", right);
    check("test3 (0,1)", left);
    check("test5 cold", cold5);
    v.detail += std::to_string(checked) + " runs checked";
    record(v);
  }

  std::sort(out.begin(), out.end(),
            [](const Verdict &a, const Verdict &b) { return a.id < b.id; });
  int failed = 0;
  for (const Verdict &v : out) {
    std::printf("%s %2d %s | %s\n", v.pass ? "PASS" : "FAIL", v.id,
                v.title.c_str(), v.detail.c_str());
    failed += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(out.size()) - failed, out.size());
  return failed == 0 ? 0 : 1;
}

} // namespace
} // namespace seirctl

int main() {
  try {
    return seirctl::main_impl();
  } catch (const std::exception &e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }
}
