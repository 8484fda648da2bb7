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

#include "seirctl/checks.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace seirctl {

namespace {

void validate_solution(const Solution &sol) {
  const TimeGrid &grid = sol.controls.grid;
  if (!(sol.trajectory.grid == grid) ||
      sol.trajectory.states.size() != static_cast<std::size_t>(grid.n_max) + 1 ||
      sol.controls.controls.size() != sol.trajectory.states.size())
    throw std::invalid_argument("solution trajectory and controls disagree");
}

std::vector<StepCheck> blank_steps(const TimeGrid &grid) {
  std::vector<StepCheck> steps(grid.n_max);
  for (int n = 0; n < grid.n_max; ++n) {
    steps[n].n = n;
    steps[n].t = grid.t(n);
  }
  return steps;
}

std::array<BoundaryClass, 2> classes_at(const ControlProblem &problem,
                                        const ControlPoint &u, double t) {
  const ControlPoint lo = problem.lower_bound(t);
  const ControlPoint hi = problem.upper_bound(t);
  return {classify(u.u1, lo.u1, hi.u1), classify(u.u2, lo.u2, hi.u2)};
}

void summarise(OptimalityReport &r) {
  if (r.steps.empty())
    return;
  std::size_t first_ok = 0, second_ok = 0;
  for (const StepCheck &s : r.steps) {
    first_ok += s.first_pass;
    second_ok += s.second_pass;
    r.max_first_violation = std::max(
        {r.max_first_violation, s.first[0].violation, s.first[1].violation});
    r.max_second_violation = std::max(r.max_second_violation, s.second_violation);
  }
  const double total = static_cast<double>(r.steps.size());
  r.first_pass_fraction = first_ok / total;
  r.second_pass_fraction = second_ok / total;
}

const char *flag(bool b) { return b ? "pass" : "fail"; }

} // namespace

std::string_view to_string(BoundaryClass c) {
  switch (c) {
  case BoundaryClass::Interior:
    return "interior";
  case BoundaryClass::Lower:
    return "lower";
  case BoundaryClass::Upper:
    return "upper";
  case BoundaryClass::Skipped:
    return "skipped";
  }
  return "unknown";
}

BoundaryClass classify(double u, double lo, double hi, double band) {
  if (!(hi > lo))
    return BoundaryClass::Skipped;
  if (u - lo <= band)
    return BoundaryClass::Lower;
  if (hi - u <= band)
    return BoundaryClass::Upper;
  return BoundaryClass::Interior;
}

OptimalityReport check_first_order(const Scenario &scn, const Solution &sol,
                                   double tol) {
  validate_solution(sol);
  const SeirProblem problem(scn);
  const TimeGrid &grid = sol.controls.grid;
  const AdjointTrajectory adj =
      integrate_adjoint(problem, grid, sol.trajectory, sol.controls);
  const std::vector<Vec2> g =
      schedule_gradient(problem, sol.trajectory, adj, sol.controls);

  OptimalityReport r;
  r.has_first = true;
  r.first_tol = tol;
  r.steps = blank_steps(grid);
  for (int n = 0; n < grid.n_max; ++n) {
    StepCheck &s = r.steps[n];
    const auto where = classes_at(problem, sol.controls.controls[n], s.t);
    for (int k = 0; k < 2; ++k) {
      ComponentCheck &c = s.first[k];
      c.where = where[k];
      c.gradient = g[n][k];
      switch (c.where) {
      case BoundaryClass::Interior:
        c.violation = std::abs(c.gradient);
        break;
      case BoundaryClass::Lower:
        c.violation = std::max(0.0, -c.gradient);
        break;
      case BoundaryClass::Upper:
        c.violation = std::max(0.0, c.gradient);
        break;
      case BoundaryClass::Skipped:
        c.violation = 0.0;
        break;
      }
      c.pass = c.violation <= tol;
    }
    s.first_pass = s.first[0].pass && s.first[1].pass;
  }
  summarise(r);
  return r;
}

OptimalityReport check_second_order(const Scenario &scn, const Solution &sol,
                                    double tol) {
  validate_solution(sol);
  const SeirProblem problem(scn);
  const TimeGrid &grid = sol.controls.grid;
  const AdjointTrajectory adj =
      integrate_adjoint(problem, grid, sol.trajectory, sol.controls);

  OptimalityReport r;
  r.has_second = true;
  r.second_tol = tol;
  r.steps = blank_steps(grid);
  for (int n = 0; n < grid.n_max; ++n) {
    StepCheck &s = r.steps[n];
    const ControlPoint &u = sol.controls.controls[n];
    const Mat2 H = problem.hamiltonian_control_hessian(
        sol.trajectory.states[n], u, adj.costates[n + 1], s.t);
    const auto where = classes_at(problem, u, s.t);
    const bool in0 = where[0] == BoundaryClass::Interior;
    const bool in1 = where[1] == BoundaryClass::Interior;
    s.hessian_diagonal = H.diagonal();
    const bool coupled = H(0, 1) != 0.0 || H(1, 0) != 0.0;
    if (coupled) {
      s.trace = H.trace();
      s.det = H.determinant();
    }
    double worst = 0.0;
    if (in0 && in1 && coupled) {
      worst = std::max({0.0, -*s.trace, -*s.det});
    } else {
      if (in0)
        worst = std::max(worst, -H(0, 0));
      if (in1)
        worst = std::max(worst, -H(1, 1));
    }
    s.second_violation = worst;
    s.second_pass = worst <= tol;
  }
  summarise(r);
  return r;
}

OptimalityReport check_optimality(const Scenario &scn, const Solution &sol,
                                  double first_tol, double second_tol) {
  OptimalityReport r = check_first_order(scn, sol, first_tol);
  const OptimalityReport second = check_second_order(scn, sol, second_tol);
  r.has_second = true;
  r.second_tol = second_tol;
  for (std::size_t n = 0; n < r.steps.size(); ++n) {
    StepCheck &s = r.steps[n];
    const StepCheck &o = second.steps[n];
    s.hessian_diagonal = o.hessian_diagonal;
    s.trace = o.trace;
    s.det = o.det;
    s.second_violation = o.second_violation;
    s.second_pass = o.second_pass;
  }
  r.max_first_violation = 0.0;
  r.max_second_violation = 0.0;
  summarise(r);
  return r;
}

void write_report_csv(std::ostream &out, const OptimalityReport &report) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "n,t,u1_class,u1_grad,u1_pass,u2_class,u2_grad,u2_pass,"
         "h11,h22,trace,det,first_pass,second_pass\n";
  for (const StepCheck &s : report.steps) {
    out << s.n << ',' << s.t;
    for (const ComponentCheck &c : s.first)
      out << ',' << to_string(c.where) << ',' << c.gradient << ','
          << flag(c.pass);
    out << ',' << s.hessian_diagonal[0] << ',' << s.hessian_diagonal[1] << ',';
    if (s.trace)
      out << *s.trace;
    out << ',';
    if (s.det)
      out << *s.det;
    out << ',' << (report.has_first ? flag(s.first_pass) : "")
        << ',' << (report.has_second ? flag(s.second_pass) : "") << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

void write_report_summary(std::ostream &out, const OptimalityReport &report) {
  if (report.has_first)
    out << "first order: " << 100.0 * report.first_pass_fraction
        << "% of steps pass at tol " << report.first_tol
        << ", max violation " << report.max_first_violation << '\n';
  if (report.has_second)
    out << "second order: " << 100.0 * report.second_pass_fraction
        << "% of steps pass at tol " << report.second_tol
        << ", max violation " << report.max_second_violation << '\n';
}

} // namespace seirctl
