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

#include "seirctl/models.hpp"

#include <cmath>

namespace seirctl {

namespace {

constexpr double kItalianPopulation = 58983122.0;

void require(bool ok, const std::string &what) {
  if (!ok)
    throw ConfigError(what);
}

double penalty_derivative(const CostParams &k, double i) {
  const double excess = i - k.i_max;
  if (excess <= 0.0)
    return 0.0;
  if (k.penalty_kind == PenaltyKind::LinearHinge)
    return k.penalty_weight;
  return 2.0 * k.penalty_weight * excess;
}

} // namespace

std::string_view to_string(Variant v) {
  switch (v) {
  case Variant::Basic:
    return "basic";
  case Variant::TemporaryImmunity:
    return "temporary_immunity";
  case Variant::BorderControl:
    return "border_control";
  case Variant::BasicConstrained:
    return "basic_constrained";
  case Variant::ImmunityConstrained:
    return "immunity_constrained";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::Basic, Variant::TemporaryImmunity,
                    Variant::BorderControl, Variant::BasicConstrained,
                    Variant::ImmunityConstrained}) {
    if (to_string(v) == name)
      return v;
  }
  return std::nullopt;
}

State default_initial_state() {
  const double e0 = 3000.0 / kItalianPopulation;
  const double i0 = 1000.0 / kItalianPopulation;
  return {1.0 - e0 - i0, e0, i0};
}

void validate(const Scenario &scn) {
  const EpidemicParams &p = scn.params;
  const CostParams &c = scn.costs;
  require(p.epsilon > 0.0, "epsilon must be positive");
  require(p.gamma > 0.0, "gamma must be positive");
  require(p.mu >= 0.0, "mu must be nonnegative");
  require(p.p > 0.0 && p.p <= 1.0, "vaccine efficacy p must lie in (0, 1]");
  require(p.delta >= 0.0, "delta must be nonnegative");
  double frac_sum = 0.0;
  for (double f : p.delta_fracs) {
    require(f >= 0.0, "delta_fracs must be nonnegative");
    frac_sum += f;
  }
  require(std::abs(frac_sum - 1.0) <= 1e-9, "delta_fracs must sum to 1");
  require(p.beta.period > 0.0, "beta period must be positive");
  require(p.beta.base > 0.0, "beta base value must be positive");
  for (const auto &w : p.beta.windows) {
    require(w.value > 0.0, "beta window values must be positive");
    require(w.from <= w.to, "beta window must satisfy from <= to");
  }

  if (scn.variant == Variant::BorderControl)
    require(p.delta > 0.0, "border_control requires a positive delta");
  else
    require(p.delta == 0.0, "delta is only meaningful for border_control");
  if (has_temporary_immunity(scn.variant))
    require(p.mu > 0.0, std::string(to_string(scn.variant)) +
                            " requires a positive mu");
  else
    require(p.mu == 0.0, "mu is only meaningful for immunity variants");

  for (double w : {c.c1, c.c2, c.c_lambda, c.c_nu0, c.c_nu, c.c_phi, c.c_i,
                   c.c_e, c.penalty_weight})
    require(w >= 0.0, "cost weights must be nonnegative");
  require(c.i_max > 0.0 && c.i_max <= 1.0, "i_max must lie in (0, 1]");

  const State &x = scn.x0;
  for (double v : {x.s, x.e, x.i})
    require(v >= 0.0 && v <= 1.0, "x0 components must lie in [0, 1]");
  require(x.s + x.e + x.i <= 1.0 + 1e-12, "x0 must satisfy s + e + i <= 1");

  require(scn.t0 >= 0.0, "t0 must be nonnegative");
  require(scn.t0 < scn.T, "t0 must be smaller than T");
  const ControlBounds &b = scn.bounds;
  require(b.u1_max > 0.0 && b.u1_max < 1.0, "u1_max must lie in (0, 1)");
  require(b.u2_cap >= 0.0, "u2_cap must be nonnegative");
  require(b.ramp_start <= b.ramp_end, "ramp_start must not exceed ramp_end");
}

Scenario preset(std::string_view name) {
  Scenario scn;
  scn.name = std::string(name);
  scn.x0 = default_initial_state();
  if (name == "test1") {
    scn.variant = Variant::Basic;
  } else if (name == "test2") {
    scn.variant = Variant::TemporaryImmunity;
    scn.params.mu = 1.0 / 3.0;
  } else if (name == "test3") {
    scn.variant = Variant::BorderControl;
    scn.params.delta = 0.75;
    scn.bounds.ramp_start = 0.0;
    scn.bounds.ramp_end = 0.0;
  } else if (name == "test4") {
    scn.variant = Variant::BasicConstrained;
  } else if (name == "test5") {
    scn.variant = Variant::ImmunityConstrained;
    scn.params.mu = 1.0 / 3.0;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return scn;
}

std::vector<std::string> preset_names() {
  return {"test1", "test2", "test3", "test4", "test5"};
}

double beta_at(const EpidemicParams &params, double t) {
  const BetaSchedule &b = params.beta;
  double phase = std::fmod(t, b.period);
  if (phase < 0.0)
    phase += b.period;
  for (const auto &w : b.windows) {
    if (w.from <= phase && phase <= w.to)
      return w.value;
  }
  return b.base;
}

double nu_max_at(double t) { return ControlBounds{}.u2_max(t); }

double u2_max_at(const Scenario &scn, double t) {
  return scn.bounds.u2_max(t);
}

ControlPoint no_intervention(const Scenario &scn) {
  if (scn.variant == Variant::BorderControl)
    return {0.0, 1.0};
  return {0.0, 0.0};
}

Coefficients coefficients_at(const Scenario &scn, double t) {
  const EpidemicParams &p = scn.params;
  Coefficients c;
  c.variant = scn.variant;
  c.t = t;
  c.beta = beta_at(p, t);
  c.epsilon = p.epsilon;
  c.gamma = p.gamma;
  c.mu = p.mu;
  c.p = p.p;
  for (std::size_t j = 0; j < 4; ++j)
    c.inflow[j] = p.delta * p.delta_fracs[j];
  c.delta_t = p.delta * t;
  c.costs = &scn.costs;
  return c;
}

Vec3 dynamics(const Scenario &scn, const State &x, const ControlPoint &u,
              double t) {
  return rhs(coefficients_at(scn, t), x, u);
}

double running_cost(const Scenario &scn, const State &x,
                    const ControlPoint &u, double t) {
  return running_cost(coefficients_at(scn, t), x, u);
}

Mat3 grad_dynamics_state(const Scenario &scn, const State &x,
                         const ControlPoint &u, double t) {
  const Coefficients c = coefficients_at(scn, t);
  const double b = c.beta * (1.0 - u.u1);
  Mat3 J;
  // Rows are components of f, columns are (s, e, i).
  J << -b * x.i, 0.0, -b * x.s,
        b * x.i, -c.epsilon, b * x.s,
        0.0, c.epsilon, -c.gamma;
  if (scn.variant != Variant::BorderControl)
    J(0, 0) -= c.p * u.u2;
  if (has_temporary_immunity(scn.variant)) {
    J(0, 0) -= c.mu;
    J(0, 1) -= c.mu;
    J(0, 2) -= c.mu;
  }
  return J;
}

Mat32 grad_dynamics_control(const Scenario &scn, const State &x,
                            const ControlPoint &, double t) {
  const Coefficients c = coefficients_at(scn, t);
  const double bsi = c.beta * x.s * x.i;
  Mat32 J;
  if (scn.variant == Variant::BorderControl) {
    J << bsi, c.inflow[0],
        -bsi, c.inflow[1],
         0.0, c.inflow[2];
  } else {
    J << bsi, -c.p * x.s,
        -bsi, 0.0,
         0.0, 0.0;
  }
  return J;
}

Vec3 grad_cost_state(const Scenario &scn, const State &x,
                     const ControlPoint &u, double) {
  const CostParams &k = scn.costs;
  const double vaccine_s = 2.0 * k.c_nu * x.s * u.u2 * u.u2;
  const double infection_i = 2.0 * (k.c1 + k.c2) * x.i - k.c1 * (1.0 - x.i);
  switch (scn.variant) {
  case Variant::BorderControl:
    return {0.0, 0.0, infection_i};
  case Variant::BasicConstrained:
  case Variant::ImmunityConstrained:
    return {vaccine_s, 0.0, penalty_derivative(k, x.i)};
  case Variant::Basic:
  case Variant::TemporaryImmunity:
    break;
  }
  return {vaccine_s, 0.0, infection_i};
}

Vec2 grad_cost_control(const Scenario &scn, const State &x,
                       const ControlPoint &u, double t) {
  const CostParams &k = scn.costs;
  if (scn.variant == Variant::BorderControl) {
    const double growth = scn.params.delta * t;
    const double population = 1.0 + growth * u.u2;
    const double closed = 1.0 - u.u2;
    return {2.0 * k.c_lambda * u.u1 * population,
            k.c_lambda * u.u1 * u.u1 * growth +
                k.c_phi * (closed * closed * growth -
                           2.0 * closed * population)};
  }
  return {2.0 * k.c_lambda * u.u1,
          2.0 * (k.c_nu0 + k.c_nu * x.s * x.s) * u.u2};
}

Vec3 grad_final_cost(const Scenario &scn, const State &x) {
  if (scn.variant != Variant::Basic &&
      scn.variant != Variant::TemporaryImmunity)
    return Vec3::Zero();
  const CostParams &k = scn.costs;
  return {0.0, 2.0 * k.c_e * (x.e - k.e_bar), 2.0 * k.c_i * (x.i - k.i_bar)};
}

Mat2 hess_cost_control(const Scenario &scn, const State &x,
                       const ControlPoint &u, double t) {
  const CostParams &k = scn.costs;
  Mat2 H;
  if (scn.variant == Variant::BorderControl) {
    const double growth = scn.params.delta * t;
    const double cross = 2.0 * k.c_lambda * u.u1 * growth;
    H << 2.0 * k.c_lambda * (1.0 + growth * u.u2), cross,
        cross, 2.0 * k.c_phi * (1.0 + growth * (3.0 * u.u2 - 2.0));
    return H;
  }
  H << 2.0 * k.c_lambda, 0.0,
       0.0, 2.0 * (k.c_nu0 + k.c_nu * x.s * x.s);
  return H;
}

} // namespace seirctl
