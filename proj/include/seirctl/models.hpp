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

#ifndef SEIRCTL_MODELS_HPP
#define SEIRCTL_MODELS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seirctl {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

/// Raised for malformed or inconsistent problem definitions.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The five controlled SEIR problems. The second control is a vaccination
/// rate for every variant except BorderControl, where it is border openness.
enum class Variant {
  Basic,
  TemporaryImmunity,
  BorderControl,
  BasicConstrained,
  ImmunityConstrained,
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

inline bool has_temporary_immunity(Variant v) {
  return v == Variant::TemporaryImmunity || v == Variant::ImmunityConstrained;
}
inline bool is_state_constrained(Variant v) {
  return v == Variant::BasicConstrained || v == Variant::ImmunityConstrained;
}
/// Population is conserved (s + e + i <= 1) for every variant but border control.
inline bool is_conservative(Variant v) { return v != Variant::BorderControl; }

/// Compartment fractions. The recovered fraction is implicit.
struct State {
  double s = 0.0;
  double e = 0.0;
  double i = 0.0;

  Vec3 vec() const { return {s, e, i}; }
  static State from(const Vec3 &v) { return {v[0], v[1], v[2]}; }
  bool operator==(const State &) const = default;
};

/// (restriction intensity, vaccination rate or border openness).
struct ControlPoint {
  double u1 = 0.0;
  double u2 = 0.0;

  Vec2 vec() const { return {u1, u2}; }
  static ControlPoint from(const Vec2 &v) { return {v[0], v[1]}; }
  bool operator==(const ControlPoint &) const = default;
};

/// Piecewise-constant transmission rate over t mod period. Windows are
/// closed intervals; the first matching window wins.
struct BetaSchedule {
  struct Window {
    double from = 0.0;
    double to = 0.0;
    double value = 0.0;
  };
  double period = 4.0;
  double base = 16.0;
  std::vector<Window> windows{{2.0, 3.0, 4.0}};
};

struct EpidemicParams {
  double epsilon = 9.0;
  double gamma = 4.0;
  double mu = 0.0;
  double p = 0.9;
  double delta = 0.0;
  std::array<double, 4> delta_fracs{0.5, 0.01, 0.005, 0.485};
  BetaSchedule beta;
};

enum class PenaltyKind {
  QuadraticHinge, ///< w * max(0, i - i_max)^2
  LinearHinge,    ///< w * max(0, i - i_max)
};

struct CostParams {
  double c1 = 3.5;
  double c2 = 14.0;
  double c_lambda = 0.35;
  double c_nu0 = 0.025;
  double c_nu = 0.05;
  double c_phi = 0.15;
  double c_i = 35.0;
  double c_e = 35.0;
  double i_bar = 0.0;
  double e_bar = 0.0;
  double penalty_weight = 1.0e3;
  PenaltyKind penalty_kind = PenaltyKind::QuadraticHinge;
  double i_max = 0.13;
};

/// Box [0, u1_max] x [0, u2_max(t)], where u2_max ramps linearly from 0 at
/// ramp_start to u2_cap at ramp_end and is 0 before ramp_start.
struct ControlBounds {
  double u1_max = 0.9;
  double u2_cap = 1.0;
  double ramp_start = 4.0;
  double ramp_end = 5.0;

  double u2_max(double t) const {
    if (t < ramp_start)
      return 0.0;
    if (t < ramp_end)
      return u2_cap * (t - ramp_start) / (ramp_end - ramp_start);
    return u2_cap;
  }
};

struct Scenario {
  std::string name = "custom";
  Variant variant = Variant::Basic;
  EpidemicParams params;
  CostParams costs;
  State x0;
  double t0 = 0.0;
  double T = 12.0;
  ControlBounds bounds;
};

/// Throws ConfigError when a field violates its invariant.
void validate(const Scenario &scn);

/// Built-in problems `test1` .. `test5`.
Scenario preset(std::string_view name);
std::vector<std::string> preset_names();

/// Initial data: 1000 infective, 3000 exposed, no recovered, normalised by
/// the population of Italy.
State default_initial_state();

double beta_at(const EpidemicParams &params, double t);
double nu_max_at(double t);
double u2_max_at(const Scenario &scn, double t);

/// Control that corresponds to doing nothing: no restriction, no vaccines,
/// borders open.
ControlPoint no_intervention(const Scenario &scn);

/// Scenario constants frozen at one instant. Hot loops build one of these
/// per time step and then evaluate many (state, control) pairs with it.
struct Coefficients {
  Variant variant = Variant::Basic;
  double t = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double p = 0.0;
  std::array<double, 4> inflow{}; ///< delta * delta_j
  double delta_t = 0.0;           ///< delta * t, the population growth proxy
  const CostParams *costs = nullptr;
};

Coefficients coefficients_at(const Scenario &scn, double t);

inline Vec3 rhs(const Coefficients &c, const State &x, const ControlPoint &u) {
  const double infection = c.beta * (1.0 - u.u1) * x.s * x.i;
  switch (c.variant) {
  case Variant::BorderControl:
    return {-infection + u.u2 * c.inflow[0],
            infection - c.epsilon * x.e + u.u2 * c.inflow[1],
            c.epsilon * x.e - c.gamma * x.i + u.u2 * c.inflow[2]};
  case Variant::TemporaryImmunity:
  case Variant::ImmunityConstrained:
    return {-infection - c.p * u.u2 * x.s + c.mu * (1.0 - x.s - x.e - x.i),
            infection - c.epsilon * x.e, c.epsilon * x.e - c.gamma * x.i};
  case Variant::Basic:
  case Variant::BasicConstrained:
    break;
  }
  return {-infection - c.p * u.u2 * x.s, infection - c.epsilon * x.e,
          c.epsilon * x.e - c.gamma * x.i};
}

inline double state_penalty(const CostParams &k, double i) {
  const double excess = std::max(0.0, i - k.i_max);
  if (k.penalty_kind == PenaltyKind::LinearHinge)
    return k.penalty_weight * excess;
  return k.penalty_weight * excess * excess;
}

inline double running_cost(const Coefficients &c, const State &x,
                           const ControlPoint &u) {
  const CostParams &k = *c.costs;
  switch (c.variant) {
  case Variant::BorderControl: {
    const double population = 1.0 + c.delta_t * u.u2;
    const double closed = 1.0 - u.u2;
    return (k.c1 + k.c2) * x.i * x.i + 0.5 * k.c1 * (1.0 - x.i) * (1.0 - x.i) +
           k.c_lambda * u.u1 * u.u1 * population +
           k.c_phi * closed * closed * population;
  }
  case Variant::BasicConstrained:
  case Variant::ImmunityConstrained:
    return k.c_lambda * u.u1 * u.u1 +
           (k.c_nu0 + k.c_nu * x.s * x.s) * u.u2 * u.u2 +
           state_penalty(k, x.i);
  case Variant::Basic:
  case Variant::TemporaryImmunity:
    break;
  }
  return (k.c1 + k.c2) * x.i * x.i + 0.5 * k.c1 * (1.0 - x.i) * (1.0 - x.i) +
         k.c_lambda * u.u1 * u.u1 +
         (k.c_nu0 + k.c_nu * x.s * x.s) * u.u2 * u.u2;
}

inline double final_cost(const Scenario &scn, const State &x) {
  if (scn.variant != Variant::Basic &&
      scn.variant != Variant::TemporaryImmunity)
    return 0.0;
  const CostParams &k = scn.costs;
  return k.c_i * (x.i - k.i_bar) * (x.i - k.i_bar) +
         k.c_e * (x.e - k.e_bar) * (x.e - k.e_bar);
}

Vec3 dynamics(const Scenario &scn, const State &x, const ControlPoint &u,
              double t);
double running_cost(const Scenario &scn, const State &x,
                    const ControlPoint &u, double t);

// Closed-form partial derivatives.
Mat3 grad_dynamics_state(const Scenario &scn, const State &x,
                         const ControlPoint &u, double t);
Mat32 grad_dynamics_control(const Scenario &scn, const State &x,
                            const ControlPoint &u, double t);
Vec3 grad_cost_state(const Scenario &scn, const State &x,
                     const ControlPoint &u, double t);
Vec2 grad_cost_control(const Scenario &scn, const State &x,
                       const ControlPoint &u, double t);
Vec3 grad_final_cost(const Scenario &scn, const State &x);

/// Hessian of the running cost in the controls. Every variant is
/// control-affine, so this is also the Hamiltonian's control Hessian.
Mat2 hess_cost_control(const Scenario &scn, const State &x,
                       const ControlPoint &u, double t);

} // namespace seirctl

#endif // SEIRCTL_MODELS_HPP
