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

// Shared fixtures and independent oracles for the test suites.

#ifndef SEIRCTL_TESTS_SUPPORT_HPP
#define SEIRCTL_TESTS_SUPPORT_HPP

#include "seirctl/hjb.hpp"
#include "seirctl/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace seirctl::testing {

inline const std::vector<Variant> &all_variants() {
  static const std::vector<Variant> v{
      Variant::Basic, Variant::TemporaryImmunity, Variant::BorderControl,
      Variant::BasicConstrained, Variant::ImmunityConstrained};
  return v;
}

/// Preset whose variant is `v`.
inline Scenario scenario_for(Variant v) {
  switch (v) {
  case Variant::Basic:
    return preset("test1");
  case Variant::TemporaryImmunity:
    return preset("test2");
  case Variant::BorderControl:
    return preset("test3");
  case Variant::BasicConstrained:
    return preset("test4");
  case Variant::ImmunityConstrained:
    return preset("test5");
  }
  return preset("test1");
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Point strictly inside the simplex, away from the hinge kink of the
/// state penalty so that central differences stay on one smooth branch.
inline State random_state(std::mt19937_64 &rng, double i_kink = -1.0) {
  for (;;) {
    State x{uniform(rng, 0.01, 0.98), uniform(rng, 0.01, 0.5),
            uniform(rng, 0.01, 0.5)};
    if (x.s + x.e + x.i >= 0.99)
      continue;
    if (i_kink >= 0.0 && std::abs(x.i - i_kink) < 1e-3)
      continue;
    return x;
  }
}

inline ControlPoint random_control(std::mt19937_64 &rng) {
  return {uniform(rng, 0.01, 0.89), uniform(rng, 0.01, 0.99)};
}

/// Relative mismatch |a - b| / max(1, |a|, |b|) with an absolute floor so
/// that vanishing entries compare on an absolute scale.
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Central difference of a scalar function of one variable.
template <class F> double central(F &&f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Scalar linear-quadratic problem y' = u, l = y^2 + u^2, g = 0 on [0, T],
/// carried in the s component. Optimal feedback u = -tanh(T - t) y and
/// costate p = 2 tanh(T - t) y.
class LqrProblem final : public ControlProblem {
public:
  explicit LqrProblem(double y0 = 1.0, double T = 1.0) : y0_(y0), T_(T) {}

  State initial_state() const override { return {y0_, 0.0, 0.0}; }
  double t0() const override { return 0.0; }
  double horizon() const override { return T_; }
  Vec3 dynamics(const State &, const ControlPoint &u, double) const override {
    return {u.u1, 0.0, 0.0};
  }
  double running_cost(const State &x, const ControlPoint &u,
                      double) const override {
    return x.s * x.s + u.u1 * u.u1;
  }
  double final_cost(const State &) const override { return 0.0; }
  Mat3 dynamics_state_jacobian(const State &, const ControlPoint &,
                               double) const override {
    return Mat3::Zero();
  }
  Mat32 dynamics_control_jacobian(const State &, const ControlPoint &,
                                  double) const override {
    Mat32 J = Mat32::Zero();
    J(0, 0) = 1.0;
    return J;
  }
  Vec3 cost_state_gradient(const State &x, const ControlPoint &,
                           double) const override {
    return {2.0 * x.s, 0.0, 0.0};
  }
  Vec2 cost_control_gradient(const State &, const ControlPoint &u,
                             double) const override {
    return {2.0 * u.u1, 0.0};
  }
  Vec3 final_cost_gradient(const State &) const override { return Vec3::Zero(); }
  Mat2 hamiltonian_control_hessian(const State &, const ControlPoint &,
                                   const Vec3 &, double) const override {
    Mat2 H = Mat2::Zero();
    H(0, 0) = 2.0;
    return H;
  }
  ControlPoint lower_bound(double) const override { return {-10.0, 0.0}; }
  ControlPoint upper_bound(double) const override { return {10.0, 0.0}; }

  double riccati(double t) const { return std::tanh(T_ - t); }

private:
  double y0_;
  double T_;
};

/// Exhaustive dynamic-programming oracle for tiny grids. Values are
/// recomputed by recursion over every control sequence with no storage of
/// intermediate slices; interpolation uses the library's trilinear rule.
class EnumerationOracle {
public:
  EnumerationOracle(const Scenario &scn, const GridSpec &spec,
                    const TimeGrid &grid)
      : scn_(scn), spec_(spec), grid_(grid) {}

  /// Mesh points on [0, hi] with the last point pinned to hi.
  static std::vector<double> axis(int count, double hi) {
    std::vector<double> v;
    for (int j = 0; j < count; ++j)
      v.push_back(j == count - 1 ? hi : hi * j / (count - 1));
    return v;
  }

  std::vector<ControlPoint> mesh(int n) const {
    const double t = grid_.t(n);
    const double u2_hi = scn_.bounds.u2_max(t);
    const auto u1 = axis(spec_.u1_count, scn_.bounds.u1_max);
    const auto u2 = u2_hi > 0.0 ? axis(spec_.u2_count, u2_hi)
                                : std::vector<double>{0.0};
    std::vector<ControlPoint> out;
    for (double a : u1)
      for (double b : u2)
        out.push_back({a, b});
    return out;
  }

  State node(int a, int b, int c) const {
    const int m = spec_.nodes_per_axis - 1;
    return {static_cast<double>(a) / m, static_cast<double>(b) / m,
            static_cast<double>(c) / m};
  }

  bool active(int a, int b, int c) const {
    if (!spec_.mask_simplex || scn_.variant == Variant::BorderControl)
      return true;
    const int m = spec_.nodes_per_axis - 1;
    return a + b + c <= m + 2;
  }

  /// Value at node (a, b, c) and slice n.
  double value(int a, int b, int c, int n) const {
    const State x = node(a, b, c);
    if (n == grid_.n_max || !active(a, b, c))
      return final_cost(scn_, x);
    return best(x, n).second;
  }

  /// Minimising mesh control and value of one step from point x at slice n.
  std::pair<ControlPoint, double> best(const State &x, int n) const {
    const Coefficients coef = coefficients_at(scn_, grid_.t(n));
    const double dt = grid_.dt();
    double v_best = std::numeric_limits<double>::infinity();
    ControlPoint u_best{};
    for (const ControlPoint &u : mesh(n)) {
      const Vec3 f = rhs(coef, x, u);
      const State foot{x.s + dt * f[0], x.e + dt * f[1], x.i + dt * f[2]};
      const double v = trilinear(spec_.nodes_per_axis, foot,
                                 [&](int a, int b, int c) {
                                   return value(a, b, c, n + 1);
                                 }) +
                       dt * running_cost(coef, x, u);
      if (v < v_best) {
        v_best = v;
        u_best = u;
      }
    }
    return {u_best, v_best};
  }

  /// Greedy walk from x0 using `best`, with the rectangle-rule cost.
  double reconstructed_cost(std::vector<ControlPoint> *controls = nullptr,
                            std::vector<State> *states = nullptr) const {
    State x = scn_.x0;
    const double dt = grid_.dt();
    double running = 0.0;
    for (int n = 0; n < grid_.n_max; ++n) {
      const ControlPoint u = best(x, n).first;
      if (controls)
        controls->push_back(u);
      if (states)
        states->push_back(x);
      const double t = grid_.t(n);
      running += running_cost(scn_, x, u, t);
      const Vec3 f = dynamics(scn_, x, u, t);
      x = {x.s + dt * f[0], x.e + dt * f[1], x.i + dt * f[2]};
    }
    if (states)
      states->push_back(x);
    return dt * running + final_cost(scn_, x);
  }

private:
  Scenario scn_;
  GridSpec spec_;
  TimeGrid grid_;
};

} // namespace seirctl::testing

#endif // SEIRCTL_TESTS_SUPPORT_HPP
