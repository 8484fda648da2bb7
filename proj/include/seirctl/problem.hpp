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

#ifndef SEIRCTL_PROBLEM_HPP
#define SEIRCTL_PROBLEM_HPP

#include "seirctl/models.hpp"

namespace seirctl {

/// A finite-horizon problem with three states and two box-constrained
/// controls, as seen by the integrators and the adjoint-based solver.
class ControlProblem {
public:
  virtual ~ControlProblem() = default;

  virtual State initial_state() const = 0;
  virtual double t0() const = 0;
  virtual double horizon() const = 0;

  virtual Vec3 dynamics(const State &x, const ControlPoint &u,
                        double t) const = 0;
  virtual double running_cost(const State &x, const ControlPoint &u,
                              double t) const = 0;
  virtual double final_cost(const State &x) const = 0;

  virtual Mat3 dynamics_state_jacobian(const State &x, const ControlPoint &u,
                                       double t) const = 0;
  virtual Mat32 dynamics_control_jacobian(const State &x,
                                          const ControlPoint &u,
                                          double t) const = 0;
  virtual Vec3 cost_state_gradient(const State &x, const ControlPoint &u,
                                   double t) const = 0;
  virtual Vec2 cost_control_gradient(const State &x, const ControlPoint &u,
                                     double t) const = 0;
  virtual Vec3 final_cost_gradient(const State &x) const = 0;

  /// d^2 H / d u^2 for a given costate.
  virtual Mat2 hamiltonian_control_hessian(const State &x,
                                           const ControlPoint &u,
                                           const Vec3 &p, double t) const = 0;

  virtual ControlPoint lower_bound(double t) const = 0;
  virtual ControlPoint upper_bound(double t) const = 0;
};

/// Adapter exposing a Scenario through the ControlProblem interface.
class SeirProblem final : public ControlProblem {
public:
  explicit SeirProblem(Scenario scn) : scn_(std::move(scn)) {}

  const Scenario &scenario() const { return scn_; }

  State initial_state() const override { return scn_.x0; }
  double t0() const override { return scn_.t0; }
  double horizon() const override { return scn_.T; }

  Vec3 dynamics(const State &x, const ControlPoint &u,
                double t) const override {
    return seirctl::dynamics(scn_, x, u, t);
  }
  double running_cost(const State &x, const ControlPoint &u,
                      double t) const override {
    return seirctl::running_cost(scn_, x, u, t);
  }
  double final_cost(const State &x) const override {
    return seirctl::final_cost(scn_, x);
  }
  Mat3 dynamics_state_jacobian(const State &x, const ControlPoint &u,
                               double t) const override {
    return grad_dynamics_state(scn_, x, u, t);
  }
  Mat32 dynamics_control_jacobian(const State &x, const ControlPoint &u,
                                  double t) const override {
    return grad_dynamics_control(scn_, x, u, t);
  }
  Vec3 cost_state_gradient(const State &x, const ControlPoint &u,
                           double t) const override {
    return grad_cost_state(scn_, x, u, t);
  }
  Vec2 cost_control_gradient(const State &x, const ControlPoint &u,
                             double t) const override {
    return grad_cost_control(scn_, x, u, t);
  }
  Vec3 final_cost_gradient(const State &x) const override {
    return grad_final_cost(scn_, x);
  }
  Mat2 hamiltonian_control_hessian(const State &x, const ControlPoint &u,
                                   const Vec3 &, double t) const override {
    return hess_cost_control(scn_, x, u, t);
  }
  ControlPoint lower_bound(double) const override { return {0.0, 0.0}; }
  ControlPoint upper_bound(double t) const override {
    return {scn_.bounds.u1_max, scn_.bounds.u2_max(t)};
  }

private:
  Scenario scn_;
};

} // namespace seirctl

#endif // SEIRCTL_PROBLEM_HPP
