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

#ifndef SEIRCTL_CHECKS_HPP
#define SEIRCTL_CHECKS_HPP

#include "seirctl/pipeline.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace seirctl {

/// Distance to a bound below which a control component counts as active.
inline constexpr double kBoundaryBand = 1e-6;
inline constexpr double kFirstOrderTol = 1e-3;
inline constexpr double kSecondOrderTol = 1e-8;

enum class BoundaryClass { Interior, Lower, Upper, Skipped };
std::string_view to_string(BoundaryClass c);

BoundaryClass classify(double u, double lo, double hi,
                       double band = kBoundaryBand);

struct ComponentCheck {
  BoundaryClass where = BoundaryClass::Interior;
  double gradient = 0.0;  ///< dH/du at this step
  double violation = 0.0; ///< zero when the sign condition holds exactly
  bool pass = true;
};

struct StepCheck {
  int n = 0;
  double t = 0.0;
  std::array<ComponentCheck, 2> first{};
  Vec2 hessian_diagonal = Vec2::Zero();
  std::optional<double> trace; ///< coupled Hessians only
  std::optional<double> det;
  double second_violation = 0.0;
  bool first_pass = true;
  bool second_pass = true;
};

struct OptimalityReport {
  std::vector<StepCheck> steps; ///< one per decision step n < n_max
  bool has_first = false;
  bool has_second = false;
  double first_tol = kFirstOrderTol;
  double second_tol = kSecondOrderTol;
  double max_first_violation = 0.0;
  double max_second_violation = 0.0;
  double first_pass_fraction = 1.0;
  double second_pass_fraction = 1.0;
};

/// Sign conditions of dH/du along the solution: zero at interior
/// components, non-negative at the lower bound, non-positive at the upper.
/// Components whose admissible interval is a single point are skipped.
OptimalityReport check_first_order(const Scenario &scn, const Solution &sol,
                                   double tol = kFirstOrderTol);

/// Non-negativity of the control Hessian of H restricted to the interior
/// components: diagonal entries in general, trace and determinant when the
/// Hessian couples two interior components.
OptimalityReport check_second_order(const Scenario &scn, const Solution &sol,
                                    double tol = kSecondOrderTol);

/// Both checks merged into one report.
OptimalityReport check_optimality(const Scenario &scn, const Solution &sol,
                                  double first_tol = kFirstOrderTol,
                                  double second_tol = kSecondOrderTol);

/// One CSV record per step, with a header line.
void write_report_csv(std::ostream &out, const OptimalityReport &report);
void write_report_summary(std::ostream &out, const OptimalityReport &report);

} // namespace seirctl

#endif // SEIRCTL_CHECKS_HPP
