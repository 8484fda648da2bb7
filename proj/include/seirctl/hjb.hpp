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

#ifndef SEIRCTL_HJB_HPP
#define SEIRCTL_HJB_HPP

#include "seirctl/ode.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seirctl {

/// Regular mesh on [0,1]^3 plus a tensor mesh on the control box.
struct GridSpec {
  int nodes_per_axis = 60;
  int u1_count = 30;
  int u2_count = 30;
  /// Restrict the computation to nodes with s + e + i <= 1 + 2 dx for
  /// variants that conserve population.
  bool mask_simplex = true;

  double spacing() const { return 1.0 / (nodes_per_axis - 1); }
  std::size_t node_count() const {
    const auto n = static_cast<std::size_t>(nodes_per_axis);
    return n * n * n;
  }
  void validate() const;
};

class HjbError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Trilinear interpolation of nodal data on the unit cube. `at(a, b, c)`
/// returns the value at node (a, b, c); the point is clamped to the cube.
template <class NodeValue>
inline double trilinear(int nodes, const State &x, NodeValue &&at) {
  const double scale = nodes - 1;
  auto locate = [&](double coord, int &k, double &w) {
    const double q = std::clamp(coord, 0.0, 1.0) * scale;
    k = std::min(static_cast<int>(q), nodes - 2);
    w = q - k;
  };
  int a, b, c;
  double wa, wb, wc;
  locate(x.s, a, wa);
  locate(x.e, b, wb);
  locate(x.i, c, wc);
  const double v00 = at(a, b, c) * (1.0 - wa) + at(a + 1, b, c) * wa;
  const double v10 = at(a, b + 1, c) * (1.0 - wa) + at(a + 1, b + 1, c) * wa;
  const double v01 = at(a, b, c + 1) * (1.0 - wa) + at(a + 1, b, c + 1) * wa;
  const double v11 =
      at(a, b + 1, c + 1) * (1.0 - wa) + at(a + 1, b + 1, c + 1) * wa;
  const double v0 = v00 * (1.0 - wb) + v10 * wb;
  const double v1 = v01 * (1.0 - wb) + v11 * wb;
  return v0 * (1.0 - wc) + v1 * wc;
}

/// Value function V^n on every node for n = 0 .. n_max, x-fastest order.
struct ValueGrid {
  GridSpec spec;
  TimeGrid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> active;

  std::size_t index(int a, int b, int c) const {
    const auto n = static_cast<std::size_t>(spec.nodes_per_axis);
    return static_cast<std::size_t>(a) +
           n * (static_cast<std::size_t>(b) + n * static_cast<std::size_t>(c));
  }
  State node(std::size_t idx) const;
  std::span<const double> slice(int n) const {
    return {values.data() + static_cast<std::size_t>(n) * spec.node_count(),
            spec.node_count()};
  }
  std::span<double> slice(int n) {
    return {values.data() + static_cast<std::size_t>(n) * spec.node_count(),
            spec.node_count()};
  }
};

/// Argmin mesh indices (u1, u2) per slice n < n_max and node.
struct FeedbackPolicy {
  static constexpr std::uint16_t kInactive = 0xFFFF;
  std::size_t nodes = 0;
  int slices = 0;
  std::vector<std::array<std::uint16_t, 2>> index;

  std::array<std::uint16_t, 2> at(int n, std::size_t node) const {
    return index[static_cast<std::size_t>(n) * nodes + node];
  }
};

/// Discrete controls available at one time slice. The u2 axis is rescaled
/// to [0, u2_max(t)] and collapses to {0} when that bound is zero.
struct ControlMesh {
  std::vector<double> u1;
  std::vector<double> u2;
};
ControlMesh control_mesh(const Scenario &scn, const GridSpec &spec, double t);

/// Whether node (a, b, c) is updated by the solver.
bool node_is_active(const Scenario &scn, const GridSpec &spec, int a, int b,
                    int c);

struct HjbSolution {
  ValueGrid values;
  FeedbackPolicy policy;
};

/// Worker count from SEIRCTL_THREADS, else the hardware concurrency.
int default_workers();

/// Semi-Lagrangian backward recursion
///   V^n(x) = min_a V^{n+1}(x + dt f(x, a, t_n)) + dt l(x, a, t_n),
/// V^{n_max} = g. Ties go to the lowest (u1, u2) mesh index.
HjbSolution solve_hjb(const Scenario &scn, const GridSpec &spec,
                      const TimeGrid &grid, int workers = default_workers());

double interpolate(const ValueGrid &vg, int n, const State &x);

/// Minimises V^{n+1}(x + dt f) + dt l over the mesh at the query point.
ControlPoint synthesize_feedback(const Scenario &scn, const ValueGrid &vg,
                                 const State &x, int n);

struct SlTrajectory {
  ControlSchedule controls;
  Trajectory trajectory;
  double cost = 0.0;
};

/// Closed-loop Euler walk from x0; the synthesised controls form the
/// discrete open-loop schedule (last entry repeats the previous one).
SlTrajectory reconstruct_trajectory(const Scenario &scn, const ValueGrid &vg);

/// Binary dump: "HJBV", u32 version, u32 nodes_per_axis, u32 n_max, f64 t0,
/// f64 T, then (n_max + 1) slices of f64 values and n_max slices of u16
/// index pairs, all little-endian and x-fastest.
void write_value_dump(const std::string &path, const HjbSolution &sol);
/// Mesh counts are not part of the file; they come from `mesh`. Nodes whose
/// slice-0 policy entry is the inactive marker are flagged inactive.
HjbSolution read_value_dump(const std::string &path, const GridSpec &mesh);

} // namespace seirctl

#endif // SEIRCTL_HJB_HPP
