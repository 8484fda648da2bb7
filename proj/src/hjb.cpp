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

#include "seirctl/hjb.hpp"
#include "seirctl/dal.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace seirctl {

namespace {

constexpr char kMagic[4] = {'H', 'J', 'B', 'V'};
constexpr std::uint32_t kFormatVersion = 1;

std::vector<double> axis_points(int count, double hi) {
  std::vector<double> pts(count);
  for (int j = 0; j < count; ++j)
    pts[j] = j == count - 1 ? hi : hi * j / (count - 1);
  return pts;
}

double node_coord(int k, int nodes) {
  return static_cast<double>(k) / (nodes - 1);
}

struct Choice {
  double value;
  std::uint16_t j, k;
};

// Minimum of V^{n+1}(x + dt f) + dt l over the mesh, scanning u1-major so
// that the strict comparison keeps the lexicographically lowest argmin.
Choice minimise(const Coefficients &coef, const ControlMesh &mesh,
                const State &x, double dt, int nodes, const double *next) {
  const auto n = static_cast<std::size_t>(nodes);
  auto at = [&](int a, int b, int c) {
    return next[static_cast<std::size_t>(a) +
                n * (static_cast<std::size_t>(b) +
                     n * static_cast<std::size_t>(c))];
  };
  Choice best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t j = 0; j < mesh.u1.size(); ++j) {
    for (std::size_t k = 0; k < mesh.u2.size(); ++k) {
      const ControlPoint u{mesh.u1[j], mesh.u2[k]};
      const State foot = euler_step(x, rhs(coef, x, u), dt);
      const double v =
          trilinear(nodes, foot, at) + dt * running_cost(coef, x, u);
      if (v < best.value)
        best = {v, static_cast<std::uint16_t>(j),
                static_cast<std::uint16_t>(k)};
    }
  }
  return best;
}

template <class T> void put(std::ostream &out, T v) {
  static_assert(std::endian::native == std::endian::little,
                "value dump assumes a little-endian host");
  out.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <class T> T get(std::istream &in) {
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof v);
  if (!in)
    throw std::runtime_error("value dump is truncated");
  return v;
}

} // namespace

void GridSpec::validate() const {
  if (nodes_per_axis < 2)
    throw std::invalid_argument("nodes_per_axis must be at least 2");
  if (u1_count < 2 || u2_count < 2)
    throw std::invalid_argument("control mesh needs at least 2 points per axis");
  if (u1_count >= FeedbackPolicy::kInactive ||
      u2_count >= FeedbackPolicy::kInactive)
    throw std::invalid_argument("control mesh too large for 16-bit indices");
}

State ValueGrid::node(std::size_t idx) const {
  const auto n = static_cast<std::size_t>(spec.nodes_per_axis);
  const int a = static_cast<int>(idx % n);
  const int b = static_cast<int>((idx / n) % n);
  const int c = static_cast<int>(idx / (n * n));
  return {node_coord(a, spec.nodes_per_axis), node_coord(b, spec.nodes_per_axis),
          node_coord(c, spec.nodes_per_axis)};
}

ControlMesh control_mesh(const Scenario &scn, const GridSpec &spec, double t) {
  ControlMesh mesh;
  mesh.u1 = axis_points(spec.u1_count, scn.bounds.u1_max);
  const double hi = u2_max_at(scn, t);
  mesh.u2 = hi > 0.0 ? axis_points(spec.u2_count, hi) : std::vector<double>{0.0};
  return mesh;
}

bool node_is_active(const Scenario &scn, const GridSpec &spec, int a, int b,
                    int c) {
  if (!spec.mask_simplex || !is_conservative(scn.variant))
    return true;
  // s + e + i <= 1 + 2 dx, in index units.
  return a + b + c <= spec.nodes_per_axis + 1;
}

int default_workers() {
  if (const char *env = std::getenv("SEIRCTL_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

HjbSolution solve_hjb(const Scenario &scn, const GridSpec &spec,
                      const TimeGrid &grid, int workers) {
  validate(scn);
  spec.validate();
  const int nodes = spec.nodes_per_axis;
  const std::size_t count = spec.node_count();

  HjbSolution sol;
  ValueGrid &vg = sol.values;
  vg.spec = spec;
  vg.grid = grid;
  vg.values.resize(count * (static_cast<std::size_t>(grid.n_max) + 1));
  vg.active.resize(count);

  std::vector<std::size_t> active;
  std::vector<State> points(count);
  for (int c = 0; c < nodes; ++c)
    for (int b = 0; b < nodes; ++b)
      for (int a = 0; a < nodes; ++a) {
        const std::size_t idx = vg.index(a, b, c);
        points[idx] = {node_coord(a, nodes), node_coord(b, nodes),
                       node_coord(c, nodes)};
        vg.active[idx] = node_is_active(scn, spec, a, b, c);
        if (vg.active[idx])
          active.push_back(idx);
      }

  // Every slice starts from g; only active nodes are overwritten.
  {
    auto terminal = vg.slice(grid.n_max);
    for (std::size_t idx = 0; idx < count; ++idx)
      terminal[idx] = final_cost(scn, points[idx]);
    for (int n = 0; n < grid.n_max; ++n)
      std::copy(terminal.begin(), terminal.end(), vg.slice(n).begin());
  }

  FeedbackPolicy &policy = sol.policy;
  policy.nodes = count;
  policy.slices = grid.n_max;
  policy.index.assign(count * static_cast<std::size_t>(grid.n_max),
                      {FeedbackPolicy::kInactive, FeedbackPolicy::kInactive});

  const double dt = grid.dt();
  const int nworkers =
      std::max(1, std::min<int>(workers, static_cast<int>(active.size())));
  for (int n = grid.n_max - 1; n >= 0; --n) {
    const double t = grid.t(n);
    const Coefficients coef = coefficients_at(scn, t);
    const ControlMesh mesh = control_mesh(scn, spec, t);
    const double *next = vg.slice(n + 1).data();
    double *cur = vg.slice(n).data();
    auto *pol = policy.index.data() + static_cast<std::size_t>(n) * count;

    std::mutex err_mu;
    std::string error;
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = lo; q < hi; ++q) {
        const std::size_t idx = active[q];
        const Choice best = minimise(coef, mesh, points[idx], dt, nodes, next);
        if (!std::isfinite(best.value)) {
          std::ostringstream msg;
          msg << "non-finite value at node " << idx << " (s=" << points[idx].s
              << ", e=" << points[idx].e << ", i=" << points[idx].i
              << ") in slice " << n;
          std::lock_guard<std::mutex> lock(err_mu);
          if (error.empty())
            error = msg.str();
          return;
        }
        cur[idx] = best.value;
        pol[idx] = {best.j, best.k};
      }
    };
    if (nworkers == 1) {
      work(0, active.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (active.size() + nworkers - 1) / nworkers;
      for (int w = 0; w < nworkers; ++w) {
        const std::size_t lo = std::min(active.size(), w * chunk);
        const std::size_t hi = std::min(active.size(), lo + chunk);
        pool.emplace_back(work, lo, hi);
      }
    }
    if (!error.empty())
      throw HjbError(error);
  }
  return sol;
}

double interpolate(const ValueGrid &vg, int n, const State &x) {
  const auto slice = vg.slice(n);
  const auto nodes = static_cast<std::size_t>(vg.spec.nodes_per_axis);
  return trilinear(vg.spec.nodes_per_axis, x, [&](int a, int b, int c) {
    return slice[static_cast<std::size_t>(a) +
                 nodes * (static_cast<std::size_t>(b) +
                          nodes * static_cast<std::size_t>(c))];
  });
}

ControlPoint synthesize_feedback(const Scenario &scn, const ValueGrid &vg,
                                 const State &x, int n) {
  if (n < 0 || n >= vg.grid.n_max)
    throw std::out_of_range("feedback requested outside [0, n_max)");
  const double t = vg.grid.t(n);
  const ControlMesh mesh = control_mesh(scn, vg.spec, t);
  const Choice best =
      minimise(coefficients_at(scn, t), mesh, x, vg.grid.dt(),
               vg.spec.nodes_per_axis, vg.slice(n + 1).data());
  return {mesh.u1[best.j], mesh.u2[best.k]};
}

SlTrajectory reconstruct_trajectory(const Scenario &scn, const ValueGrid &vg) {
  const TimeGrid &grid = vg.grid;
  SlTrajectory out;
  out.controls.grid = grid;
  out.trajectory.grid = grid;
  out.controls.controls.resize(grid.n_max + 1);
  out.trajectory.states.resize(grid.n_max + 1);
  out.trajectory.states[0] = scn.x0;
  const double dt = grid.dt();
  for (int n = 0; n < grid.n_max; ++n) {
    const State &x = out.trajectory.states[n];
    const ControlPoint u = synthesize_feedback(scn, vg, x, n);
    const State next = euler_step(x, dynamics(scn, x, u, grid.t(n)), dt);
    if (!std::isfinite(next.s) || !std::isfinite(next.e) ||
        !std::isfinite(next.i))
      throw IntegrationError("non-finite state", n + 1);
    out.controls.controls[n] = u;
    out.trajectory.states[n + 1] = next;
  }
  out.controls.controls[grid.n_max] = out.controls.controls[grid.n_max - 1];
  out.cost = quadrature_cost(SeirProblem(scn), out.trajectory, out.controls);
  return out;
}

void write_value_dump(const std::string &path, const HjbSolution &sol) {
  const ValueGrid &vg = sol.values;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(vg.spec.nodes_per_axis));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(vg.grid.n_max));
  put<double>(out, vg.grid.t0);
  put<double>(out, vg.grid.T);
  out.write(reinterpret_cast<const char *>(vg.values.data()),
            static_cast<std::streamsize>(vg.values.size() * sizeof(double)));
  for (const auto &pair : sol.policy.index) {
    put<std::uint16_t>(out, pair[0]);
    put<std::uint16_t>(out, pair[1]);
  }
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

HjbSolution read_value_dump(const std::string &path, const GridSpec &mesh) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error(path + " is not a value dump");
  if (get<std::uint32_t>(in) != kFormatVersion)
    throw std::runtime_error(path + " has an unsupported format version");
  const auto nodes = get<std::uint32_t>(in);
  const auto n_max = get<std::uint32_t>(in);
  const auto t0 = get<double>(in);
  const auto T = get<double>(in);

  HjbSolution sol;
  ValueGrid &vg = sol.values;
  vg.spec = mesh;
  vg.spec.nodes_per_axis = static_cast<int>(nodes);
  vg.spec.validate();
  vg.grid = TimeGrid(t0, T, static_cast<int>(n_max));
  const std::size_t count = vg.spec.node_count();
  vg.values.resize(count * (static_cast<std::size_t>(n_max) + 1));
  in.read(reinterpret_cast<char *>(vg.values.data()),
          static_cast<std::streamsize>(vg.values.size() * sizeof(double)));
  if (!in)
    throw std::runtime_error("value dump is truncated");

  FeedbackPolicy &policy = sol.policy;
  policy.nodes = count;
  policy.slices = static_cast<int>(n_max);
  policy.index.resize(count * n_max);
  for (auto &pair : policy.index) {
    pair[0] = get<std::uint16_t>(in);
    pair[1] = get<std::uint16_t>(in);
  }
  vg.active.resize(count);
  for (std::size_t idx = 0; idx < count; ++idx)
    vg.active[idx] = policy.index[idx][0] != FeedbackPolicy::kInactive;
  return sol;
}

} // namespace seirctl
