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

#include "seirctl/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace seirctl {

namespace {

enum class Range { Any, Positive, NonNegative, UnitOpenLeft, UnitOpen, UnitClosed };

const char *describe(Range r) {
  switch (r) {
  case Range::Positive:
    return "must be positive";
  case Range::NonNegative:
    return "must be nonnegative";
  case Range::UnitOpenLeft:
    return "must lie in (0, 1]";
  case Range::UnitOpen:
    return "must lie in (0, 1)";
  case Range::UnitClosed:
    return "must lie in [0, 1]";
  case Range::Any:
    break;
  }
  return "";
}

bool in_range(double v, Range r) {
  switch (r) {
  case Range::Positive:
    return v > 0.0;
  case Range::NonNegative:
    return v >= 0.0;
  case Range::UnitOpenLeft:
    return v > 0.0 && v <= 1.0;
  case Range::UnitOpen:
    return v > 0.0 && v < 1.0;
  case Range::UnitClosed:
    return v >= 0.0 && v <= 1.0;
  case Range::Any:
    break;
  }
  return std::isfinite(v);
}

class Reader {
public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Mark &m, const std::string &msg) const {
    std::ostringstream out;
    out << origin_;
    if (!m.is_null())
      out << ':' << m.line + 1 << ':' << m.column + 1;
    out << ": " << msg;
    throw ConfigError(out.str());
  }

  void only(const YAML::Node &map, std::initializer_list<std::string_view> keys) const {
    for (auto it = map.begin(); it != map.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        fail(it->first.Mark(), "unknown field '" + key + "'");
    }
  }

  /// Child mapping or an undefined node when absent.
  YAML::Node section(const YAML::Node &map, const char *key) const {
    const YAML::Node child = map[key];
    if (child && !child.IsMap())
      fail(child.Mark(), std::string("'") + key + "' must be a mapping");
    return child;
  }

  double scalar(const YAML::Node &node, const std::string &key, Range r) const {
    if (!node.IsScalar())
      fail(node.Mark(), "'" + key + "' must be a number");
    const std::string text = node.Scalar();
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
      fail(node.Mark(), "'" + key + "' must be a number, got '" + text + "'");
    if (!in_range(v, r))
      fail(node.Mark(), "'" + key + "' " +
                            (r == Range::Any ? "must be finite" : describe(r)));
    return v;
  }

  /// Overwrites `out` when the field is present.
  bool number(const YAML::Node &map, const char *key, double &out,
              Range r = Range::Any) const {
    if (!map)
      return false;
    const YAML::Node node = map[key];
    if (!node)
      return false;
    out = scalar(node, key, r);
    return true;
  }

  std::string text(const YAML::Node &node, const std::string &key) const {
    if (!node.IsScalar())
      fail(node.Mark(), "'" + key + "' must be a string");
    return node.Scalar();
  }

private:
  std::string origin_;
};

Scenario read(const YAML::Node &root, const Reader &rd) {
  if (!root.IsMap())
    rd.fail(root.Mark(), "scenario must be a mapping");
  rd.only(root, {"name", "variant", "t0", "T", "initial_state", "epidemic",
                 "costs", "bounds"});

  Scenario scn;
  scn.x0 = default_initial_state();
  if (const YAML::Node n = root["name"])
    scn.name = rd.text(n, "name");

  const YAML::Node vnode = root["variant"];
  if (!vnode)
    rd.fail(root.Mark(), "missing field 'variant'");
  const std::string vname = rd.text(vnode, "variant");
  const auto variant = parse_variant(vname);
  if (!variant)
    rd.fail(vnode.Mark(), "unknown variant '" + vname + "'");
  scn.variant = *variant;
  if (scn.variant == Variant::BorderControl) {
    // Border openness has no vaccination ramp.
    scn.bounds.ramp_start = 0.0;
    scn.bounds.ramp_end = 0.0;
  }

  rd.number(root, "t0", scn.t0, Range::NonNegative);
  rd.number(root, "T", scn.T, Range::Positive);
  if (scn.t0 >= scn.T)
    rd.fail(root["T"] ? root["T"].Mark() : root.Mark(), "T must exceed t0");

  if (const YAML::Node x = rd.section(root, "initial_state")) {
    rd.only(x, {"s", "e", "i"});
    rd.number(x, "s", scn.x0.s, Range::UnitClosed);
    rd.number(x, "e", scn.x0.e, Range::UnitClosed);
    rd.number(x, "i", scn.x0.i, Range::UnitClosed);
    if (scn.x0.s + scn.x0.e + scn.x0.i > 1.0 + 1e-12)
      rd.fail(x.Mark(), "initial_state must satisfy s + e + i <= 1");
  }

  const YAML::Node epi = rd.section(root, "epidemic");
  EpidemicParams &p = scn.params;
  if (epi) {
    rd.only(epi, {"epsilon", "gamma", "mu", "p", "delta", "delta_fracs", "beta"});
    rd.number(epi, "epsilon", p.epsilon, Range::Positive);
    rd.number(epi, "gamma", p.gamma, Range::Positive);
    rd.number(epi, "p", p.p, Range::UnitOpenLeft);
  }
  const YAML::Mark epi_mark = epi ? epi.Mark() : root.Mark();
  const bool has_mu = rd.number(epi, "mu", p.mu, Range::NonNegative);
  if (has_temporary_immunity(scn.variant)) {
    if (!has_mu)
      rd.fail(epi_mark, "missing field 'mu' (required for " + vname + ")");
    if (!(p.mu > 0.0))
      rd.fail(epi["mu"].Mark(), "'mu' must be positive for " + vname);
  } else if (has_mu && p.mu != 0.0) {
    rd.fail(epi["mu"].Mark(), "'mu' is only meaningful for immunity variants");
  }
  const bool has_delta = rd.number(epi, "delta", p.delta, Range::NonNegative);
  if (scn.variant == Variant::BorderControl) {
    if (!has_delta)
      rd.fail(epi_mark, "missing field 'delta' (required for border_control)");
    if (!(p.delta > 0.0))
      rd.fail(epi["delta"].Mark(), "'delta' must be positive for border_control");
  } else if (has_delta && p.delta != 0.0) {
    rd.fail(epi["delta"].Mark(), "'delta' is only meaningful for border_control");
  }
  if (epi) {
    if (const YAML::Node fr = epi["delta_fracs"]) {
      if (!fr.IsSequence() || fr.size() != 4)
        rd.fail(fr.Mark(), "'delta_fracs' must be a list of 4 numbers");
      double sum = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        p.delta_fracs[j] = rd.scalar(fr[j], "delta_fracs", Range::NonNegative);
        sum += p.delta_fracs[j];
      }
      if (std::abs(sum - 1.0) > 1e-9)
        rd.fail(fr.Mark(), "'delta_fracs' must sum to 1");
    }
    if (const YAML::Node beta = rd.section(epi, "beta")) {
      rd.only(beta, {"period", "base", "windows"});
      rd.number(beta, "period", p.beta.period, Range::Positive);
      rd.number(beta, "base", p.beta.base, Range::Positive);
      if (const YAML::Node ws = beta["windows"]) {
        if (!ws.IsSequence())
          rd.fail(ws.Mark(), "'windows' must be a list");
        p.beta.windows.clear();
        for (const YAML::Node &w : ws) {
          if (!w.IsMap())
            rd.fail(w.Mark(), "each beta window must be a mapping");
          rd.only(w, {"from", "to", "value"});
          for (const char *k : {"from", "to", "value"})
            if (!w[k])
              rd.fail(w.Mark(), std::string("beta window is missing '") + k + "'");
          BetaSchedule::Window win;
          rd.number(w, "from", win.from);
          rd.number(w, "to", win.to);
          rd.number(w, "value", win.value, Range::Positive);
          if (win.from > win.to)
            rd.fail(w.Mark(), "beta window must satisfy from <= to");
          p.beta.windows.push_back(win);
        }
      }
    }
  }

  if (const YAML::Node c = rd.section(root, "costs")) {
    rd.only(c, {"c1", "c2", "c_lambda", "c_nu0", "c_nu", "c_phi", "c_i", "c_e",
                "i_bar", "e_bar", "penalty_weight", "penalty_kind", "i_max"});
    CostParams &k = scn.costs;
    rd.number(c, "c1", k.c1, Range::NonNegative);
    rd.number(c, "c2", k.c2, Range::NonNegative);
    rd.number(c, "c_lambda", k.c_lambda, Range::NonNegative);
    rd.number(c, "c_nu0", k.c_nu0, Range::NonNegative);
    rd.number(c, "c_nu", k.c_nu, Range::NonNegative);
    rd.number(c, "c_phi", k.c_phi, Range::NonNegative);
    rd.number(c, "c_i", k.c_i, Range::NonNegative);
    rd.number(c, "c_e", k.c_e, Range::NonNegative);
    rd.number(c, "i_bar", k.i_bar, Range::UnitClosed);
    rd.number(c, "e_bar", k.e_bar, Range::UnitClosed);
    rd.number(c, "penalty_weight", k.penalty_weight, Range::NonNegative);
    rd.number(c, "i_max", k.i_max, Range::UnitOpenLeft);
    if (const YAML::Node pk = c["penalty_kind"]) {
      const std::string kind = rd.text(pk, "penalty_kind");
      if (kind == "quadratic_hinge")
        k.penalty_kind = PenaltyKind::QuadraticHinge;
      else if (kind == "linear_hinge")
        k.penalty_kind = PenaltyKind::LinearHinge;
      else
        rd.fail(pk.Mark(), "unknown penalty_kind '" + kind + "'");
    }
  }

  if (const YAML::Node b = rd.section(root, "bounds")) {
    rd.only(b, {"u1_max", "u2_cap", "ramp_start", "ramp_end"});
    ControlBounds &cb = scn.bounds;
    rd.number(b, "u1_max", cb.u1_max, Range::UnitOpen);
    rd.number(b, "u2_cap", cb.u2_cap, Range::NonNegative);
    rd.number(b, "ramp_start", cb.ramp_start);
    rd.number(b, "ramp_end", cb.ramp_end);
    if (cb.ramp_start > cb.ramp_end)
      rd.fail(b.Mark(), "ramp_start must not exceed ramp_end");
  }

  try {
    validate(scn);
  } catch (const ConfigError &e) {
    rd.fail(root.Mark(), e.what());
  }
  return scn;
}

std::string g17(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string &name, const std::string &origin) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ConfigError(origin + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

Csv read_csv(std::istream &in, const std::string &origin) {
  Csv csv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    auto cells = split(line);
    if (csv.header.empty()) {
      csv.header = std::move(cells);
      continue;
    }
    if (cells.size() != csv.header.size())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(csv.header.size()) + " fields");
    std::vector<double> row;
    for (const std::string &c : cells) {
      char *end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": not a number '" + c + "'");
      row.push_back(v);
    }
    csv.rows.push_back(std::move(row));
  }
  if (csv.header.empty())
    throw ConfigError(origin + ": empty CSV");
  return csv;
}

} // namespace

Scenario parse_scenario(const std::string &text, const std::string &origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    rd.fail(e.mark, e.msg);
  }
  return read(root, rd);
}

Scenario parse_scenario_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string format_scenario(const Scenario &scn) {
  const EpidemicParams &p = scn.params;
  const CostParams &c = scn.costs;
  const ControlBounds &b = scn.bounds;
  std::ostringstream out;
  out << "name: " << scn.name << '\n'
      << "variant: " << to_string(scn.variant) << '\n'
      << "t0: " << g17(scn.t0) << '\n'
      << "T: " << g17(scn.T) << '\n'
      << "initial_state:\n"
      << "  s: " << g17(scn.x0.s) << '\n'
      << "  e: " << g17(scn.x0.e) << '\n'
      << "  i: " << g17(scn.x0.i) << '\n'
      << "epidemic:\n"
      << "  epsilon: " << g17(p.epsilon) << '\n'
      << "  gamma: " << g17(p.gamma) << '\n'
      << "  mu: " << g17(p.mu) << '\n'
      << "  p: " << g17(p.p) << '\n'
      << "  delta: " << g17(p.delta) << '\n'
      << "  delta_fracs: [" << g17(p.delta_fracs[0]) << ", "
      << g17(p.delta_fracs[1]) << ", " << g17(p.delta_fracs[2]) << ", "
      << g17(p.delta_fracs[3]) << "]\n"
      << "  beta:\n"
      << "    period: " << g17(p.beta.period) << '\n'
      << "    base: " << g17(p.beta.base) << '\n'
      << "    windows:";
  if (p.beta.windows.empty())
    out << " []";
  out << '\n';
  for (const auto &w : p.beta.windows)
    out << "      - {from: " << g17(w.from) << ", to: " << g17(w.to)
        << ", value: " << g17(w.value) << "}\n";
  out << "costs:\n"
      << "  c1: " << g17(c.c1) << '\n'
      << "  c2: " << g17(c.c2) << '\n'
      << "  c_lambda: " << g17(c.c_lambda) << '\n'
      << "  c_nu0: " << g17(c.c_nu0) << '\n'
      << "  c_nu: " << g17(c.c_nu) << '\n'
      << "  c_phi: " << g17(c.c_phi) << '\n'
      << "  c_i: " << g17(c.c_i) << '\n'
      << "  c_e: " << g17(c.c_e) << '\n'
      << "  i_bar: " << g17(c.i_bar) << '\n'
      << "  e_bar: " << g17(c.e_bar) << '\n'
      << "  penalty_weight: " << g17(c.penalty_weight) << '\n'
      << "  penalty_kind: "
      << (c.penalty_kind == PenaltyKind::LinearHinge ? "linear_hinge"
                                                     : "quadratic_hinge")
      << '\n'
      << "  i_max: " << g17(c.i_max) << '\n'
      << "bounds:\n"
      << "  u1_max: " << g17(b.u1_max) << '\n'
      << "  u2_cap: " << g17(b.u2_cap) << '\n'
      << "  ramp_start: " << g17(b.ramp_start) << '\n'
      << "  ramp_end: " << g17(b.ramp_end) << '\n';
  return out.str();
}

void write_trajectory_csv(std::ostream &out, const Scenario &scn,
                          const Trajectory &traj,
                          const ControlSchedule &controls) {
  if (!(traj.grid == controls.grid) ||
      traj.states.size() != controls.controls.size())
    throw std::invalid_argument("trajectory and controls are on different grids");
  const std::vector<double> r = recovered_fraction(scn, traj, controls);
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17) << "t,s,e,i,r,u1,u2\n";
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const State &x = traj.states[n];
    const ControlPoint &u = controls.controls[n];
    out << traj.grid.t(static_cast<int>(n)) << ',' << x.s << ',' << x.e << ','
        << x.i << ',' << r[n] << ',' << u.u1 << ',' << u.u2 << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

TrajectoryTable read_trajectory_csv(std::istream &in, const std::string &origin) {
  const Csv csv = read_csv(in, origin);
  if (csv.rows.size() < 2)
    throw ConfigError(origin + ": trajectory needs at least two rows");
  const std::size_t ct = csv.column("t", origin), cs = csv.column("s", origin),
                    ce = csv.column("e", origin), ci = csv.column("i", origin),
                    c1 = csv.column("u1", origin), c2 = csv.column("u2", origin);
  TrajectoryTable tab;
  try {
    tab.grid = TimeGrid(csv.rows.front()[ct], csv.rows.back()[ct],
                        static_cast<int>(csv.rows.size()) - 1);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(origin + ": " + e.what());
  }
  tab.trajectory.grid = tab.grid;
  tab.controls.grid = tab.grid;
  for (const auto &row : csv.rows) {
    tab.trajectory.states.push_back({row[cs], row[ce], row[ci]});
    tab.controls.controls.push_back({row[c1], row[c2]});
  }
  return tab;
}

ControlSchedule read_control_csv(std::istream &in, const TimeGrid &grid,
                                 const std::string &origin) {
  const Csv csv = read_csv(in, origin);
  const std::size_t c1 = csv.column("u1", origin), c2 = csv.column("u2", origin);
  if (csv.rows.size() != static_cast<std::size_t>(grid.n_max) + 1)
    throw ConfigError(origin + ": expected " + std::to_string(grid.n_max + 1) +
                      " control rows, found " + std::to_string(csv.rows.size()));
  ControlSchedule u{grid, {}};
  for (const auto &row : csv.rows)
    u.controls.push_back({row[c1], row[c2]});
  return u;
}

} // namespace seirctl
