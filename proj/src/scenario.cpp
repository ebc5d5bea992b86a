#include "stlplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stlplan {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &msg) {
  throw std::runtime_error("scenario: " + path + ": " + msg);
}

const json &field(const json &j, const char *key, const std::string &path) {
  auto it = j.find(key);
  if (it == j.end())
    fail(path, "missing field '" + std::string(key) + "'");
  return *it;
}

double num(const json &j, const std::string &path) {
  if (!j.is_number())
    fail(path, "expected a number");
  return j.get<double>();
}

Vec vec(const json &j, const std::string &path, std::size_t want = 0) {
  if (!j.is_array())
    fail(path, "expected an array");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
  if (want && out.size() != want)
    fail(path, "expected " + std::to_string(want) + " numbers, got " +
                   std::to_string(out.size()));
  return out;
}

Polytope parse_region(const json &j, const std::string &path, std::size_t dim) {
  if (!j.is_object())
    fail(path, "expected an object with 'box' or 'H'/'b'");
  if (j.contains("box")) {
    const json &b = j["box"];
    if (!b.is_array() || b.size() != 2)
      fail(path + ".box", "expected [lo, hi]");
    return Polytope::box(vec(b[0], path + ".box[0]", dim),
                         vec(b[1], path + ".box[1]", dim));
  }
  if (j.contains("H") && j.contains("b")) {
    const json &hj = j["H"];
    if (!hj.is_array() || hj.empty())
      fail(path + ".H", "expected a non-empty array of rows");
    std::vector<Vec> H;
    for (std::size_t r = 0; r < hj.size(); ++r)
      H.push_back(vec(hj[r], path + ".H[" + std::to_string(r) + "]", dim));
    Vec b = vec(j["b"], path + ".b", H.size());
    return Polytope(std::move(H), std::move(b));
  }
  fail(path, "region needs either 'box' or 'H' and 'b'");
}

} // namespace

Scenario parse_scenario(const std::string &json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw std::runtime_error(std::string("scenario: invalid JSON: ") + e.what());
  }

  const json &ws = field(j, "workspace", "$");
  std::size_t dim =
      static_cast<std::size_t>(num(field(ws, "dim", "workspace"), "workspace.dim"));
  Workspace workspace(dim, vec(field(ws, "lo", "workspace"), "workspace.lo", dim),
                      vec(field(ws, "hi", "workspace"), "workspace.hi", dim));

  RegionTable regions;
  const json &rj = field(j, "regions", "$");
  if (!rj.is_object())
    fail("regions", "expected an object");
  for (auto it = rj.begin(); it != rj.end(); ++it)
    regions.emplace(it.key(), parse_region(it.value(), "regions." + it.key(), dim));

  Scenario sc{{workspace, std::move(regions), {}, nullptr, 0, 0,
               Objective::TotalTravelTime, 1, 8},
              {},
              {}};
  Problem &p = sc.problem;

  const json &aj = field(j, "agents", "$");
  if (!aj.is_array() || aj.empty())
    fail("agents", "expected a non-empty array");
  int k0 = j.contains("K0") ? static_cast<int>(num(j["K0"], "K0")) : 1;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json &a = aj[i];
    AgentSpec spec;
    spec.init = vec(field(a, "init", path), path + ".init", dim);
    spec.size = num(field(a, "size", path), path + ".size");
    spec.eps = num(field(a, "eps", path), path + ".eps");
    if (a.contains("K0"))
      k0 = std::max(k0, static_cast<int>(num(a["K0"], path + ".K0")));
    p.agents.push_back(std::move(spec));
  }
  p.K0 = k0;

  p.T = num(field(j, "T", "$"), "T");
  p.vmax = num(field(j, "vmax", "$"), "vmax");
  if (j.contains("Kmax"))
    p.Kmax = static_cast<int>(num(j["Kmax"], "Kmax"));
  if (j.contains("objective")) {
    std::string o = j["objective"].get<std::string>();
    if (o == "total-travel-time")
      p.objective = Objective::TotalTravelTime;
    else if (o == "makespan")
      p.objective = Objective::Makespan;
    else
      fail("objective", "expected 'total-travel-time' or 'makespan'");
  }

  const json &sj = field(j, "spec", "$");
  if (!sj.is_string())
    fail("spec", "expected a formula string");
  try {
    p.spec = parse_spec(sj.get<std::string>(), p.regions,
                        static_cast<int>(p.agents.size()));
  } catch (const ParseError &e) {
    fail("spec", e.what());
  }

  if (j.contains("solver")) {
    const json &sv = j["solver"];
    if (sv.contains("mip_gap"))
      sc.solver.mip_gap = num(sv["mip_gap"], "solver.mip_gap");
    if (sv.contains("time_limit_s"))
      sc.solver.time_limit_s = num(sv["time_limit_s"], "solver.time_limit_s");
    if (sv.contains("backend")) {
      std::string b = sv["backend"].get<std::string>();
      if (b == "builtin")
        sc.backend.kind = Backend::Kind::Builtin;
      else if (b == "lpfile")
        sc.backend.kind = Backend::Kind::LpFile;
      else
        fail("solver.backend", "expected 'builtin' or 'lpfile'");
    }
  }

  p.validate();
  return sc;
}

Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("scenario: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string status_name(PlanStatus s) {
  switch (s) {
  case PlanStatus::Solved:
    return "solved";
  case PlanStatus::Infeasible:
    return "infeasible";
  case PlanStatus::TimeLimit:
    return "timelimit";
  case PlanStatus::Exported:
    return "exported";
  }
  return "unknown";
}

} // namespace

std::string solution_to_json(const PlanResult &result) {
  json j;
  j["status"] = status_name(result.status);
  j["K"] = result.K;
  j["objective"] = result.objective;
  j["paths"] = json::array();
  for (std::size_t i = 0; i < result.paths.size(); ++i) {
    json pj;
    pj["agent"] = static_cast<int>(i) + 1;
    pj["waypoints"] = json::array();
    const PwlPath &path = result.paths[i];
    for (std::size_t k = 0; k < path.t.size(); ++k) {
      json w = json::array();
      w.push_back(path.t[k]);
      for (double c : path.p[k])
        w.push_back(c);
      pj["waypoints"].push_back(std::move(w));
    }
    j["paths"].push_back(std::move(pj));
  }
  j["stats"] = {{"nodes", result.stats.nodes},
                {"simplex_iterations", result.stats.simplex_iterations},
                {"best_bound", result.best_bound},
                {"gap", result.gap}};
  return j.dump(2) + "\n";
}

Solution parse_solution(const std::string &json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw std::runtime_error(std::string("solution: invalid JSON: ") + e.what());
  }
  Solution s;
  s.status = field(j, "status", "$").get<std::string>();
  s.K = static_cast<int>(num(field(j, "K", "$"), "K"));
  s.objective = num(field(j, "objective", "$"), "objective");
  const json &pj = field(j, "paths", "$");
  if (!pj.is_array())
    fail("paths", "expected an array");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string path = "paths[" + std::to_string(i) + "]";
    int agent = static_cast<int>(num(field(pj[i], "agent", path), path + ".agent"));
    const json &wj = field(pj[i], "waypoints", path);
    PwlPath pw;
    for (std::size_t k = 0; k < wj.size(); ++k) {
      Vec w = vec(wj[k], path + ".waypoints[" + std::to_string(k) + "]");
      if (w.size() < 2)
        fail(path + ".waypoints[" + std::to_string(k) + "]",
             "waypoint needs [t, coords...]");
      pw.t.push_back(w[0]);
      pw.p.emplace_back(w.begin() + 1, w.end());
    }
    if (agent < 1)
      fail(path + ".agent", "must be >= 1");
    if (static_cast<std::size_t>(agent) > s.paths.size())
      s.paths.resize(agent);
    s.paths[agent - 1] = std::move(pw);
  }
  for (std::size_t i = 0; i < s.paths.size(); ++i)
    if (s.paths[i].t.empty())
      fail("paths", "missing path for agent " + std::to_string(i + 1));
  return s;
}

Solution load_solution(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("solution: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_solution(ss.str());
}

FullReport check_solution(const Scenario &scenario, const Solution &solution) {
  const Problem &p = scenario.problem;
  if (solution.paths.size() < p.agents.size())
    throw std::runtime_error("check: solution has " +
                             std::to_string(solution.paths.size()) +
                             " paths but the scenario has " +
                             std::to_string(p.agents.size()) + " agents");
  std::vector<double> eps;
  for (const AgentSpec &a : p.agents)
    eps.push_back(a.eps);

  FullReport rep;
  rep.spec_report = check(p.spec, solution.paths, p.regions, eps, p.T);
  rep.satisfied = rep.spec_report.satisfied;
  for (std::size_t i = 0; i < p.agents.size(); ++i)
    for (std::size_t k = i + 1; k < p.agents.size(); ++k) {
      ClearanceResult c =
          min_pairwise_distance(solution.paths[i], solution.paths[k]);
      ClearanceReport cr;
      cr.agent_i = static_cast<int>(i) + 1;
      cr.agent_j = static_cast<int>(k) + 1;
      cr.time = c.time;
      cr.distance = c.distance;
      cr.required = p.agents[i].size + p.agents[k].size + eps[i] + eps[k];
      cr.ok = cr.distance >= cr.required - 1e-6;
      rep.satisfied = rep.satisfied && cr.ok;
      rep.clearances.push_back(cr);
    }
  return rep;
}

std::string report_to_json(const FullReport &report) {
  json j;
  j["satisfied"] = report.satisfied;
  j["per_atom"] = json::array();
  for (const AtomReport &a : report.spec_report.per_atom)
    j["per_atom"].push_back(
        {{"agent", a.agent}, {"formula", a.formula}, {"satisfied", a.satisfied}});
  j["min_clearances"] = json::array();
  for (const ClearanceReport &c : report.clearances)
    j["min_clearances"].push_back({{"agents", {c.agent_i, c.agent_j}},
                                   {"time", c.time},
                                   {"distance", c.distance},
                                   {"required", c.required},
                                   {"ok", c.ok}});
  return j.dump(2) + "\n";
}

namespace {

// 2D vertex enumeration: intersect face pairs, keep feasible points, order
// them around the centroid.
std::vector<Vec> polytope_vertices_2d(const Polytope &poly) {
  std::vector<Vec> verts;
  const auto &H = poly.H();
  const Vec &b = poly.b();
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = i + 1; j < H.size(); ++j) {
      double det = H[i][0] * H[j][1] - H[i][1] * H[j][0];
      if (std::abs(det) < 1e-9)
        continue;
      double x = (b[i] * H[j][1] - H[i][1] * b[j]) / det;
      double y = (H[i][0] * b[j] - b[i] * H[j][0]) / det;
      bool ok = true;
      for (std::size_t f = 0; f < H.size() && ok; ++f)
        ok = H[f][0] * x + H[f][1] * y <= b[f] + 1e-7;
      if (!ok)
        continue;
      bool dup = false;
      for (const Vec &v : verts)
        dup = dup || (std::abs(v[0] - x) < 1e-9 && std::abs(v[1] - y) < 1e-9);
      if (!dup)
        verts.push_back({x, y});
    }
  if (verts.size() > 2) {
    double cx = 0, cy = 0;
    for (const Vec &v : verts) {
      cx += v[0];
      cy += v[1];
    }
    cx /= verts.size();
    cy /= verts.size();
    std::sort(verts.begin(), verts.end(), [&](const Vec &a, const Vec &c) {
      return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(c[1] - cy, c[0] - cx);
    });
  }
  return verts;
}

} // namespace

std::string plot_svg(const Scenario &scenario, const std::vector<PwlPath> &paths) {
  const Workspace &ws = scenario.problem.workspace;
  if (ws.dim != 2)
    throw std::runtime_error("plot: only 2D scenarios can be plotted");
  const double w = ws.hi[0] - ws.lo[0], h = ws.hi[1] - ws.lo[1];
  const double scale = 600.0 / std::max(w, h);
  const double pad = 20;
  auto X = [&](double x) { return pad + (x - ws.lo[0]) * scale; };
  auto Y = [&](double y) { return pad + (ws.hi[1] - y) * scale; }; // y up

  static const char *palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << w * scale + 2 * pad << "\" height=\"" << h * scale + 2 * pad << "\">\n";
  svg << "<rect x=\"" << X(ws.lo[0]) << "\" y=\"" << Y(ws.hi[1]) << "\" width=\""
      << w * scale << "\" height=\"" << h * scale
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (const auto &[name, poly] : scenario.problem.regions) {
    auto verts = polytope_vertices_2d(poly);
    if (verts.empty())
      continue;
    svg << "<polygon points=\"";
    for (const Vec &v : verts)
      svg << X(v[0]) << "," << Y(v[1]) << " ";
    svg << "\" fill=\"#cccccc\" fill-opacity=\"0.5\" stroke=\"#888888\"/>\n";
    double cx = 0, cy = 0;
    for (const Vec &v : verts) {
      cx += v[0];
      cy += v[1];
    }
    svg << "<text x=\"" << X(cx / verts.size()) << "\" y=\""
        << Y(cy / verts.size()) << "\" font-size=\"12\" text-anchor=\"middle\">"
        << name << "</text>\n";
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const char *color = palette[i % (sizeof(palette) / sizeof(palette[0]))];
    svg << "<polyline points=\"";
    for (const Vec &pt : paths[i].p)
      svg << X(pt[0]) << "," << Y(pt[1]) << " ";
    svg << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    if (!paths[i].p.empty())
      svg << "<circle cx=\"" << X(paths[i].p[0][0]) << "\" cy=\""
          << Y(paths[i].p[0][1]) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace stlplan
