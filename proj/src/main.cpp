#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stlplan/scenario.hpp"

namespace fs = std::filesystem;
using namespace stlplan;

namespace {

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << content;
}

struct PlanOpts {
  std::string scenario;
  std::string out = "solution.json";
  std::string backend; // empty = from scenario
  double mip_gap = -1;
  double time_limit = -1;
  int kmax = -1;
};

Scenario load_with_overrides(const PlanOpts &o) {
  Scenario sc = load_scenario(o.scenario);
  if (o.mip_gap >= 0)
    sc.solver.mip_gap = o.mip_gap;
  if (o.time_limit >= 0)
    sc.solver.time_limit_s = o.time_limit;
  if (o.kmax >= 1)
    sc.problem.Kmax = o.kmax;
  if (o.backend == "builtin")
    sc.backend.kind = Backend::Kind::Builtin;
  else if (o.backend == "lpfile")
    sc.backend.kind = Backend::Kind::LpFile;
  else if (!o.backend.empty())
    throw std::runtime_error("unknown backend '" + o.backend + "'");
  return sc;
}

int cmd_plan(const PlanOpts &o) {
  Scenario sc = load_with_overrides(o);
  if (sc.backend.kind == Backend::Kind::LpFile) {
    sc.backend.lp_path =
        o.out.size() > 3 && o.out.substr(o.out.size() - 3) == ".lp"
            ? o.out
            : o.out + ".lp";
  }
  PlanResult res = plan(sc.problem, sc.solver, sc.backend);
  if (sc.backend.kind != Backend::Kind::LpFile)
    write_file(o.out, solution_to_json(res));
  switch (res.status) {
  case PlanStatus::Solved:
    std::cout << "solved at K=" << res.K << ", objective " << res.objective
              << "\n";
    return 0;
  case PlanStatus::Exported:
    std::cout << "exported LP for K=" << res.K << " to " << sc.backend.lp_path
              << "\n";
    return 0;
  case PlanStatus::Infeasible:
    std::cout << "infeasible up to Kmax=" << sc.problem.Kmax << "\n";
    return 2;
  case PlanStatus::TimeLimit:
    std::cout << "time limit reached at K=" << res.K << "\n";
    return 2;
  }
  return 1;
}

int cmd_check(const std::string &scenario_path, const std::string &solution_path,
              const std::string &out) {
  Scenario sc = load_scenario(scenario_path);
  Solution sol = load_solution(solution_path);
  FullReport rep = check_solution(sc, sol);
  std::string text = report_to_json(rep);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return rep.satisfied ? 0 : 2;
}

int cmd_export_lp(const std::string &scenario_path, int K,
                  const std::string &out) {
  Scenario sc = load_scenario(scenario_path);
  if (K < 1)
    K = sc.problem.K0;
  BuiltModel built = build_model(sc.problem, K);
  write_file(out, export_lp(built.model));
  std::cout << "wrote " << out << " (" << built.model.vars.size()
            << " variables, " << built.model.constraints.size()
            << " constraints, " << built.model.binaries_added << " binaries)\n";
  return 0;
}

int cmd_plot(const std::string &scenario_path, const std::string &solution_path,
             const std::string &out) {
  Scenario sc = load_scenario(scenario_path);
  Solution sol = load_solution(solution_path);
  write_file(out, plot_svg(sc, sol.paths));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_bench(const std::string &dir) {
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::printf("%-28s %-12s %4s %12s %10s\n", "scenario", "status", "K",
              "objective", "time[s]");
  int rc = 0;
  for (const auto &f : files) {
    auto t0 = std::chrono::steady_clock::now();
    std::string status = "error";
    int K = 0;
    double obj = 0;
    try {
      Scenario sc = load_scenario(f.string());
      PlanResult res = plan(sc.problem, sc.solver, sc.backend);
      K = res.K;
      obj = res.objective;
      switch (res.status) {
      case PlanStatus::Solved:
        status = "solved";
        break;
      case PlanStatus::Exported:
        status = "exported";
        break;
      case PlanStatus::Infeasible:
        status = "infeasible";
        break;
      case PlanStatus::TimeLimit:
        status = "timelimit";
        break;
      }
    } catch (const std::exception &e) {
      std::cerr << f.filename().string() << ": " << e.what() << "\n";
      rc = 1;
    }
    double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%-28s %-12s %4d %12.4f %10.2f\n",
                f.filename().string().c_str(), status.c_str(), K, obj, dt);
  }
  return rc;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"STL multi-agent motion planner"};
  app.require_subcommand(1);

  PlanOpts po;
  auto *plan_cmd = app.add_subcommand("plan", "plan paths for a scenario");
  plan_cmd->add_option("scenario", po.scenario, "scenario JSON")->required();
  plan_cmd->add_option("--out", po.out, "solution output path");
  plan_cmd->add_option("--backend", po.backend, "builtin or lpfile");
  plan_cmd->add_option("--mip-gap", po.mip_gap, "relative MIP gap");
  plan_cmd->add_option("--time-limit", po.time_limit, "time limit in seconds");
  plan_cmd->add_option("--kmax", po.kmax, "max segments per agent");

  std::string check_scenario, check_solution_path, check_out;
  auto *check_cmd = app.add_subcommand("check", "verify a solution");
  check_cmd->add_option("scenario", check_scenario)->required();
  check_cmd->add_option("solution", check_solution_path)->required();
  check_cmd->add_option("--out", check_out, "report output path (default stdout)");

  std::string lp_scenario, lp_out = "model.lp";
  int lp_k = -1;
  auto *lp_cmd = app.add_subcommand("export-lp", "write the MILP as an LP file");
  lp_cmd->add_option("scenario", lp_scenario)->required();
  lp_cmd->add_option("--K", lp_k, "segment count (default: scenario K0)");
  lp_cmd->add_option("--out", lp_out, "LP output path");

  std::string plot_scenario, plot_solution, plot_out = "plot.svg";
  auto *plot_cmd = app.add_subcommand("plot", "render scenario + paths as SVG");
  plot_cmd->add_option("scenario", plot_scenario)->required();
  plot_cmd->add_option("solution", plot_solution)->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path");

  std::string bench_dir;
  auto *bench_cmd = app.add_subcommand("bench", "run every scenario in a directory");
  bench_cmd->add_option("dir", bench_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_cmd->parsed())
      return cmd_plan(po);
    if (check_cmd->parsed())
      return cmd_check(check_scenario, check_solution_path, check_out);
    if (lp_cmd->parsed())
      return cmd_export_lp(lp_scenario, lp_k, lp_out);
    if (plot_cmd->parsed())
      return cmd_plot(plot_scenario, plot_solution, plot_out);
    if (bench_cmd->parsed())
      return cmd_bench(bench_dir);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
