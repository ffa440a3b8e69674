#include "commands.hpp"

#include <cmath>
#include <iostream>

#include "projdyn/checks.hpp"
#include "trajectory_io.hpp"

namespace projdyn::cli {

namespace {

using nlohmann::json;

json json_vector(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json drift_summary(const Trajectory& traj) {
  json out;
  if (traj.has_channel("h")) {
    Real drift = 0;
    for (Real h : traj.channel("h")) drift = std::max(drift, std::abs(h - 1.0));
    out["h_drift"] = drift;
  }
  for (const char* name : {"energy", "lambda"}) {
    if (!traj.has_channel(name)) continue;
    const std::vector<Real>& c = traj.channel(name);
    Real drift = 0;
    for (Real v : c) drift = std::max(drift, std::abs(v - c.front()));
    out[std::string(name) + "_drift"] = drift;
  }
  if (traj.has_channel("eta")) {
    const std::vector<Real>& c = traj.channel("eta");
    Real drift = 0;
    for (Real v : c) drift = std::max(drift, std::abs(v - c.front()));
    out["eta_drift_rel"] = drift / std::max(std::abs(c.front()), 1e-300);
  }
  return out;
}

json run_summary(const std::string& command, const RunConfig& cfg,
                 const Trajectory& traj) {
  const PhaseState& last = traj.samples.back();
  json out;
  out["command"] = command;
  out["problem"] = cfg.problem;
  out["dimension"] = traj.dim();
  out["seed"] = cfg.seed;
  out["samples"] = traj.samples.size();
  out["t_range"] = {traj.samples.front().t, last.t};
  out["final_state"] = {{"t", last.t}, {"q", json_vector(last.q)},
                        {"p", json_vector(last.p)}};
  out["steps"] = {{"accepted", traj.stats.accepted},
                  {"rejected", traj.stats.rejected},
                  {"rhs_evals", traj.stats.rhs_evals}};
  out["invariants"] = drift_summary(traj);
  json names = json::array();
  for (const auto& [name, values] : traj.channels) names.push_back(name);
  out["channels"] = names;
  return out;
}

std::filesystem::path output_path(const RunConfig& cfg, const Overrides& overrides,
                                  const std::string& key,
                                  const std::string& fallback) {
  auto it = cfg.output.find(key);
  return overrides.out_dir / (it != cfg.output.end() ? it->second : fallback);
}

RunConfig load_with_overrides(const std::filesystem::path& path,
                              const Overrides& overrides) {
  RunConfig cfg = load_config(path);
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.rtol) {
    cfg.integrator.rtol = *overrides.rtol;
    cfg.integrator.atol = *overrides.rtol;
  }
  return cfg;
}

int report_domain_error(const DomainError& e) {
  std::cerr << "domain error: " << e.what() << "\n";
  return kDomainError;
}

int report_config_error(const std::exception& e) {
  std::cerr << "config error: " << e.what() << "\n";
  return kConfigError;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path,
                 const Overrides& overrides) {
  RunConfig cfg;
  AssembledRun run;
  try {
    cfg = load_with_overrides(config_path, overrides);
    run = assemble_run(cfg);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }

  try {
    Trajectory traj;
    if (run.constrained) {
      traj = integrate_constrained(run.system, run.start, cfg.t_end, cfg.integrator);
    } else {
      traj = integrate_free(run.field, run.start, cfg.t_end, cfg.integrator,
                            run.screen ? run.screen.get() : nullptr);
    }
    traj.seed = cfg.seed;

    const std::filesystem::path traj_path =
        output_path(cfg, overrides, "trajectory", "trajectory.csv");
    const std::filesystem::path summary_path =
        output_path(cfg, overrides, "summary", "summary.json");
    write_file_atomic(traj_path, trajectory_csv(traj));

    json summary = run_summary("simulate", cfg, traj);
    summary["files"] = {{"trajectory", traj_path.string()}};
    write_json_atomic(summary_path, summary);

    std::cout << "simulate: " << traj.samples.size() << " samples -> "
              << traj_path.string() << "\n";
    return kOk;
  } catch (const DomainError& e) {
    return report_domain_error(e);
  }
}

int cmd_project(const std::filesystem::path& config_path,
                const Overrides& overrides) {
  RunConfig cfg;
  std::shared_ptr<const Screen> screen;
  try {
    cfg = load_with_overrides(config_path, overrides);
    if (cfg.problem != "project") {
      throw ConfigError("project command expects \"problem\": \"project\"");
    }
    if (!cfg.screen) throw ConfigError("project requires a screen");
    screen = make_screen(*cfg.screen, resolve_ellipsoid(cfg));
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    return report_config_error(e);
  }

  try {
    // Relative source paths resolve against --out, where simulate wrote.
    std::filesystem::path source_path = cfg.source;
    if (source_path.is_relative()) source_path = overrides.out_dir / source_path;
    const Trajectory source = read_trajectory_csv(source_path);
    const ReparamTrajectory projected = project_trajectory(source, *screen);

    const std::filesystem::path out_path =
        output_path(cfg, overrides, "projected", "projected.csv");
    write_file_atomic(out_path, trajectory_csv(projected, *screen));

    json summary;
    summary["command"] = "project";
    summary["source"] = source_path.string();
    summary["samples"] = projected.samples.size();
    summary["screen"] = screen->label();
    summary["tau_range"] = {projected.samples.front().t,
                            projected.samples.back().t};
    summary["files"] = {{"projected", out_path.string()}};

    if (cfg.reference) {
      RunConfig ref_cfg = parse_config(*cfg.reference);
      json with_init = *cfg.reference;
      AssembledRun ref = assemble_run(ref_cfg);
      if (!ref.constrained) {
        throw ConfigError("project reference must be a constrained problem");
      }
      PhaseState start{projected.samples.front().q, projected.samples.front().p, 0};
      start.q = project_point(*ref.system.screen, start.q);
      start.p = tangent_project(*ref.system.screen, start.q, start.p);
      const Real tau_end = projected.samples.back().t;
      const Trajectory reference = integrate_constrained(
          ref.system, start, tau_end, ref_cfg.integrator);
      const TrajectoryDeviation dev = compare_trajectories(projected, reference);
      summary["reference_deviation"] = {{"position", dev.position},
                                        {"velocity", dev.velocity}};
    }

    const std::filesystem::path summary_path =
        output_path(cfg, overrides, "summary", "summary.json");
    write_json_atomic(summary_path, summary);
    std::cout << "project: " << projected.samples.size() << " samples -> "
              << out_path.string() << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const DomainError& e) {
    return report_domain_error(e);
  } catch (const std::runtime_error& e) {
    return report_config_error(e);
  }
}

int cmd_verify(const std::filesystem::path& config_path, const Overrides& overrides) {
  CheckOptions opts;
  std::filesystem::path report_path = overrides.out_dir / "verification.json";
  std::uint64_t seed_used = opts.seed;
  try {
    if (!config_path.empty()) {
      RunConfig cfg = load_with_overrides(config_path, overrides);
      opts.seed = cfg.seed;
      opts.rtol = cfg.integrator.rtol;
      opts.prop1_field_degree = cfg.prop1_field_degree;
      auto it = cfg.output.find("report");
      if (it != cfg.output.end()) report_path = overrides.out_dir / it->second;
    }
    if (overrides.seed) opts.seed = *overrides.seed;
    if (overrides.rtol) opts.rtol = *overrides.rtol;
    seed_used = opts.seed;
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }

  try {
    const std::vector<CheckResult> results = run_verification_suite(opts);

    int failed = 0;
    json checks = json::array();
    for (const CheckResult& r : results) {
      if (!r.pass) ++failed;
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
                << "  residual=" << format_real(r.residual)
                << (r.lower_bound ? "  >=  " : "  <=  ")
                << format_real(r.tolerance) << "\n";
      checks.push_back({{"name", r.name},
                        {"residual", r.residual},
                        {"tolerance", r.tolerance},
                        {"comparison", r.lower_bound ? ">=" : "<="},
                        {"pass", r.pass},
                        {"note", r.note}});
    }

    json report;
    report["command"] = "verify";
    report["seed"] = seed_used;
    report["rtol"] = opts.rtol;
    report["prop1_field_degree"] = opts.prop1_field_degree;
    report["checks"] = checks;
    report["passed"] = static_cast<int>(results.size()) - failed;
    report["failed"] = failed;
    write_json_atomic(report_path, report);

    std::cout << (failed == 0 ? "verify: all checks passed"
                              : "verify: " + std::to_string(failed) + " check(s) failed")
              << " -> " << report_path.string() << "\n";
    return failed == 0 ? kOk : kVerificationFailure;
  } catch (const DomainError& e) {
    return report_domain_error(e);
  }
}

int cmd_correspond(const std::filesystem::path& config_path,
                   const Overrides& overrides) {
  RunConfig cfg;
  AssembledRun run;
  try {
    cfg = load_with_overrides(config_path, overrides);
    if (cfg.problem != "correspond" && cfg.problem != "jacobi") {
      throw ConfigError("correspond expects \"problem\": \"correspond\"");
    }
    run = assemble_run(cfg);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  }

  try {
    const JacobiParams params{*run.data, cfg.nu};
    const OrbitExchangeReport report =
        orbit_exchange_report(params, run.start, cfg.t_end, cfg.integrator);

    const bool pass = report.multiplier_vs_nu <= 1e-7 &&
                      report.multiplier_drift <= 1e-8 &&
                      report.deviation.position <= 1e-6;

    json doc;
    doc["command"] = "correspond";
    doc["seed"] = cfg.seed;
    doc["nu"] = cfg.nu;
    doc["eta0"] = report.eta0;
    doc["multiplier_vs_nu"] = {{"value", report.multiplier_vs_nu},
                               {"tolerance", 1e-7}};
    doc["multiplier_drift"] = {{"value", report.multiplier_drift},
                               {"tolerance", 1e-8}};
    doc["chain_deviation"] = {{"position", report.deviation.position},
                              {"velocity", report.deviation.velocity},
                              {"tolerance", 1e-6}};
    doc["pass"] = pass;

    const std::filesystem::path report_path =
        output_path(cfg, overrides, "report", "correspondence.json");
    write_json_atomic(report_path, doc);

    std::cout << "correspond: eta0=" << format_real(report.eta0)
              << " multiplier_vs_nu=" << format_real(report.multiplier_vs_nu)
              << " deviation=" << format_real(report.deviation.position) << " -> "
              << report_path.string() << "\n";
    return pass ? kOk : kVerificationFailure;
  } catch (const DomainError& e) {
    return report_domain_error(e);
  }
}

}  // namespace projdyn::cli
