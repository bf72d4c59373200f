#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "twophase/config.hpp"
#include "twophase/diagnostics.hpp"
#include "twophase/errors.hpp"
#include "twophase/freeboundary.hpp"
#include "twophase/io.hpp"
#include "twophase/solver.hpp"

namespace twophase::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitSolverFailure = 2;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Refuses to reuse a nonempty directory without --force; the manifest goes in
// before any other output so partial runs stay identifiable.
void prepare_output_dir(const fs::path& dir, bool force, const std::string& command,
                        const std::string& config_path, const std::string& config_bytes) {
  if (fs::exists(dir) && !fs::is_directory(dir))
    throw ValidationError("output path exists and is not a directory: " + dir.string());
  if (fs::exists(dir) && !fs::is_empty(dir) && !force)
    throw ValidationError("output directory " + dir.string() +
                          " is not empty (pass --force to reuse)");
  fs::create_directories(dir);
  json manifest;
  manifest["config_path"] = config_path;
  manifest["output_dir"] = dir.string();
  manifest["command"] = command;
  manifest["tool_version"] = kToolVersion;
  manifest["config_hash"] = content_hash(config_bytes);
  manifest["timestamp"] = iso_timestamp();
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

const char* status_name(StageStatus s) {
  switch (s) {
    case StageStatus::Converged: return "converged";
    case StageStatus::MaxIterations: return "max_iterations";
    default: return "stalled";
  }
}

json breakdown_json(const SolveResult& result) {
  json doc;
  doc["phi_term"] = result.breakdown.phi_term;
  doc["f_term"] = result.breakdown.f_term;
  doc["gamma_term"] = result.breakdown.gamma_term;
  doc["total"] = result.breakdown.total();
  doc["energy"] = result.energy_value;
  doc["iterations"] = result.iterations;
  doc["final_grad_norm"] = result.final_grad_norm;
  doc["converged"] = result.converged();
  doc["succeeded"] = result.succeeded();
  json stages = json::array();
  for (const StageSummary& s : result.per_stage) {
    json st;
    st["k"] = order_label(s.k);
    st["delta"] = s.delta;
    st["initializer"] = s.initializer;
    st["status"] = status_name(s.status);
    st["iterations"] = s.iterations;
    st["energy"] = s.energy;
    st["grad_norm"] = s.grad_norm;
    stages.push_back(st);
  }
  doc["per_stage"] = stages;
  if (!result.start_energies.empty()) {
    doc["start_energies"] = result.start_energies;
    doc["energy_tie"] = result.energy_tie;
  }
  return doc;
}

struct LoadedRun {
  RunConfig config;
  Mesh mesh;
  std::string config_bytes;
};

LoadedRun load_run(const std::string& config_path, int threads) {
  LoadedRun run;
  run.config_bytes = read_text_file(config_path);
  run.config = parse_config(run.config_bytes);
  run.config.solver.threads = threads;
  run.mesh = build_config_mesh(run.config);
  return run;
}

fs::path resolve_out(const CommonFlags& flags, const RunConfig& cfg) {
  return flags.out.empty() ? fs::path(cfg.output_dir) : fs::path(flags.out);
}

int run_solve_like(const CommonFlags& flags, const std::string& command, bool sweep) {
  LoadedRun run;
  fs::path out;
  try {
    run = load_run(flags.config, flags.threads);
    out = resolve_out(flags, run.config);
    prepare_output_dir(out, flags.force, command, flags.config, run.config_bytes);
    write_text_file(out / "config.json", serialize_config(run.config));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  SolveResult result;
  try {
    result = solve(run.config.problem, run.mesh, run.config.solver, sweep);
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    write_text_file(out / "error.txt", std::string(e.what()) + "\n");
    return kExitSolverFailure;
  }

  write_field_csv(out / "solution.csv", run.mesh, result.field);
  write_trace_csv(out / "trace.csv", result.trace);
  write_text_file(out / "breakdown.json", breakdown_json(result).dump(2) + "\n");

  if (sweep) {
    std::vector<ConvergenceRow> rows;
    const ScalarField& final_field = result.field;
    std::vector<StageSummary> finals;
    for (const StageSummary& s : result.per_stage) {
      if (s.initializer) continue;
      if (s.delta == run.config.solver.delta_schedule.back()) finals.push_back(s);
    }
    for (size_t i = 0; i < result.stage_fields.size() && i < finals.size(); ++i) {
      double diff = 0.0;
      for (size_t j = 0; j < final_field.size(); ++j)
        diff = std::max(diff, std::abs(result.stage_fields[i][j] - final_field[j]));
      rows.push_back({finals[i].k, finals[i].energy, diff, finals[i].grad_norm});
    }
    write_convergence_csv(out / "convergence.csv", rows);
  }

  std::cout << "energy " << fmt17(result.energy_value) << ", grad_norm "
            << fmt17(result.final_grad_norm) << ", "
            << (result.converged() ? "converged" : "not converged") << "\n";
  return result.succeeded() ? kExitOk : kExitSolverFailure;
}

}  // namespace

int cmd_solve(const CommonFlags& flags) { return run_solve_like(flags, "solve", false); }

int cmd_sweep_k(const CommonFlags& flags) { return run_solve_like(flags, "sweep-k", true); }

int cmd_freeboundary(const CommonFlags& flags, const std::string& input,
                     const std::vector<double>& epsilons) {
  RunConfig cfg;
  Mesh mesh;
  ScalarField field;
  std::string config_bytes;
  fs::path out;
  bool from_solution = false;
  try {
    const fs::path in(input);
    if (fs::is_directory(in)) {
      from_solution = true;
      config_bytes = read_text_file(in / "config.json");
      cfg = parse_config(config_bytes);
      mesh = build_config_mesh(cfg);
      field = read_field_csv(in / "solution.csv", mesh);
    } else {
      config_bytes = read_text_file(in);
      cfg = parse_config(config_bytes);
      cfg.solver.threads = flags.threads;
      mesh = build_config_mesh(cfg);
    }
    out = flags.out.empty() ? fs::path(cfg.output_dir) / "freeboundary" : fs::path(flags.out);
    prepare_output_dir(out, flags.force, "freeboundary", input, config_bytes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (!from_solution) field = solve(cfg.problem, mesh, cfg.solver).field;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    write_text_file(out / "error.txt", std::string(e.what()) + "\n");
    return kExitSolverFailure;
  }

  bool plateau = false;
  const std::vector<Polyline> polylines = level_set(mesh, field, 0.0, &plateau);
  write_polylines_csv(out / "freeboundary.csv", polylines);

  const std::vector<BandRow> bands = thin_band_stats(mesh, field, epsilons);
  std::vector<FbStatsRow> rows;
  for (const BandRow& b : bands) {
    FbStatsRow r;
    r.epsilon = b.epsilon;
    r.band_measure = b.band_measure;
    r.band_dirichlet = b.band_dirichlet;
    r.perimeter_plus = coarea_perimeter(mesh, field, b.epsilon, Side::Plus);
    r.perimeter_minus = coarea_perimeter(mesh, field, b.epsilon, Side::Minus);
    rows.push_back(r);
  }
  write_fb_stats_csv(out / "fb_stats.csv", rows);

  json dim;
  dim["plateau_flagged"] = plateau;
  dim["polyline_count"] = polylines.size();
  dim["marching_length"] = total_length(polylines);
  if (polylines.empty()) {
    dim["dimension"] = nullptr;
    dim["r2"] = nullptr;
  } else {
    const Domain& d = mesh.domain;
    const double extent =
        d.dim() == 1 ? (d.x1 - d.x0) : std::max(d.x1 - d.x0, d.y1 - d.y0);
    const std::vector<double> scales{extent / 8, extent / 16, extent / 32, extent / 64};
    const DimensionFit fit = box_counting_dimension(polylines, scales);
    dim["dimension"] = fit.dimension;
    dim["r2"] = fit.r2;
    dim["scales"] = scales;
  }
  write_text_file(out / "dimension.json", dim.dump(2) + "\n");
  std::cout << "free boundary: " << polylines.size() << " polylines, length "
            << fmt17(total_length(polylines)) << "\n";
  return kExitOk;
}

int cmd_diagnose(const CommonFlags& flags, const std::string& solution_dir) {
  RunConfig cfg;
  Mesh mesh;
  ScalarField field;
  fs::path out;
  try {
    const fs::path in(solution_dir);
    const std::string config_bytes = read_text_file(in / "config.json");
    cfg = parse_config(config_bytes);
    mesh = build_config_mesh(cfg);
    field = read_field_csv(in / "solution.csv", mesh);
    out = flags.out.empty() ? in / "diagnostics" : fs::path(flags.out);
    prepare_output_dir(out, flags.force, "diagnose", solution_dir, config_bytes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  DiagnosticsOptions opts;
  opts.seed = cfg.solver.seed;
  const DiagnosticsReport rep = run_diagnostics(cfg.problem, mesh, field, opts);

  json doc;
  doc["linf"] = rep.linf;
  doc["boundary_sup"] = rep.boundary_sup;
  doc["loglip_modulus"] = rep.loglip_modulus;
  doc["bmo_seminorm"] = rep.bmo_seminorm;
  doc["residual"] = {{"max_plus", rep.residual.max_plus},
                     {"mean_plus", rep.residual.mean_plus},
                     {"max_minus", rep.residual.max_minus},
                     {"mean_minus", rep.residual.mean_minus},
                     {"count_plus", rep.residual.count_plus},
                     {"count_minus", rep.residual.count_minus}};
  json checks = json::array();
  for (const ComparisonCheck& c : rep.comparison_checks) {
    json jc;
    jc["center"] = {c.center.x, c.center.y};
    jc["radius"] = c.radius;
    jc["k"] = c.order;
    jc["lhs"] = c.lhs;
    jc["rhs"] = c.rhs;
    if (c.ratio)
      jc["ratio"] = *c.ratio;
    else
      jc["ratio"] = nullptr;
    checks.push_back(jc);
  }
  doc["comparison_checks"] = checks;
  doc["identity_error"] = rep.identity_error;
  doc["notes"] = rep.notes;
  write_text_file(out / "report.json", doc.dump(2) + "\n");
  std::cout << "report written to " << (out / "report.json").string() << "\n";
  return kExitOk;
}

int cmd_oracle1d(double a, double b, double gamma_plus, double gamma_minus,
                 const std::string& order, long grid_points) {
  try {
    const int k = order_from_label(order);
    const EnergyLaw law =
        k == EnergyLaw::kInfinite ? EnergyLaw::exponential() : EnergyLaw::truncated(k);
    const KinkOracle res = oracle_1d(a, b, gamma_plus, gamma_minus, law, grid_points);
    json doc;
    doc["t_star"] = res.t_star;
    doc["energy_star"] = res.energy_star;
    std::cout << doc.dump() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace twophase::cli
