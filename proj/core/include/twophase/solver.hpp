#pragma once

#include <cstdint>
#include <vector>

#include "twophase/energy.hpp"
#include "twophase/mesh.hpp"
#include "twophase/problem.hpp"

namespace twophase {

struct SolverOptions {
  int max_iters = 1000;
  double grad_tol = 1e-8;            // sup-norm over free-node gradient
  double armijo_c = 1e-4;            // sufficient-decrease constant in (0,1)
  double backtrack_factor = 0.5;     // step shrink factor in (0,1)
  std::vector<int> k_schedule{EnergyLaw::kInfinite};  // ascending, EnergyLaw::kInfinite last
  std::vector<double> delta_schedule{1e-3};           // descending positive ramp widths
  std::uint64_t seed = 0;            // randomized multi-start initializers
  int starts = 1;                    // independent starts (1 = deterministic single run)
  int lbfgs_memory = 8;
  int threads = 1;
};

enum class StageStatus { Converged, MaxIterations, Stalled };

struct TraceRow {
  int k = EnergyLaw::kInfinite;
  double delta = 0.0;
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct StageSummary {
  int k = EnergyLaw::kInfinite;
  double delta = 0.0;
  bool initializer = false;
  StageStatus status = StageStatus::Converged;
  int iterations = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

struct SolveResult {
  ScalarField field;
  double energy_value = 0.0;
  EnergyBreakdown breakdown;
  int iterations = 0;
  double final_grad_norm = 0.0;
  std::vector<TraceRow> trace;
  std::vector<StageSummary> per_stage;
  /// Final field of the last-delta stage per schedule order (filled on request).
  std::vector<ScalarField> stage_fields;
  std::vector<double> start_energies;  // multi-start energies, one per start
  bool energy_tie = false;             // distinct starts within 1e-8 in energy

  bool converged() const {
    return !per_stage.empty() && per_stage.back().status == StageStatus::Converged;
  }

  /// A stage that stalls did exhaust the energy at machine scale (a facet
  /// minimum of the kinked phase terms); only an iteration-budget exit counts
  /// as failure.
  bool succeeded() const {
    return !per_stage.empty() && per_stage.back().status != StageStatus::MaxIterations;
  }
};

/// Single-stage descent on the free nodes with a limited-memory quasi-Newton
/// direction and Armijo backtracking (steepest-descent fallback). Terminates
/// when the free-gradient sup-norm reaches grad_tol or on max_iters. The
/// energy trace is nonincreasing; Dirichlet nodes never move.
SolveResult minimize_stage(const ProblemSpec& spec, const Mesh& mesh, ScalarField u0,
                           const EnergyLaw& law, double delta, const SolverOptions& opts);

/// Full continuation: an initial boundary-datum extension (order-1 law with
/// zero phase terms), then stages over k_schedule x delta_schedule in
/// lexicographic order (k ascending outer, delta descending inner), each
/// warm-started from the previous result.
SolveResult solve(const ProblemSpec& spec, const Mesh& mesh, const SolverOptions& opts,
                  bool record_stage_fields = false);

struct KinkOracle {
  double t_star = 0.0;
  double energy_star = 0.0;
};

/// Brute-force minimization over the kink position t of the exact 1D
/// two-phase energy
///   E(t) = t law(a/t) + (1-t) law(b/(1-t)) + t gamma_minus + (1-t) gamma_plus
/// for boundary data u(0) = -a, u(1) = b with f = 0 (the minimizer is
/// piecewise linear with a single zero). Grid search refined once around the
/// argmin; ties break toward the smallest t.
KinkOracle oracle_1d(double a, double b, double gamma_plus, double gamma_minus,
                     const EnergyLaw& law, long grid_points);

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

/// Minimizes the pure gradient energy sum_T |T| law(|grad v_T|) over the
/// nodes strictly inside the ball, matching u outside. The ball must sit
/// inside the domain.
ScalarField phi_harmonic_replacement(const EnergyLaw& law, const Mesh& mesh,
                                     const ScalarField& u, const Ball& ball,
                                     const SolverOptions& opts);

/// Elements with at least one vertex strictly inside the ball: the discrete
/// region where a harmonic replacement can differ from the original field.
std::vector<int> ball_support_elements(const Mesh& mesh, const Ball& ball);

}  // namespace twophase
