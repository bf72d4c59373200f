#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twophase/mesh.hpp"
#include "twophase/problem.hpp"
#include "twophase/solver.hpp"

namespace twophase {

/// Per-phase summary of the weak equation residuals over admissible nodes.
struct ResidualStats {
  double max_plus = 0.0, mean_plus = 0.0;
  double max_minus = 0.0, mean_minus = 0.0;
  int count_plus = 0, count_minus = 0;
  bool empty() const { return count_plus == 0 && count_minus == 0; }
};

/// One ball's comparison against its law-harmonic replacement:
/// lhs = integral of law(|grad u - grad v|), rhs = energy excess of u over v,
/// ratio = lhs / (k rhs), omitted when rhs is below the solver floor.
struct ComparisonCheck {
  Vec2 center;
  double radius = 0.0;
  int order = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;
};

struct DiagnosticsReport {
  double linf = 0.0;
  double boundary_sup = 0.0;
  double loglip_modulus = 0.0;
  double bmo_seminorm = 0.0;
  ResidualStats residual;
  std::vector<ComparisonCheck> comparison_checks;
  double identity_error = 0.0;
  std::vector<std::string> notes;
};

/// (sup |u| over all nodes, sup |psi| over boundary nodes).
std::pair<double, double> linf_report(const Mesh& mesh, const ScalarField& u,
                                      const std::vector<double>& psi_samples);

/// Empirical Log-Lipschitz modulus: the max over seeded random pairs x != y
/// in the inner region (|x-y| <= r0 < 1/e) of |u(x)-u(y)| / (|x-y| |log|x-y||).
/// The pair sequence depends only on (domain, inner_margin, r0, count, seed),
/// never on the mesh, so moduli of two resolutions are directly comparable.
double log_lipschitz_modulus(const Mesh& mesh, const ScalarField& u, double inner_margin,
                             double r0, int pair_count, std::uint64_t seed);

/// Max over sampled inner balls of the area-weighted mean oscillation of the
/// elementwise gradient around its ball average.
double bmo_seminorm_gradient(const Mesh& mesh, const ScalarField& u, double inner_margin,
                             const std::vector<double>& radii);

/// Weak residual of the phase equations tested against interior hat
/// functions whose support stays in one phase and clear of the band
/// {|u| <= band_epsilon}:
///   R_i = sum_T |T| flux(grad u_T) . grad hat_i - w_i f_phase(x_i),
/// normalized by the hat function's H1 scale. Stats reported per phase.
ResidualStats weak_residual(const ProblemSpec& spec, const Mesh& mesh, const ScalarField& u,
                            double band_epsilon);

/// Checks the divergence-form/expanded-form identity for the exponential law
/// on an analytic field: A = div(2 e^{|grad u|^2} grad u) by centered finite
/// differences of the closed-form flux, B = 2 e^{|grad u|^2}(lap u + 2
/// infinity-lap u) from closed-form derivatives. Returns max |A - B| over the
/// interior lattice per resolution; the gap shrinks at second order.
std::vector<double> operator_identity_check(const Coefficient& analytic_u, const Domain& domain,
                                            const std::vector<int>& mesh_resolutions);

/// For each ball, builds the truncated-law harmonic replacement of u and
/// reports (lhs, rhs, ratio) of the comparison inequality. rhs is never
/// materially negative since the replacement minimizes the ball energy.
std::vector<ComparisonCheck> comparison_inequality_check(const EnergyLaw& law, const Mesh& mesh,
                                                         const ScalarField& u,
                                                         const std::vector<Ball>& balls,
                                                         const SolverOptions& opts);

struct DiagnosticsOptions {
  double band_epsilon = 0.05;
  double inner_margin = 0.1;
  double loglip_r0 = 0.25;
  int loglip_pairs = 2000;
  std::uint64_t seed = 0;
  std::vector<double> bmo_radii{0.1, 0.2};
  int comparison_balls = 8;
  std::vector<int> comparison_orders{1, 2, 4, 8};
  std::vector<int> identity_resolutions{32, 64};
};

/// Runs the full battery on a computed field and assembles the report.
DiagnosticsReport run_diagnostics(const ProblemSpec& spec, const Mesh& mesh,
                                  const ScalarField& u, const DiagnosticsOptions& opts);

/// Seeded inner balls for the comparison checks (deterministic in the seed).
std::vector<Ball> sample_inner_balls(const Domain& domain, double inner_margin, int count,
                                     double r_min, double r_max, std::uint64_t seed);

}  // namespace twophase
