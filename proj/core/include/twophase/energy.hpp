#pragma once

#include <optional>
#include <vector>

#include "twophase/mesh.hpp"
#include "twophase/problem.hpp"

namespace twophase {

/// One-sided ramp regularizing the positive-phase indicator: exact on u <= 0,
/// linear on (0, delta), one above.
struct SmoothedIndicator {
  double delta = 1e-3;
};

double smoothed_heaviside(const SmoothedIndicator& ind, double s);

struct EnergyBreakdown {
  double phi_term = 0.0;
  double f_term = 0.0;
  double gamma_term = 0.0;
  double total() const { return phi_term + f_term + gamma_term; }
};

/// Discrete smoothed functional: elementwise gradient energy plus mass-lumped
/// nodal phase terms,
///   sum_T |T| law(|grad u_T|) + sum_i w_i (-f_d(x_i,u_i) u_i + g_d(x_i,u_i)),
/// with f_d = f+ H + f- (1-H) and g_d = g+ H + g- (1-H) through the ramp H.
/// Value reports +infinity instead of raising when the exponential cap is
/// exceeded, so a line search can reject the step. Elementwise work may run
/// on several threads; reductions always happen in fixed element order, so
/// results are bitwise independent of the thread count.
class EnergyModel {
 public:
  EnergyModel(const ProblemSpec& spec, const Mesh& mesh, SmoothedIndicator ind,
              std::optional<EnergyLaw> law_override = std::nullopt, int threads = 1);

  double value(const ScalarField& u) const;
  EnergyBreakdown breakdown(const ScalarField& u) const;

  /// Exact gradient of the discrete smoothed energy with respect to free
  /// (non-Dirichlet) nodal values; Dirichlet entries are reported as 0.
  /// Ramp kinks take the one-sided derivative from above. Throws
  /// OverflowError where value() would be infinite.
  ScalarField gradient(const ScalarField& u) const;

  const Mesh& mesh() const { return *mesh_; }
  const EnergyLaw& law() const { return law_; }
  double delta() const { return ind_.delta; }
  const std::vector<double>& node_weights() const { return weights_; }
  const SampledCoefficients& samples() const { return samples_; }

 private:
  const Mesh* mesh_;
  EnergyLaw law_;
  SmoothedIndicator ind_;
  int threads_;
  SampledCoefficients samples_;
  std::vector<double> weights_;
};

double energy(const ProblemSpec& spec, const Mesh& mesh, const ScalarField& u,
              const SmoothedIndicator& ind);
ScalarField energy_gradient(const ProblemSpec& spec, const Mesh& mesh,
                            const ScalarField& u, const SmoothedIndicator& ind);
EnergyBreakdown energy_breakdown(const ProblemSpec& spec, const Mesh& mesh,
                                 const ScalarField& u, const SmoothedIndicator& ind);

}  // namespace twophase
