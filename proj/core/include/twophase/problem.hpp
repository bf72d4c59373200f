#pragma once

#include <array>
#include <string>
#include <vector>

#include "twophase/energy_law.hpp"
#include "twophase/mesh.hpp"

namespace twophase {

/// Closed registry of coefficient presets plus grid-sampled tables.
///
/// Parameter layout per kind (trailing parameters may be omitted; missing
/// entries default to 0):
///   constant:     {c}
///   affine:       {a, bx, by}                ->  a + bx x + by y
///   quadratic:    {a, bx, by, cxx, cxy, cyy} ->  ... + cxx x^2 + cxy xy + cyy y^2
///   sinusoidal:   {amp, fx, fy, off}         ->  amp sin(pi fx x) sin(pi fy y) + off
///                                               (1D: amp sin(pi fx x) + off)
///   radial:       {cx, cy, r0}               ->  |p - c| - r0
///   grid_sampled: values table, one entry per mesh node
enum class CoeffKind { Constant, Affine, Quadratic, Sinusoidal, Radial, GridSampled };

struct Coefficient {
  CoeffKind kind = CoeffKind::Constant;
  std::vector<double> params{0.0};
  std::vector<double> values;  // grid_sampled only

  static Coefficient constant(double c);
  static Coefficient affine(double a, double bx, double by = 0.0);
  static Coefficient quadratic(std::vector<double> p);
  static Coefficient sinusoidal(double amp, double fx, double fy = 0.0, double off = 0.0);
  static Coefficient radial(double cx, double cy, double r0);
  static Coefficient grid_sampled(std::vector<double> table);
};

const char* coeff_kind_name(CoeffKind kind);
CoeffKind coeff_kind_from_name(const std::string& name);

/// Pointwise evaluation of an analytic kind. Grid-sampled coefficients have
/// no pointwise form; use sample().
double coeff_value(const Coefficient& c, Vec2 p, int dim);

/// Closed-form gradient; defined for every analytic kind away from the radial
/// kink point.
Vec2 coeff_gradient(const Coefficient& c, Vec2 p, int dim);

/// Closed-form second derivatives {uxx, uxy, uyy}. Only the twice
/// differentiable presets (constant, affine, quadratic, sinusoidal) qualify;
/// others throw DomainError.
std::array<double, 3> coeff_hessian(const Coefficient& c, Vec2 p, int dim);

bool coeff_twice_differentiable(const Coefficient& c);

/// Deterministic nodal sampling; analytic kinds are evaluated exactly at the
/// nodes, grid_sampled returns its table (validated against the node count).
std::vector<double> sample(const Coefficient& c, const Mesh& mesh);

/// A two-phase problem instance: gradient law, phase coefficients switching
/// across the zero level of the state, boundary datum, and the positivity
/// constant for the gamma term.
struct ProblemSpec {
  Domain domain;
  EnergyLaw law;
  Coefficient f_plus = Coefficient::constant(0.0);
  Coefficient f_minus = Coefficient::constant(0.0);
  Coefficient gamma_plus = Coefficient::constant(0.0);
  Coefficient gamma_minus = Coefficient::constant(0.0);
  Coefficient psi = Coefficient::constant(0.0);
  double c_gamma = 0.0;
  double smoothing_delta = 1e-3;
};

enum class TwoPhaseTerm { FTerm, GammaTerm };

/// Exact (unsmoothed) two-phase value at a point: f(x,u) u or gamma(x,u).
/// The zero state belongs to the minus phase, except that gamma(x,0) = 0
/// when the positivity constant c_gamma > 0 is declared.
double two_phase_value(const ProblemSpec& spec, Vec2 x, double u, TwoPhaseTerm which);

/// Nodal samples of the two phase coefficient pairs and the boundary datum.
struct SampledCoefficients {
  std::vector<double> f_plus, f_minus, gamma_plus, gamma_minus, psi;
};

SampledCoefficients sample_all(const ProblemSpec& spec, const Mesh& mesh);

/// Checks the nodal invariants (finiteness, gamma >= c_gamma when declared);
/// throws ValidationError on breach.
void validate_on_mesh(const ProblemSpec& spec, const Mesh& mesh);

}  // namespace twophase
