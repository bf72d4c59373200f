#include "twophase/problem.hpp"

#include <cmath>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

constexpr double kPi = 3.14159265358979323846;

double param(const Coefficient& c, size_t i) {
  return i < c.params.size() ? c.params[i] : 0.0;
}

}  // namespace

Coefficient Coefficient::constant(double c) {
  return {CoeffKind::Constant, {c}, {}};
}

Coefficient Coefficient::affine(double a, double bx, double by) {
  return {CoeffKind::Affine, {a, bx, by}, {}};
}

Coefficient Coefficient::quadratic(std::vector<double> p) {
  p.resize(6, 0.0);
  return {CoeffKind::Quadratic, std::move(p), {}};
}

Coefficient Coefficient::sinusoidal(double amp, double fx, double fy, double off) {
  return {CoeffKind::Sinusoidal, {amp, fx, fy, off}, {}};
}

Coefficient Coefficient::radial(double cx, double cy, double r0) {
  return {CoeffKind::Radial, {cx, cy, r0}, {}};
}

Coefficient Coefficient::grid_sampled(std::vector<double> table) {
  return {CoeffKind::GridSampled, {}, std::move(table)};
}

const char* coeff_kind_name(CoeffKind kind) {
  switch (kind) {
    case CoeffKind::Constant: return "constant";
    case CoeffKind::Affine: return "affine";
    case CoeffKind::Quadratic: return "quadratic";
    case CoeffKind::Sinusoidal: return "sinusoidal";
    case CoeffKind::Radial: return "radial";
    default: return "grid_sampled";
  }
}

CoeffKind coeff_kind_from_name(const std::string& name) {
  if (name == "constant") return CoeffKind::Constant;
  if (name == "affine") return CoeffKind::Affine;
  if (name == "quadratic") return CoeffKind::Quadratic;
  if (name == "sinusoidal") return CoeffKind::Sinusoidal;
  if (name == "radial") return CoeffKind::Radial;
  if (name == "grid_sampled") return CoeffKind::GridSampled;
  throw ParseError("unknown coefficient kind: " + name);
}

double coeff_value(const Coefficient& c, Vec2 p, int dim) {
  switch (c.kind) {
    case CoeffKind::Constant:
      return param(c, 0);
    case CoeffKind::Affine:
      return param(c, 0) + param(c, 1) * p.x + param(c, 2) * p.y;
    case CoeffKind::Quadratic:
      return param(c, 0) + param(c, 1) * p.x + param(c, 2) * p.y +
             param(c, 3) * p.x * p.x + param(c, 4) * p.x * p.y + param(c, 5) * p.y * p.y;
    case CoeffKind::Sinusoidal: {
      const double s = std::sin(kPi * param(c, 1) * p.x);
      const double t = dim == 2 ? std::sin(kPi * param(c, 2) * p.y) : 1.0;
      return param(c, 0) * s * t + param(c, 3);
    }
    case CoeffKind::Radial: {
      const double dx = p.x - param(c, 0);
      const double dy = dim == 2 ? p.y - param(c, 1) : 0.0;
      return std::hypot(dx, dy) - param(c, 2);
    }
    default:
      throw DomainError("coeff_value: grid_sampled has no pointwise form");
  }
}

Vec2 coeff_gradient(const Coefficient& c, Vec2 p, int dim) {
  switch (c.kind) {
    case CoeffKind::Constant:
      return {0.0, 0.0};
    case CoeffKind::Affine:
      return {param(c, 1), dim == 2 ? param(c, 2) : 0.0};
    case CoeffKind::Quadratic:
      return {param(c, 1) + 2.0 * param(c, 3) * p.x + param(c, 4) * p.y,
              dim == 2 ? param(c, 2) + param(c, 4) * p.x + 2.0 * param(c, 5) * p.y : 0.0};
    case CoeffKind::Sinusoidal: {
      const double ax = kPi * param(c, 1);
      if (dim == 1) return {param(c, 0) * ax * std::cos(ax * p.x), 0.0};
      const double ay = kPi * param(c, 2);
      return {param(c, 0) * ax * std::cos(ax * p.x) * std::sin(ay * p.y),
              param(c, 0) * ay * std::sin(ax * p.x) * std::cos(ay * p.y)};
    }
    case CoeffKind::Radial: {
      const double dx = p.x - param(c, 0);
      const double dy = dim == 2 ? p.y - param(c, 1) : 0.0;
      const double r = std::hypot(dx, dy);
      if (r == 0.0) throw DomainError("coeff_gradient: radial kind at its center");
      return {dx / r, dy / r};
    }
    default:
      throw DomainError("coeff_gradient: grid_sampled has no pointwise form");
  }
}

std::array<double, 3> coeff_hessian(const Coefficient& c, Vec2 p, int dim) {
  switch (c.kind) {
    case CoeffKind::Constant:
    case CoeffKind::Affine:
      return {0.0, 0.0, 0.0};
    case CoeffKind::Quadratic:
      return {2.0 * param(c, 3), dim == 2 ? param(c, 4) : 0.0,
              dim == 2 ? 2.0 * param(c, 5) : 0.0};
    case CoeffKind::Sinusoidal: {
      const double ax = kPi * param(c, 1);
      if (dim == 1)
        return {-param(c, 0) * ax * ax * std::sin(ax * p.x), 0.0, 0.0};
      const double ay = kPi * param(c, 2);
      const double sx = std::sin(ax * p.x), cx = std::cos(ax * p.x);
      const double sy = std::sin(ay * p.y), cy = std::cos(ay * p.y);
      return {-param(c, 0) * ax * ax * sx * sy, param(c, 0) * ax * ay * cx * cy,
              -param(c, 0) * ay * ay * sx * sy};
    }
    default:
      throw DomainError("coeff_hessian: preset lacks closed-form second derivatives");
  }
}

bool coeff_twice_differentiable(const Coefficient& c) {
  switch (c.kind) {
    case CoeffKind::Constant:
    case CoeffKind::Affine:
    case CoeffKind::Quadratic:
    case CoeffKind::Sinusoidal:
      return true;
    default:
      return false;
  }
}

std::vector<double> sample(const Coefficient& c, const Mesh& mesh) {
  if (c.kind == CoeffKind::GridSampled) {
    if (static_cast<int>(c.values.size()) != mesh.node_count())
      throw ValidationError("grid_sampled table does not match the mesh node count");
    return c.values;
  }
  std::vector<double> out(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i)
    out[i] = coeff_value(c, mesh.nodes[i], mesh.dim());
  return out;
}

double two_phase_value(const ProblemSpec& spec, Vec2 x, double u, TwoPhaseTerm which) {
  const int dim = spec.domain.dim();
  if (which == TwoPhaseTerm::FTerm) {
    const double f = u > 0.0 ? coeff_value(spec.f_plus, x, dim)
                             : coeff_value(spec.f_minus, x, dim);
    return f * u;
  }
  if (u == 0.0 && spec.c_gamma > 0.0) return 0.0;
  return u > 0.0 ? coeff_value(spec.gamma_plus, x, dim)
                 : coeff_value(spec.gamma_minus, x, dim);
}

SampledCoefficients sample_all(const ProblemSpec& spec, const Mesh& mesh) {
  return {sample(spec.f_plus, mesh), sample(spec.f_minus, mesh),
          sample(spec.gamma_plus, mesh), sample(spec.gamma_minus, mesh),
          sample(spec.psi, mesh)};
}

void validate_on_mesh(const ProblemSpec& spec, const Mesh& mesh) {
  const SampledCoefficients s = sample_all(spec, mesh);
  auto check_finite = [](const std::vector<double>& v, const char* name) {
    for (double x : v)
      if (!std::isfinite(x))
        throw ValidationError(std::string("coefficient ") + name + " is not finite on the mesh");
  };
  check_finite(s.f_plus, "f_plus");
  check_finite(s.f_minus, "f_minus");
  check_finite(s.gamma_plus, "gamma_plus");
  check_finite(s.gamma_minus, "gamma_minus");
  check_finite(s.psi, "psi");
  if (spec.c_gamma < 0.0) throw ValidationError("c_gamma must be nonnegative");
  if (spec.c_gamma > 0.0) {
    for (int i = 0; i < mesh.node_count(); ++i) {
      if (s.gamma_plus[i] < spec.c_gamma || s.gamma_minus[i] < spec.c_gamma)
        throw ValidationError("gamma coefficients fall below the declared c_gamma");
    }
  }
  if (!(spec.smoothing_delta > 0.0))
    throw ValidationError("smoothing_delta must be positive");
}

}  // namespace twophase
