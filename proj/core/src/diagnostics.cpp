#include "twophase/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

constexpr double kInvE = 0.36787944117144233;

struct InnerBox {
  double x0, x1, y0, y1;
  int dim;
};

InnerBox inner_region(const Domain& d, double margin) {
  if (!(margin > 0.0)) throw DomainError("inner_margin must be positive");
  InnerBox box{d.x0 + margin, d.x1 - margin, 0.0, 0.0, d.dim()};
  if (d.kind == Domain::Kind::Rectangle) {
    box.y0 = d.y0 + margin;
    box.y1 = d.y1 - margin;
    if (!(box.y0 < box.y1)) throw DomainError("inner_margin leaves an empty region");
  }
  if (!(box.x0 < box.x1)) throw DomainError("inner_margin leaves an empty region");
  return box;
}

}  // namespace

std::pair<double, double> linf_report(const Mesh& mesh, const ScalarField& u,
                                      const std::vector<double>& psi_samples) {
  if (static_cast<int>(u.size()) != mesh.node_count() ||
      static_cast<int>(psi_samples.size()) != mesh.node_count())
    throw DimensionMismatch("linf_report: field length != node count");
  double linf = 0.0, bsup = 0.0;
  for (int i = 0; i < mesh.node_count(); ++i) {
    linf = std::max(linf, std::abs(u[i]));
    if (mesh.boundary[i]) bsup = std::max(bsup, std::abs(psi_samples[i]));
  }
  return {linf, bsup};
}

double log_lipschitz_modulus(const Mesh& mesh, const ScalarField& u, double inner_margin,
                             double r0, int pair_count, std::uint64_t seed) {
  if (!(r0 > 0.0) || r0 >= kInvE)
    throw DomainError("log_lipschitz_modulus: requires 0 < r0 < 1/e");
  if (pair_count < 1) throw DomainError("log_lipschitz_modulus: pair_count must be positive");
  const InnerBox box = inner_region(mesh.domain, inner_margin);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x0, box.x1);
  std::uniform_real_distribution<double> uy(box.y0, box.y1);
  std::uniform_real_distribution<double> ur(0.0, r0);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * 3.14159265358979323846);

  double modulus = 0.0;
  int accepted = 0;
  while (accepted < pair_count) {
    Vec2 x{ux(rng), box.dim == 2 ? uy(rng) : 0.0};
    const double r = ur(rng);
    if (r < 1e-9) continue;
    Vec2 y;
    if (box.dim == 2) {
      const double ang = uang(rng);
      y = {x.x + r * std::cos(ang), x.y + r * std::sin(ang)};
      if (y.x < box.x0 || y.x > box.x1 || y.y < box.y0 || y.y > box.y1) continue;
    } else {
      const double ang = uang(rng);
      y = {x.x + (ang < 3.14159265358979323846 ? r : -r), 0.0};
      if (y.x < box.x0 || y.x > box.x1) continue;
    }
    ++accepted;
    const double dist = norm(y - x);
    const double denom = dist * std::abs(std::log(dist));
    const double diff = std::abs(interpolate(mesh, u, x) - interpolate(mesh, u, y));
    modulus = std::max(modulus, diff / denom);
  }
  return modulus;
}

double bmo_seminorm_gradient(const Mesh& mesh, const ScalarField& u, double inner_margin,
                             const std::vector<double>& radii) {
  if (mesh.dim() != 2)
    throw DomainError("bmo_seminorm_gradient: defined on 2D meshes");
  const InnerBox box = inner_region(mesh.domain, inner_margin);
  for (double r : radii)
    if (!(r > 0.0)) throw DomainError("bmo_seminorm_gradient: radii must be positive");

  // Element centroids and gradients once.
  const int ne = mesh.elem_count();
  std::vector<Vec2> centroid(ne), grad(ne);
  std::vector<double> area(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elems[e];
    centroid[e] = (1.0 / 3.0) * (mesh.nodes[el[0]] + mesh.nodes[el[1]] + mesh.nodes[el[2]]);
    grad[e] = element_gradient(mesh, u, e);
    area[e] = mesh.elem_measure(e);
  }

  // Deterministic lattice of ball centers across the inner region.
  constexpr int kCentersPerAxis = 9;
  double seminorm = 0.0;
  for (double r : radii) {
    for (int iy = 0; iy < kCentersPerAxis; ++iy) {
      for (int ix = 0; ix < kCentersPerAxis; ++ix) {
        const Vec2 c{box.x0 + (box.x1 - box.x0) * (ix + 0.5) / kCentersPerAxis,
                     box.y0 + (box.y1 - box.y0) * (iy + 0.5) / kCentersPerAxis};
        Vec2 mean{0.0, 0.0};
        double total = 0.0;
        for (int e = 0; e < ne; ++e) {
          if (norm2(centroid[e] - c) < r * r) {
            mean = mean + area[e] * grad[e];
            total += area[e];
          }
        }
        if (total <= 0.0) continue;
        mean = (1.0 / total) * mean;
        double osc = 0.0;
        for (int e = 0; e < ne; ++e)
          if (norm2(centroid[e] - c) < r * r) osc += area[e] * norm(grad[e] - mean);
        seminorm = std::max(seminorm, osc / total);
      }
    }
  }
  return seminorm;
}

ResidualStats weak_residual(const ProblemSpec& spec, const Mesh& mesh, const ScalarField& u,
                            double band_epsilon) {
  if (band_epsilon < 0.0) throw DomainError("weak_residual: band_epsilon must be >= 0");
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("weak_residual: field length != node count");

  const SampledCoefficients samples = sample_all(spec, mesh);
  const std::vector<double> weights = lumped_node_weights(mesh);
  const int nn = mesh.node_count();
  const int npe = mesh.nodes_per_elem();

  std::vector<std::vector<int>> support(nn);
  for (int e = 0; e < mesh.elem_count(); ++e)
    for (int v = 0; v < npe; ++v) support[mesh.elems[e][v]].push_back(e);

  ResidualStats stats;
  double sum_plus = 0.0, sum_minus = 0.0;
  for (int i = 0; i < nn; ++i) {
    if (mesh.boundary[i] || support[i].empty()) continue;
    // Admissible: every node of the support patch clear of the band and all
    // on one side (zero belongs to the minus phase).
    bool admissible = true;
    bool plus = u[i] > 0.0;
    for (int e : support[i]) {
      for (int v = 0; v < npe; ++v) {
        const double uv = u[mesh.elems[e][v]];
        if (std::abs(uv) <= band_epsilon || (uv > 0.0) != plus || uv == 0.0) {
          admissible = false;
          break;
        }
      }
      if (!admissible) break;
    }
    if (!admissible) continue;

    double flux_part = 0.0;
    double h1_scale2 = 0.0;
    for (int e : support[i]) {
      const auto& el = mesh.elems[e];
      int local = 0;
      while (el[local] != i) ++local;
      const Vec2 shape = mesh.shape_gradient(e, local);
      const double meas = mesh.elem_measure(e);
      flux_part += meas * dot(spec.law.flux(element_gradient(mesh, u, e)), shape);
      // H1 norm of the hat: |grad hat|^2 + hat^2 per element; int hat^2 over a
      // simplex is measure/((d+1)(d+2)/2) = measure/6 in 2D, measure/3 in 1D.
      h1_scale2 += meas * (norm2(shape) + (mesh.dim() == 2 ? 1.0 / 6.0 : 1.0 / 3.0));
    }
    const double f_phase = plus ? samples.f_plus[i] : samples.f_minus[i];
    const double residual = std::abs(flux_part - weights[i] * f_phase) / std::sqrt(h1_scale2);

    if (plus) {
      stats.max_plus = std::max(stats.max_plus, residual);
      sum_plus += residual;
      ++stats.count_plus;
    } else {
      stats.max_minus = std::max(stats.max_minus, residual);
      sum_minus += residual;
      ++stats.count_minus;
    }
  }
  if (stats.count_plus > 0) stats.mean_plus = sum_plus / stats.count_plus;
  if (stats.count_minus > 0) stats.mean_minus = sum_minus / stats.count_minus;
  return stats;
}

std::vector<double> operator_identity_check(const Coefficient& analytic_u, const Domain& domain,
                                            const std::vector<int>& mesh_resolutions) {
  if (!coeff_twice_differentiable(analytic_u))
    throw DomainError("operator_identity_check: preset lacks closed-form second derivatives");
  if (domain.dim() != 2)
    throw DomainError("operator_identity_check: defined on rectangle domains");
  if (mesh_resolutions.empty())
    throw DomainError("operator_identity_check: needs at least one resolution");
  for (int r : mesh_resolutions)
    if (r < 4) throw DomainError("operator_identity_check: resolutions must be >= 4");

  // Fixed interior evaluation lattice from the coarsest resolution, so the
  // errors of different step sizes are compared at identical points.
  const int coarse = *std::min_element(mesh_resolutions.begin(), mesh_resolutions.end());
  std::vector<Vec2> points;
  for (int iy = 1; iy < coarse; ++iy)
    for (int ix = 1; ix < coarse; ++ix)
      points.push_back({domain.x0 + (domain.x1 - domain.x0) * ix / coarse,
                        domain.y0 + (domain.y1 - domain.y0) * iy / coarse});

  auto flux_x = [&](Vec2 p) {
    const Vec2 g = coeff_gradient(analytic_u, p, 2);
    return 2.0 * std::exp(norm2(g)) * g.x;
  };
  auto flux_y = [&](Vec2 p) {
    const Vec2 g = coeff_gradient(analytic_u, p, 2);
    return 2.0 * std::exp(norm2(g)) * g.y;
  };

  std::vector<double> errors;
  for (int res : mesh_resolutions) {
    const double h = (domain.x1 - domain.x0) / res;
    double max_err = 0.0;
    for (const Vec2& p : points) {
      const double div_flux = (flux_x({p.x + h, p.y}) - flux_x({p.x - h, p.y})) / (2.0 * h) +
                              (flux_y({p.x, p.y + h}) - flux_y({p.x, p.y - h})) / (2.0 * h);
      const Vec2 g = coeff_gradient(analytic_u, p, 2);
      const auto [uxx, uxy, uyy] = coeff_hessian(analytic_u, p, 2);
      const double lap = uxx + uyy;
      const double inf_lap = g.x * g.x * uxx + 2.0 * g.x * g.y * uxy + g.y * g.y * uyy;
      const double expanded = 2.0 * std::exp(norm2(g)) * (lap + 2.0 * inf_lap);
      max_err = std::max(max_err, std::abs(div_flux - expanded));
    }
    errors.push_back(max_err);
  }
  return errors;
}

std::vector<ComparisonCheck> comparison_inequality_check(const EnergyLaw& law, const Mesh& mesh,
                                                         const ScalarField& u,
                                                         const std::vector<Ball>& balls,
                                                         const SolverOptions& opts) {
  if (law.infinite())
    throw DomainError("comparison_inequality_check: requires a finite truncation order");
  std::vector<ComparisonCheck> checks;
  checks.reserve(balls.size());
  for (const Ball& ball : balls) {
    const ScalarField v = phi_harmonic_replacement(law, mesh, u, ball, opts);
    ComparisonCheck check;
    check.center = ball.center;
    check.radius = ball.radius;
    check.order = law.order;
    for (int e : ball_support_elements(mesh, ball)) {
      const double meas = mesh.elem_measure(e);
      const Vec2 gu = element_gradient(mesh, u, e);
      const Vec2 gv = element_gradient(mesh, v, e);
      check.lhs += meas * law.value(norm(gu - gv));
      check.rhs += meas * (law.value(norm(gu)) - law.value(norm(gv)));
    }
    if (check.rhs > opts.grad_tol)
      check.ratio = check.lhs / (static_cast<double>(law.order) * check.rhs);
    checks.push_back(check);
  }
  return checks;
}

std::vector<Ball> sample_inner_balls(const Domain& domain, double inner_margin, int count,
                                     double r_min, double r_max, std::uint64_t seed) {
  const InnerBox box = inner_region(domain, inner_margin);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x0, box.x1);
  std::uniform_real_distribution<double> uy(box.y0, box.y1);
  std::uniform_real_distribution<double> ur(r_min, r_max);
  std::vector<Ball> balls;
  balls.reserve(count);
  while (static_cast<int>(balls.size()) < count) {
    Ball b;
    b.center = {ux(rng), box.dim == 2 ? uy(rng) : 0.0};
    b.radius = ur(rng);
    // Keep the ball inside the full domain.
    if (b.center.x - b.radius < domain.x0 || b.center.x + b.radius > domain.x1) continue;
    if (box.dim == 2 &&
        (b.center.y - b.radius < domain.y0 || b.center.y + b.radius > domain.y1))
      continue;
    balls.push_back(b);
  }
  return balls;
}

DiagnosticsReport run_diagnostics(const ProblemSpec& spec, const Mesh& mesh,
                                  const ScalarField& u, const DiagnosticsOptions& opts) {
  DiagnosticsReport rep;
  const std::vector<double> psi = sample(spec.psi, mesh);
  std::tie(rep.linf, rep.boundary_sup) = linf_report(mesh, u, psi);
  const double margin = opts.inner_margin * mesh.domain.diameter();
  rep.loglip_modulus =
      log_lipschitz_modulus(mesh, u, margin, opts.loglip_r0, opts.loglip_pairs, opts.seed);
  if (mesh.dim() == 2) {
    std::vector<double> radii = opts.bmo_radii;
    for (double& r : radii) r *= mesh.domain.diameter();
    rep.bmo_seminorm = bmo_seminorm_gradient(mesh, u, margin, radii);
  } else {
    rep.notes.push_back("bmo_seminorm: skipped on 1D meshes");
  }
  rep.residual = weak_residual(spec, mesh, u, opts.band_epsilon);
  if (rep.residual.empty()) rep.notes.push_back("weak_residual: no admissible test nodes");

  if (mesh.dim() == 2 && opts.comparison_balls > 0) {
    const double diam = mesh.domain.diameter();
    const std::vector<Ball> balls = sample_inner_balls(
        mesh.domain, 0.2 * diam, opts.comparison_balls, 0.05 * diam, 0.12 * diam, opts.seed);
    SolverOptions sopts;
    sopts.grad_tol = 1e-9;
    sopts.max_iters = 2000;
    for (int k : opts.comparison_orders) {
      auto checks = comparison_inequality_check(EnergyLaw::truncated(k, spec.law.exp_cap), mesh,
                                                u, balls, sopts);
      rep.comparison_checks.insert(rep.comparison_checks.end(), checks.begin(), checks.end());
    }
  }

  if (mesh.dim() == 2 && !opts.identity_resolutions.empty()) {
    const Coefficient quad = Coefficient::quadratic({0.0, 0.0, 0.0, 1.0, 0.0, 1.0});
    const Domain unit = Domain::rectangle(0.0, 1.0, 0.0, 1.0);
    const auto errs = operator_identity_check(quad, unit, opts.identity_resolutions);
    rep.identity_error = errs.back();
  }
  return rep;
}

}  // namespace twophase
