#include "twophase/energy.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(i) for i in [0, n) on up to `threads` workers over contiguous
// chunks. Callers store per-index results and reduce sequentially afterwards.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2048) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min<int>(threads, std::max(1, n / 1024));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

double smoothed_heaviside(const SmoothedIndicator& ind, double s) {
  if (s <= 0.0) return 0.0;
  if (s >= ind.delta) return 1.0;
  return s / ind.delta;
}

EnergyModel::EnergyModel(const ProblemSpec& spec, const Mesh& mesh, SmoothedIndicator ind,
                         std::optional<EnergyLaw> law_override, int threads)
    : mesh_(&mesh),
      law_(law_override.value_or(spec.law)),
      ind_(ind),
      threads_(threads < 1 ? 1 : threads),
      samples_(sample_all(spec, mesh)),
      weights_(lumped_node_weights(mesh)) {
  if (!(ind_.delta > 0.0)) throw DomainError("SmoothedIndicator: delta must be positive");
}

EnergyBreakdown EnergyModel::breakdown(const ScalarField& u) const {
  const Mesh& m = *mesh_;
  if (static_cast<int>(u.size()) != m.node_count())
    throw DimensionMismatch("energy: field length != node count");

  const int ne = m.elem_count();
  std::vector<double> elem_phi(ne);
  std::atomic<bool> overflow{false};
  parallel_for(ne, threads_, [&](int e) {
    const Vec2 g = element_gradient(m, u, e);
    const double t = norm2(g);
    if (law_.infinite() && t > law_.exp_cap) {
      overflow.store(true, std::memory_order_relaxed);
      elem_phi[e] = kInf;
      return;
    }
    elem_phi[e] = m.elem_measure(e) * law_.value(std::sqrt(t));
  });

  EnergyBreakdown b;
  if (overflow.load()) {
    b.phi_term = kInf;
  } else {
    for (int e = 0; e < ne; ++e) b.phi_term += elem_phi[e];
  }

  const int nn = m.node_count();
  std::vector<double> node_f(nn), node_g(nn);
  parallel_for(nn, threads_, [&](int i) {
    const double h = smoothed_heaviside(ind_, u[i]);
    const double fd = samples_.f_plus[i] * h + samples_.f_minus[i] * (1.0 - h);
    const double gd = samples_.gamma_plus[i] * h + samples_.gamma_minus[i] * (1.0 - h);
    node_f[i] = -weights_[i] * fd * u[i];
    node_g[i] = weights_[i] * gd;
  });
  for (int i = 0; i < nn; ++i) b.f_term += node_f[i];
  for (int i = 0; i < nn; ++i) b.gamma_term += node_g[i];
  return b;
}

double EnergyModel::value(const ScalarField& u) const { return breakdown(u).total(); }

ScalarField EnergyModel::gradient(const ScalarField& u) const {
  const Mesh& m = *mesh_;
  if (static_cast<int>(u.size()) != m.node_count())
    throw DimensionMismatch("energy_gradient: field length != node count");

  const int ne = m.elem_count();
  const int npe = m.nodes_per_elem();
  // Per-element contributions first, scattered in fixed element order below.
  std::vector<double> contrib(static_cast<size_t>(ne) * npe);
  parallel_for(ne, threads_, [&](int e) {
    const Vec2 g = element_gradient(m, u, e);
    const Vec2 f = law_.flux(g);  // throws OverflowError past the cap
    const double meas = m.elem_measure(e);
    for (int v = 0; v < npe; ++v)
      contrib[static_cast<size_t>(e) * npe + v] = meas * dot(f, m.shape_gradient(e, v));
  });

  ScalarField grad(m.node_count(), 0.0);
  for (int e = 0; e < ne; ++e)
    for (int v = 0; v < npe; ++v) grad[m.elems[e][v]] += contrib[static_cast<size_t>(e) * npe + v];

  const double delta = ind_.delta;
  for (int i = 0; i < m.node_count(); ++i) {
    if (m.boundary[i]) {
      grad[i] = 0.0;
      continue;
    }
    const double ui = u[i];
    const double h = smoothed_heaviside(ind_, ui);
    // One-sided ramp slope from above at the kinks u = 0 and u = delta.
    const double hp = (ui >= 0.0 && ui < delta) ? 1.0 / delta : 0.0;
    const double fd = samples_.f_plus[i] * h + samples_.f_minus[i] * (1.0 - h);
    const double dfd = (samples_.f_plus[i] - samples_.f_minus[i]) * hp;
    const double dgd = (samples_.gamma_plus[i] - samples_.gamma_minus[i]) * hp;
    grad[i] += weights_[i] * (-(dfd * ui + fd) + dgd);
  }
  return grad;
}

double energy(const ProblemSpec& spec, const Mesh& mesh, const ScalarField& u,
              const SmoothedIndicator& ind) {
  return EnergyModel(spec, mesh, ind).value(u);
}

ScalarField energy_gradient(const ProblemSpec& spec, const Mesh& mesh, const ScalarField& u,
                            const SmoothedIndicator& ind) {
  return EnergyModel(spec, mesh, ind).gradient(u);
}

EnergyBreakdown energy_breakdown(const ProblemSpec& spec, const Mesh& mesh,
                                 const ScalarField& u, const SmoothedIndicator& ind) {
  return EnergyModel(spec, mesh, ind).breakdown(u);
}

}  // namespace twophase
