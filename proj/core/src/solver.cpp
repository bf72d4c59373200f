#include "twophase/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <random>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFloor = 1e-20;

double sup_norm(const ScalarField& v, const std::vector<char>& free_mask) {
  double m = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    if (free_mask[i]) m = std::max(m, std::abs(v[i]));
  return m;
}

double masked_dot(const ScalarField& a, const ScalarField& b, const std::vector<char>& free_mask) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    if (free_mask[i]) s += a[i] * b[i];
  return s;
}

struct DescentOutcome {
  StageStatus status = StageStatus::Converged;
  int iterations = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

// Limited-memory quasi-Newton descent with Armijo backtracking over the free
// components. `value` must return +inf for inadmissible iterates; `gradient`
// is only called at admissible ones.
DescentOutcome descend(ScalarField& u, const std::vector<char>& free_mask,
                       const std::function<double(const ScalarField&)>& value,
                       const std::function<ScalarField(const ScalarField&)>& gradient,
                       const SolverOptions& opts, int trace_k, double trace_delta,
                       std::vector<TraceRow>* trace) {
  const size_t n = u.size();
  double energy = value(u);
  if (!std::isfinite(energy)) throw NonFiniteEnergy("descent start has non-finite energy");

  auto masked_gradient = [&](const ScalarField& x) {
    ScalarField g = gradient(x);
    for (size_t i = 0; i < n; ++i)
      if (!free_mask[i]) g[i] = 0.0;
    return g;
  };

  ScalarField grad = masked_gradient(u);
  double gnorm = sup_norm(grad, free_mask);
  if (trace) trace->push_back({trace_k, trace_delta, 0, energy, gnorm, 0.0});

  std::deque<std::pair<ScalarField, ScalarField>> memory;  // (s, y) pairs
  ScalarField direction(n, 0.0), trial(n, 0.0);

  // The ramp leaves kinks in the phase terms, so a minimizer can sit on a
  // facet where the one-sided gradient never reaches the tolerance. Stop
  // once accepted steps no longer move the energy at machine scale.
  int tiny_progress = 0;
  bool retried_fresh = false;
  double prev_step = 1.0;

  DescentOutcome out;
  for (int it = 1; it <= opts.max_iters; ++it) {
    if (gnorm <= opts.grad_tol) break;

    // Two-loop recursion for d = -H g; falls back to steepest descent when
    // the result is not a descent direction.
    direction = grad;
    std::vector<double> alpha(memory.size());
    std::vector<double> rho(memory.size());
    for (size_t j = memory.size(); j-- > 0;) {
      const auto& [s, y] = memory[j];
      rho[j] = 1.0 / masked_dot(y, s, free_mask);
      alpha[j] = rho[j] * masked_dot(s, direction, free_mask);
      for (size_t i = 0; i < n; ++i) direction[i] -= alpha[j] * y[i];
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      const double gamma = masked_dot(s, y, free_mask) / masked_dot(y, y, free_mask);
      for (size_t i = 0; i < n; ++i) direction[i] *= gamma;
    }
    for (size_t j = 0; j < memory.size(); ++j) {
      const auto& [s, y] = memory[j];
      const double beta = rho[j] * masked_dot(y, direction, free_mask);
      for (size_t i = 0; i < n; ++i) direction[i] += (alpha[j] - beta) * s[i];
    }
    for (size_t i = 0; i < n; ++i) direction[i] = -direction[i];

    double dg = masked_dot(direction, grad, free_mask);
    if (!(dg < 0.0) || !std::isfinite(dg)) {
      for (size_t i = 0; i < n; ++i) direction[i] = free_mask[i] ? -grad[i] : 0.0;
      dg = -masked_dot(grad, grad, free_mask);
      memory.clear();
    }

    // Warm initial step: quasi-Newton phases recover step 1 within a few
    // iterations, while facet crawls stop paying a full backtrack cascade.
    double step = std::min(1.0, 4.0 * prev_step);
    double trial_energy = kInf;
    bool accepted = false;
    while (step >= kStepFloor) {
      for (size_t i = 0; i < n; ++i)
        trial[i] = free_mask[i] ? u[i] + step * direction[i] : u[i];
      trial_energy = value(trial);
      if (trial_energy <= energy + opts.armijo_c * step * dg) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      // A facet of the kinked phase terms stalls the search legitimately; a
      // blown-up gradient next to the exponential wall does not.
      if (it == 1 && gnorm > 1e8 * (1.0 + std::abs(energy)))
        throw LineSearchFailure("no admissible step above the machine floor at the first iterate");
      out.status = StageStatus::Stalled;
      break;
    }

    prev_step = step;
    const double decrease = energy - trial_energy;
    const bool facet_step = step <= 1e-5 && decrease <= 1e-13 * std::max(1.0, std::abs(energy));
    if (facet_step) {
      if (++tiny_progress >= 8) {
        if (!retried_fresh) {
          // One fresh full-step steepest pass before giving up: the warm tiny
          // steps can mask progress available to the smooth components.
          retried_fresh = true;
          tiny_progress = 0;
          memory.clear();
          prev_step = 1.0;
        } else {
          u.swap(trial);
          energy = trial_energy;
          out.iterations = it;
          out.status = StageStatus::Stalled;
          break;
        }
      }
    } else {
      tiny_progress = 0;
      retried_fresh = false;
    }

    ScalarField new_grad = masked_gradient(trial);
    ScalarField s(n, 0.0), y(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - u[i];
      y[i] = new_grad[i] - grad[i];
    }
    const double sy = masked_dot(s, y, free_mask);
    const double ss = masked_dot(s, s, free_mask);
    const double yy = masked_dot(y, y, free_mask);
    if (sy > 1e-12 * std::sqrt(ss * yy) && std::isfinite(sy)) {
      memory.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(memory.size()) > opts.lbfgs_memory) memory.pop_front();
    }

    u.swap(trial);
    energy = trial_energy;
    grad.swap(new_grad);
    gnorm = sup_norm(grad, free_mask);
    out.iterations = it;
    if (trace) trace->push_back({trace_k, trace_delta, it, energy, gnorm, step});
  }

  if (out.status != StageStatus::Stalled)
    out.status = gnorm <= opts.grad_tol ? StageStatus::Converged : StageStatus::MaxIterations;
  out.energy = energy;
  out.grad_norm = gnorm;
  return out;
}

void validate_options(const SolverOptions& opts) {
  if (opts.k_schedule.empty()) throw ValidationError("k_schedule must be nonempty");
  if (opts.delta_schedule.empty()) throw ValidationError("delta_schedule must be nonempty");
  auto rank = [](int k) {
    return k == EnergyLaw::kInfinite ? std::numeric_limits<int>::max() : k;
  };
  for (size_t i = 0; i < opts.k_schedule.size(); ++i) {
    const int k = opts.k_schedule[i];
    if (k != EnergyLaw::kInfinite && k < 1)
      throw ValidationError("k_schedule entries must be >= 1 or infinite");
    if (i > 0 && rank(k) <= rank(opts.k_schedule[i - 1]))
      throw ValidationError("k_schedule must be strictly ascending");
  }
  for (size_t i = 0; i < opts.delta_schedule.size(); ++i) {
    if (!(opts.delta_schedule[i] > 0.0))
      throw ValidationError("delta_schedule entries must be positive");
    if (i > 0 && !(opts.delta_schedule[i] < opts.delta_schedule[i - 1]))
      throw ValidationError("delta_schedule must be strictly descending");
  }
  if (!(opts.grad_tol > 0.0) || opts.max_iters < 1)
    throw ValidationError("tolerances must be positive");
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0))
    throw ValidationError("armijo_c must lie in (0,1)");
  if (!(opts.backtrack_factor > 0.0 && opts.backtrack_factor < 1.0))
    throw ValidationError("backtrack_factor must lie in (0,1)");
  if (opts.starts < 1) throw ValidationError("starts must be >= 1");
}

std::vector<char> interior_mask(const Mesh& mesh) {
  std::vector<char> mask(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) mask[i] = mesh.boundary[i] ? 0 : 1;
  return mask;
}

void check_dirichlet(const Mesh& mesh, const ScalarField& u, const std::vector<double>& psi) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("minimize_stage: field length != node count");
  for (int i = 0; i < mesh.node_count(); ++i)
    if (mesh.boundary[i] && u[i] != psi[i])
      throw ValidationError("starting iterate does not satisfy the Dirichlet data");
}

SolveResult run_stage(const EnergyModel& model, ScalarField u0, const SolverOptions& opts,
                      int trace_k, double trace_delta, bool initializer) {
  const Mesh& mesh = model.mesh();
  const std::vector<char> free_mask = interior_mask(mesh);
  SolveResult res;
  auto value_fn = [&](const ScalarField& x) { return model.value(x); };
  auto grad_fn = [&](const ScalarField& x) { return model.gradient(x); };
  DescentOutcome out =
      descend(u0, free_mask, value_fn, grad_fn, opts, trace_k, trace_delta, &res.trace);

  // Facet polish: a stalled stage usually has a few nodes wedged against the
  // phase-term kinks at 0 and delta. Pin those exactly onto the kink and
  // drive the remaining smooth coordinates to the gradient tolerance, so
  // stage results are reproducible at grad_tol rather than at the stall
  // noise. Repeat if the polish exposes a new facet.
  for (int round = 0; round < 3 && out.status == StageStatus::Stalled; ++round) {
    double scale = 1.0;
    for (size_t i = 0; i < u0.size(); ++i) scale = std::max(scale, std::abs(u0[i]));
    const double snap = 1e-7 * scale;
    const double delta = model.delta();
    std::vector<char> smooth_mask = free_mask;
    bool snapped = false;
    int smooth_nodes = 0;
    for (size_t i = 0; i < u0.size(); ++i) {
      if (!free_mask[i]) continue;
      if (std::abs(u0[i]) <= snap) {
        u0[i] = 0.0;
        smooth_mask[i] = 0;
        snapped = true;
      } else if (std::abs(u0[i] - delta) <= snap) {
        u0[i] = delta;
        smooth_mask[i] = 0;
        snapped = true;
      } else {
        ++smooth_nodes;
      }
    }
    if (!snapped || smooth_nodes == 0) break;
    const DescentOutcome polished =
        descend(u0, smooth_mask, value_fn, grad_fn, opts, trace_k, trace_delta, &res.trace);
    out.iterations += polished.iterations;
    out.energy = polished.energy;
    out.grad_norm = polished.grad_norm;
    if (polished.status == StageStatus::Converged) break;
    out.status = polished.status;
  }

  res.field = std::move(u0);
  res.energy_value = out.energy;
  res.breakdown = model.breakdown(res.field);
  res.iterations = out.iterations;
  res.final_grad_norm = out.grad_norm;
  res.per_stage.push_back({trace_k, trace_delta, initializer, out.status, out.iterations,
                           out.energy, out.grad_norm});
  return res;
}

SolveResult solve_single(const ProblemSpec& spec, const Mesh& mesh, const SolverOptions& opts,
                         bool record_stage_fields, const ScalarField& u_start) {
  SolveResult total;
  ScalarField u = u_start;

  // Boundary-datum extension: order-1 law, no phase terms.
  {
    ProblemSpec init_spec = spec;
    init_spec.f_plus = Coefficient::constant(0.0);
    init_spec.f_minus = Coefficient::constant(0.0);
    init_spec.gamma_plus = Coefficient::constant(0.0);
    init_spec.gamma_minus = Coefficient::constant(0.0);
    EnergyModel model(init_spec, mesh, SmoothedIndicator{opts.delta_schedule.front()},
                      EnergyLaw::truncated(1, spec.law.exp_cap), opts.threads);
    SolveResult stage = run_stage(model, std::move(u), opts, 1, opts.delta_schedule.front(), true);
    u = std::move(stage.field);
    total.trace.insert(total.trace.end(), stage.trace.begin(), stage.trace.end());
    total.per_stage.push_back(stage.per_stage.front());
    total.iterations += stage.iterations;
  }

  SolveResult last;
  for (int k : opts.k_schedule) {
    const EnergyLaw law = k == EnergyLaw::kInfinite ? EnergyLaw::exponential(spec.law.exp_cap)
                                                    : EnergyLaw::truncated(k, spec.law.exp_cap);
    for (double delta : opts.delta_schedule) {
      EnergyModel model(spec, mesh, SmoothedIndicator{delta}, law, opts.threads);
      try {
        last = run_stage(model, std::move(u), opts, k, delta, false);
      } catch (const Error& err) {
        throw Error(std::string(err.what()) + " [stage k=" +
                    (k == EnergyLaw::kInfinite ? std::string("inf") : std::to_string(k)) +
                    ", delta=" + std::to_string(delta) + "]");
      }
      u = last.field;
      total.trace.insert(total.trace.end(), last.trace.begin(), last.trace.end());
      total.per_stage.push_back(last.per_stage.front());
      total.iterations += last.iterations;
    }
    if (record_stage_fields) total.stage_fields.push_back(u);
  }

  total.field = std::move(u);
  total.energy_value = last.energy_value;
  total.breakdown = last.breakdown;
  total.final_grad_norm = last.final_grad_norm;
  return total;
}

}  // namespace

SolveResult minimize_stage(const ProblemSpec& spec, const Mesh& mesh, ScalarField u0,
                           const EnergyLaw& law, double delta, const SolverOptions& opts) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (!(opts.grad_tol > 0.0) || opts.max_iters < 1)
    throw ValidationError("tolerances must be positive");
  check_dirichlet(mesh, u0, sample(spec.psi, mesh));
  EnergyModel model(spec, mesh, SmoothedIndicator{delta}, law, opts.threads);
  return run_stage(model, std::move(u0), opts, law.order, delta, false);
}

SolveResult solve(const ProblemSpec& spec, const Mesh& mesh, const SolverOptions& opts,
                  bool record_stage_fields) {
  validate_options(opts);
  validate_on_mesh(spec, mesh);

  const std::vector<double> psi = sample(spec.psi, mesh);
  ScalarField u_base(psi);  // datum extension: psi sampled everywhere

  if (opts.starts == 1) return solve_single(spec, mesh, opts, record_stage_fields, u_base);

  // Multi-start: perturb the free nodes of the extension with seeded noise,
  // keep the best final energy, flag near-ties between distinct minimizers.
  SolveResult best;
  std::vector<SolveResult> results;
  std::vector<double> energies;
  double amp = 0.0;
  for (double v : psi) amp = std::max(amp, std::abs(v));
  amp = 0.1 * std::max(amp, 1.0);
  for (int s = 0; s < opts.starts; ++s) {
    ScalarField u0 = u_base;
    if (s > 0) {
      std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(s));
      std::uniform_real_distribution<double> dist(-amp, amp);
      for (int i = 0; i < mesh.node_count(); ++i)
        if (!mesh.boundary[i]) u0[i] += dist(rng);
    }
    results.push_back(solve_single(spec, mesh, opts, record_stage_fields, u0));
    energies.push_back(results.back().energy_value);
  }
  size_t best_idx = 0;
  for (size_t i = 1; i < results.size(); ++i)
    if (energies[i] < energies[best_idx]) best_idx = i;
  best = std::move(results[best_idx]);
  best.start_energies = energies;
  for (size_t i = 0; i < results.size(); ++i) {
    if (i == best_idx) continue;
    if (std::abs(energies[i] - best.energy_value) <= 1e-8) {
      double diff = 0.0;
      for (size_t j = 0; j < best.field.size(); ++j)
        diff = std::max(diff, std::abs(results[i].field.size() == best.field.size()
                                           ? results[i].field[j] - best.field[j]
                                           : kInf));
      if (diff > 1e-6) best.energy_tie = true;
    }
  }
  return best;
}

KinkOracle oracle_1d(double a, double b, double gamma_plus, double gamma_minus,
                     const EnergyLaw& law, long grid_points) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("oracle_1d: requires a > 0 and b > 0");
  if (grid_points < 3) throw DomainError("oracle_1d: needs at least 3 grid points");

  auto kink_energy = [&](double t) {
    const double sa = a / t, sb = b / (1.0 - t);
    if (law.infinite() && (sa * sa > law.exp_cap || sb * sb > law.exp_cap)) return kInf;
    return t * law.value(sa) + (1.0 - t) * law.value(sb) + t * gamma_minus +
           (1.0 - t) * gamma_plus;
  };

  auto scan = [&](double lo, double hi, long count) {
    double best_t = 0.0, best_e = kInf;
    for (long i = 1; i <= count; ++i) {
      const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count + 1);
      if (!(t > 0.0) || !(t < 1.0)) continue;
      const double e = kink_energy(t);
      if (e < best_e) {  // strict: ties keep the smallest t
        best_e = e;
        best_t = t;
      }
    }
    return std::pair<double, double>{best_t, best_e};
  };

  auto [t0, e0] = scan(0.0, 1.0, grid_points);
  const double spacing = 1.0 / static_cast<double>(grid_points + 1);
  auto [t1, e1] = scan(std::max(0.0, t0 - spacing), std::min(1.0, t0 + spacing), grid_points);
  return e1 < e0 ? KinkOracle{t1, e1} : KinkOracle{t0, e0};
}

std::vector<int> ball_support_elements(const Mesh& mesh, const Ball& ball) {
  std::vector<int> elems;
  const double r2 = ball.radius * ball.radius;
  for (int e = 0; e < mesh.elem_count(); ++e) {
    for (int v = 0; v < mesh.nodes_per_elem(); ++v) {
      if (norm2(mesh.nodes[mesh.elems[e][v]] - ball.center) < r2) {
        elems.push_back(e);
        break;
      }
    }
  }
  return elems;
}

ScalarField phi_harmonic_replacement(const EnergyLaw& law, const Mesh& mesh,
                                     const ScalarField& u, const Ball& ball,
                                     const SolverOptions& opts) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("phi_harmonic_replacement: field length != node count");
  if (!(ball.radius > 0.0)) throw DomainError("phi_harmonic_replacement: radius must be positive");
  const Domain& d = mesh.domain;
  const bool inside =
      d.kind == Domain::Kind::Interval
          ? (ball.center.x - ball.radius >= d.x0 && ball.center.x + ball.radius <= d.x1)
          : (ball.center.x - ball.radius >= d.x0 && ball.center.x + ball.radius <= d.x1 &&
             ball.center.y - ball.radius >= d.y0 && ball.center.y + ball.radius <= d.y1);
  if (!inside) throw DomainError("phi_harmonic_replacement: ball not contained in the domain");

  std::vector<char> free_mask(mesh.node_count(), 0);
  const double r2 = ball.radius * ball.radius;
  bool any = false;
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (norm2(mesh.nodes[i] - ball.center) < r2) {
      free_mask[i] = 1;
      any = true;
    }
  }
  ScalarField v = u;
  if (!any) return v;

  const std::vector<int> region = ball_support_elements(mesh, ball);
  auto dirichlet_value = [&](const ScalarField& x) {
    double sum = 0.0;
    for (int e : region) {
      const Vec2 g = element_gradient(mesh, x, e);
      const double t = norm2(g);
      if (law.infinite() && t > law.exp_cap) return kInf;
      sum += mesh.elem_measure(e) * law.value(std::sqrt(t));
    }
    return sum;
  };
  auto dirichlet_gradient = [&](const ScalarField& x) {
    ScalarField g(mesh.node_count(), 0.0);
    for (int e : region) {
      const Vec2 f = law.flux(element_gradient(mesh, x, e));
      const double meas = mesh.elem_measure(e);
      for (int vtx = 0; vtx < mesh.nodes_per_elem(); ++vtx)
        g[mesh.elems[e][vtx]] += meas * dot(f, mesh.shape_gradient(e, vtx));
    }
    return g;
  };
  descend(v, free_mask, dirichlet_value, dirichlet_gradient, opts, law.order, 0.0, nullptr);
  return v;
}

}  // namespace twophase
