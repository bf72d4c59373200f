#include "twophase/energy_law.hpp"

#include <cmath>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

// Largest argument exp() handles in double precision.
constexpr double kMaxExpArg = 709.7;

// Partial exponential sum sum_{j=0..m} t^j/j!, Horner in t.
double exp_partial_sum(double t, int m) {
  double inv = 1.0;  // becomes 1/m!
  for (int i = 2; i <= m; ++i) inv /= i;
  double acc = inv;
  for (int j = m - 1; j >= 0; --j) {
    inv *= (j + 1);  // now 1/j!
    acc = inv + t * acc;
  }
  return acc;
}

// Truncated value as a function of t = s^2: sum_{i=1..k} t^i/i!.
double truncated_value_t(double t, int k) {
  double inv = 1.0;  // becomes 1/k!
  for (int i = 2; i <= k; ++i) inv /= i;
  double acc = inv;
  for (int i = k - 1; i >= 1; --i) {
    inv *= (i + 1);
    acc = inv + t * acc;
  }
  return t * acc;
}

void check_law(int order, double cap) {
  if (order != EnergyLaw::kInfinite && order < 1)
    throw DomainError("EnergyLaw: order must be >= 1 or infinite");
  if (!(cap > 0.0) || cap > kMaxExpArg)
    throw DomainError("EnergyLaw: exp_cap must lie in (0, 709.7]");
}

}  // namespace

EnergyLaw EnergyLaw::exponential(double cap) {
  check_law(kInfinite, cap);
  return EnergyLaw{kInfinite, cap};
}

EnergyLaw EnergyLaw::truncated(int k, double cap) {
  check_law(k, cap);
  return EnergyLaw{k, cap};
}

bool EnergyLaw::overflows(double s) const {
  return infinite() && s * s > exp_cap;
}

double EnergyLaw::value(double s) const {
  const double t = s * s;
  if (infinite()) {
    if (t > exp_cap) throw OverflowError("EnergyLaw::value: s^2 exceeds exp_cap");
    return std::expm1(t);
  }
  return truncated_value_t(t, order);
}

double EnergyLaw::derivative(double s) const {
  return s * slope_factor(s);
}

double EnergyLaw::slope_factor(double s) const {
  const double t = s * s;
  if (infinite()) {
    if (t > exp_cap) throw OverflowError("EnergyLaw::slope_factor: s^2 exceeds exp_cap");
    return 2.0 * std::exp(t);
  }
  return 2.0 * exp_partial_sum(t, order - 1);
}

Vec2 EnergyLaw::flux(Vec2 g) const {
  return slope_factor(norm(g)) * g;
}

std::pair<double, double> EnergyLaw::ellipticity_ratios(double s) const {
  if (!(s > 0.0)) throw DomainError("ellipticity_ratios: requires s > 0");
  const double t = s * s;
  if (infinite()) {
    const double r1 = 1.0 + 2.0 * t;
    // s phi(s)/Phi(s) = 2t e^t/(e^t - 1) = 2t/(1 - e^{-t}), overflow-free.
    const double r2 = 2.0 * t / (-std::expm1(-t));
    return {r1, r2};
  }
  const int k = order;
  // r1 = sum 2i(2i-1)/i! t^i / sum 2i/i! t^i,  r2 = sum 2i/i! t^i / sum 1/i! t^i.
  double inv = 1.0;
  for (int i = 2; i <= k; ++i) inv /= i;
  double num1 = (2.0 * k) * (2.0 * k - 1.0) * inv;
  double num2 = 2.0 * k * inv;
  double den = inv;
  for (int i = k - 1; i >= 1; --i) {
    inv *= (i + 1);
    num1 = (2.0 * i) * (2.0 * i - 1.0) * inv + t * num1;
    num2 = 2.0 * i * inv + t * num2;
    den = inv + t * den;
  }
  return {num1 / num2, num2 / den};
}

double EnergyLaw::monotonicity_gap(Vec2 x, Vec2 y) const {
  if (x.x == y.x && x.y == y.y) return 0.0;
  return dot(flux(x) - flux(y), x - y);
}

}  // namespace twophase
