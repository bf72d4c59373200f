#pragma once

#include <utility>

#include "twophase/vec.hpp"

namespace twophase {

/// The gradient energy density used by the functional: either the exponential
/// law value(s) = e^{s^2} - 1 or its degree-2k truncation
/// value(s) = sum_{i=1..k} s^{2i}/i!, which is uniformly elliptic.
///
/// All evaluations are pure and thread-safe. The exponential law refuses
/// arguments with s^2 above exp_cap by throwing OverflowError; callers that
/// need a rejectable step (line searches) should treat the overflow as
/// infinite energy instead of calling through.
struct EnergyLaw {
  /// Sentinel order for the untruncated exponential law.
  static constexpr int kInfinite = -1;

  int order = kInfinite;
  double exp_cap = 700.0;

  bool infinite() const { return order == kInfinite; }

  static EnergyLaw exponential(double cap = 700.0);
  static EnergyLaw truncated(int k, double cap = 700.0);

  /// value(s) = e^{s^2}-1 (infinite order) or the truncated polynomial.
  /// Even in s, nonnegative, zero only at s = 0.
  double value(double s) const;

  /// First derivative: 2s e^{s^2} resp. sum (2i/i!) s^{2i-1}. Odd in s.
  double derivative(double s) const;

  /// derivative(s)/s, evaluated in the removable-singularity form:
  /// 2 e^{s^2} resp. 2 sum_{j<k} (s^2)^j/j!. Finite and positive at s = 0.
  double slope_factor(double s) const;

  /// Flux vector derivative(|g|) g/|g| with flux(0) = 0 exactly.
  Vec2 flux(Vec2 g) const;

  /// (r1, r2) with r1 = s d'(s)/d(s) (d = derivative) and
  /// r2 = s d(s)/value(s). For the exponential law r1 = 1 + 2 s^2 exactly;
  /// for order k the second ratio lies in [2, 2k]. Requires s > 0.
  std::pair<double, double> ellipticity_ratios(double s) const;

  /// (flux(x) - flux(y)) . (x - y); strictly positive for x != y.
  double monotonicity_gap(Vec2 x, Vec2 y) const;

  /// True when s^2 exceeds the exponential cap (infinite order only).
  bool overflows(double s) const;
};

}  // namespace twophase
