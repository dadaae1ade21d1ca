#pragma once

// Gauss-Kronrod (7/15) quadrature on finite intervals and on [0, ∞).

#include <functional>
#include <optional>

namespace tracefn {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
  /// When set, no adaptivity: every mapped piece is cut into 2^depth equal
  /// panels.
  std::optional<int> uniform_depth;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive GK15 on [a, b]; bisects the panel with the largest
/// error estimate until the total estimate meets the tolerance.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options = {});

/// Shape of an integrand on (0, ∞): ~ s^endpoint_exponent as s -> 0 and
/// ~ s^-decay_exponent as s -> ∞.
struct HalfLineShape {
  double split = 1.0;
  double endpoint_exponent = 0.0;  // > -1
  double decay_exponent = 2.0;     // > 1
};

/// ∫_0^∞ f(s) ds. [0, split] is mapped by s = split u^a with a = 2/(γ+1) and
/// [split, ∞) by s = split u^-m with m = 2/(β-1), so both transformed
/// integrands vanish linearly at u = 0.
QuadratureResult integrate_half_line(const Integrand& f, const HalfLineShape& shape,
                                     const QuadratureOptions& options = {});

}  // namespace tracefn
