#pragma once

// Second oracle: scalar powers, logarithms, divided differences and
// directional derivatives recomputed from their Stieltjes-type integral
// representations by quadrature.

#include "tracefn/hermitian.hpp"
#include "tracefn/quadrature.hpp"
#include "tracefn/scalar_function.hpp"

namespace tracefn {

/// x^p for p ∈ (-1, 0) ∪ (0, 1):
///   p < 0:  -sin(pπ)/π ∫ s^p / (x + s) ds
///   p > 0:   sin(pπ)/π ∫ s^p (1/s - 1/(x + s)) ds
QuadratureResult power_via_integral(double p, double x, const QuadratureOptions& options = {});

/// f_p^[1](x, y) = sin(pπ)/π ∫ s^p / ((x + s)(y + s)) ds.
QuadratureResult divided_difference_via_integral(double p, double x, double y,
                                                 const QuadratureOptions& options = {});

/// log x = ∫ (1/(1 + s) - 1/(x + s)) ds = ∫ (x - 1) / ((1 + s)(x + s)) ds.
QuadratureResult log_via_integral(double x, const QuadratureOptions& options = {});

/// Tr(P Φ_{f,A}(B)) for f = log or f = x^p, p ∈ (-1, 0) ∪ (0, 1), as
///   c_f ∫ Tr(P Dg(A + s)(B)) w(s) ds,   g(x) = 1/x,
/// with (c_f, w) = (-sin(pπ)/π, s^p) for powers and (-1, 1) for log. The
/// image condition restricts Dg to the range of A. Throws DomainError for
/// other functions, ImageConditionError if im(P) ⊄ im(A), and
/// ConvergenceError when the quadrature misses its tolerance.
QuadratureResult derivative_via_integral(const ScalarFunction& f, const HermitianMatrix& p,
                                         const HermitianMatrix& a, const HermitianMatrix& b,
                                         const QuadratureOptions& options = {},
                                         const ThresholdPolicy& policy = {});

}  // namespace tracefn
