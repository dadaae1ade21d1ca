#pragma once

// Finite-difference oracles for the directional derivative of f_P.
//
// The one-sided quotient Q(t) = (f_P(A + tB) - f_P(A)) / t is not a power
// series in t when A is singular: kernel eigenvalue branches contribute terms
// t^(p+1+k) for f = x^p and t^k log t for f = log. The extrapolation to t = 0
// therefore eliminates an explicit error basis chosen from f, and the
// function values are computed in long double so that the elimination does
// not drown in round-off.

#include <optional>
#include <span>
#include <vector>

#include "tracefn/hermitian.hpp"
#include "tracefn/scalar_function.hpp"

namespace tracefn {

/// One error term t^exponent (log t)^log_power.
struct ErrorTerm {
  double exponent = 1.0;
  int log_power = 0;
  friend bool operator==(const ErrorTerm&, const ErrorTerm&) = default;
};

/// t, t^2, ..., t^terms.
std::vector<ErrorTerm> analytic_error_basis(int terms);

/// The leading `terms` error terms of the one-sided quotient for f at a
/// singular (or, with singular = false, positive definite) A.
std::vector<ErrorTerm> one_sided_error_basis(const ScalarFunction& f, bool singular, int terms);

/// Fits Q(t_k) = D + Σ_j c_j φ_j(t_k) exactly through basis.size() + 1
/// samples and returns D.
long double extrapolate_to_zero(std::span<const long double> steps,
                                std::span<const long double> quotients,
                                std::span<const ErrorTerm> basis);

/// f_P(A) in long double; nullopt stands for +∞. Throws DomainError when A is
/// not PSD within the policy's zero threshold.
std::optional<long double> functional_extended(const ScalarFunction& f, const HermitianMatrix& p,
                                               const HermitianMatrix& a, long double t_scale,
                                               const HermitianMatrix& b,
                                               const ThresholdPolicy& policy = {});

struct OneSidedOptions {
  double base_step = 1e-4;
  /// Number of error terms eliminated; terms + 1 function evaluations at
  /// base_step / 2^k.
  int terms = 5;
  /// Force the analytic basis (plain Richardson) regardless of f.
  bool plain_richardson = false;
};

struct FdEstimate {
  double value = 0.0;
  std::vector<double> steps;
  std::vector<double> quotients;
  std::vector<ErrorTerm> basis;
};

/// df_P(A; B) = lim_{t→0+} (f_P(A + tB) - f_P(A)) / t by generalized
/// Richardson extrapolation. Throws DomainError if f_P(A) is +∞ or some
/// A + tB leaves the PSD cone.
FdEstimate one_sided_derivative(const ScalarFunction& f, const HermitianMatrix& p,
                                const HermitianMatrix& a, const HermitianMatrix& b,
                                const OneSidedOptions& options = {},
                                const ThresholdPolicy& policy = {});

/// (f_P(A + hB) - f_P(A - hB)) / 2h, double precision, for positive definite A.
double central_difference_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                     const HermitianMatrix& a, const HermitianMatrix& b, double h);

/// (f(A + hB) - f(A - hB)) / 2h for the matrix function, positive definite A.
CMatrix central_difference_matrix(const ScalarFunction& f, const HermitianMatrix& a,
                                  const HermitianMatrix& b, double h);

}  // namespace tracefn
