#pragma once

#include <vector>

#include "tracefn/hermitian.hpp"
#include "tracefn/scalar_function.hpp"

namespace tracefn {

/// D_{f,A} in A's eigenbasis: f^[1](α_i, α_j) when both eigenvalues are
/// nonzero, 0 otherwise.
struct DividedDifferenceMatrix {
  RMatrix entries;
  CMatrix basis;
  Eigen::Index rank = 0;
};

DividedDifferenceMatrix divided_difference_matrix(const ScalarFunction& f,
                                                  const SpectralDecomposition& a);

/// Φ_{f,A}(B) = V (D_{f,A} ∘ V* B V) V*, before the final symmetrization.
CMatrix phi_map_unsymmetrized(const ScalarFunction& f, const SpectralDecomposition& a,
                              const HermitianMatrix& b);

/// Φ_{f,A}(B). For positive definite A this is the Fréchet derivative
/// Df(A)(B) of the matrix function A ↦ f(A).
HermitianMatrix phi_map(const ScalarFunction& f, const SpectralDecomposition& a,
                        const HermitianMatrix& b);

enum class DerivativeSemantics {
  /// Tr(P Φ(B)) is the one-sided directional derivative.
  exact_derivative,
  /// Tr(P Φ(B)) is a lower bound for it (f = x^p with p <= -1, A singular).
  lower_bound,
  /// No guarantee: f fails lim t f(t) = 0 and is not covered by the bound.
  formula_only,
};

const char* to_string(DerivativeSemantics s);

struct DerivativeReport {
  double formula_value = 0.0;
  DerivativeSemantics semantics = DerivativeSemantics::exact_derivative;
  AdmissibilityReport admissibility;
  bool image_condition_held = false;
  /// B failed the admissibility probe; the value is still Tr(P Φ(B)).
  bool direction_warning = false;
  Eigen::Index rank = 0;
};

/// Tr(P Φ_{f,A}(B)) with the hypotheses of the one-sided derivative theorem
/// checked: P, A PSD and im(P) ⊆ im(A) (ImageConditionError otherwise).
DerivativeReport directional_derivative(const ScalarFunction& f, const HermitianMatrix& p,
                                        const HermitianMatrix& a, const HermitianMatrix& b,
                                        const ThresholdPolicy& policy = {});

/// Tr(P X) for Hermitian P and X, checked to be real.
double real_trace_product(const CMatrix& p, const CMatrix& x);

struct GapCurvePoint {
  double t = 0.0;
  double functional = 0.0;   // Tr(P (A + tB)^-1)
  double closed_form = 0.0;  // 1 / (1 - t)
};

struct GapReport {
  HermitianMatrix a = HermitianMatrix::zero(2);
  HermitianMatrix p = HermitianMatrix::zero(2);
  HermitianMatrix b = HermitianMatrix::zero(2);
  double functional_at_a = 0.0;
  double formula_value = 0.0;
  double fd_estimate = 0.0;
  std::vector<GapCurvePoint> curve;
  double gap = 0.0;
};

/// The 2x2 instance A = P = diag(1, 0), B = [[0, 1], [1, 1]] with f = x^-1,
/// where Tr(P Φ(B)) = 0 but the one-sided derivative is 1.
GapReport inverse_gap_demo();

}  // namespace tracefn
