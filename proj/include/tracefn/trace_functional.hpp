#pragma once

#include <string>

#include "tracefn/hermitian.hpp"
#include "tracefn/scalar_function.hpp"

namespace tracefn {

/// A finite real or +∞.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v);
  static ExtendedReal plus_infinity() { return ExtendedReal(); }

  bool is_finite() const { return finite_; }
  /// Throws std::logic_error when called on +∞.
  double value() const;
  /// The value or +inf as a double.
  double as_double() const;
  /// "%.17g" for finite values, "+inf" otherwise.
  std::string to_string() const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal() = default;
  bool finite_ = false;
  double value_ = 0.0;
};

struct FunctionalResult {
  ExtendedReal value = ExtendedReal::plus_infinity();
  Eigen::Index rank_used = 0;
  bool image_condition_held = false;
};

/// f_P(A) = Tr(P f(A)) for PSD P and A.
///
/// Positive definite A: Σ f(α_i) <v_i, P v_i>. Singular A: if f has a finite
/// limit f(0+), zero eigenvalues contribute f(0+) <v_i, P v_i>; otherwise the
/// sum is restricted to the nonzero eigenvalues when im(P) ⊆ im(A), and the
/// value is +∞ when it is not. Throws DomainError for non-PSD inputs.
FunctionalResult eval_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                 const HermitianMatrix& a, const ThresholdPolicy& policy = {});

/// Same, reusing a decomposition of A (which must be PSD).
FunctionalResult eval_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                 const SpectralDecomposition& a);

/// S(P‖Q) = Tr(P log P) - Tr(P log Q) if im(P) ⊆ im(Q), +∞ otherwise.
/// Tr(P log P) uses the convention 0 log 0 = 0.
ExtendedReal relative_entropy(const HermitianMatrix& p, const HermitianMatrix& q,
                              const ThresholdPolicy& policy = {});

/// f(A) = V f(diag α) V*. Zero eigenvalues map to f(0+) when f extends to 0
/// and are dropped otherwise (the image-restricted matrix function).
HermitianMatrix apply_function(const ScalarFunction& f, const SpectralDecomposition& a);

/// Throws DomainError naming `label` if the decomposition is not PSD within
/// its zero threshold.
void require_psd(const SpectralDecomposition& d, const char* label);

}  // namespace tracefn
