#include "tracefn/integral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tracefn/errors.hpp"
#include "tracefn/trace_functional.hpp"

namespace tracefn {

namespace {

void require_exponent(double p) {
  if (!(p > -1.0 && p < 1.0) || p == 0.0) {
    std::ostringstream os;
    os << "integral representation needs p in (-1, 0) or (0, 1), got " << p;
    throw DomainError(os.str());
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << what << " must be positive, got " << x;
    throw DomainError(os.str());
  }
}

double sine_factor(double p) { return std::sin(p * std::numbers::pi) / std::numbers::pi; }

QuadratureResult scaled(QuadratureResult r, double c) {
  r.value *= c;
  r.abs_error_estimate *= std::abs(c);
  return r;
}

QuadratureResult checked(QuadratureResult r, const char* what) {
  if (!r.converged && r.abs_error_estimate > 1e-9 * (1.0 + std::abs(r.value))) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (error estimate " << r.abs_error_estimate << ")";
    throw ConvergenceError(os.str(), r.abs_error_estimate);
  }
  return r;
}

}  // namespace

QuadratureResult power_via_integral(double p, double x, const QuadratureOptions& options) {
  require_exponent(p);
  require_positive(x, "x");
  if (p < 0.0) {
    const auto r = integrate_half_line([=](double s) { return std::pow(s, p) / (x + s); },
                                       {x, p, 1.0 - p}, options);
    return checked(scaled(r, -sine_factor(p)), "power_via_integral");
  }
  // s^p (1/s - 1/(x + s)) = x s^(p-1) / (x + s) without cancellation.
  const auto r = integrate_half_line([=](double s) { return x * std::pow(s, p - 1.0) / (x + s); },
                                     {x, p - 1.0, 2.0 - p}, options);
  return checked(scaled(r, sine_factor(p)), "power_via_integral");
}

QuadratureResult divided_difference_via_integral(double p, double x, double y,
                                                 const QuadratureOptions& options) {
  require_exponent(p);
  require_positive(x, "x");
  require_positive(y, "y");
  const auto r = integrate_half_line(
      [=](double s) { return std::pow(s, p) / ((x + s) * (y + s)); },
      {std::max(x, y), p, 2.0 - p}, options);
  return checked(scaled(r, sine_factor(p)), "divided_difference_via_integral");
}

QuadratureResult log_via_integral(double x, const QuadratureOptions& options) {
  require_positive(x, "x");
  const auto r = integrate_half_line([=](double s) { return (x - 1.0) / ((1.0 + s) * (x + s)); },
                                     {std::max(x, 1.0), 0.0, 2.0}, options);
  return checked(r, "log_via_integral");
}

QuadratureResult derivative_via_integral(const ScalarFunction& f, const HermitianMatrix& p,
                                         const HermitianMatrix& a, const HermitianMatrix& b,
                                         const QuadratureOptions& options,
                                         const ThresholdPolicy& policy) {
  if (p.dim() != a.dim() || b.dim() != a.dim())
    throw DimensionError("derivative_via_integral: P, A, B differ in dimension");
  double weight = -1.0;
  double exponent = 0.0;
  if (f.family() == FunctionFamily::power) {
    exponent = *f.parameter();
    require_exponent(exponent);
    weight = -sine_factor(exponent);
  } else if (f.family() != FunctionFamily::logarithm) {
    throw DomainError("derivative_via_integral supports log and x^p with p in (-1, 0) or (0, 1), not " +
                      f.name());
  }

  const auto da = eig(a, policy);
  require_psd(da, "A");
  require_psd(eig(p, policy), "P");
  if (!image_contained(p, da)) {
    std::ostringstream os;
    os << "hypothesis im(P) ⊆ im(A) violated: ||Π⊥ P Π⊥||_F = " << kernel_compression_norm(p, da);
    throw ImageConditionError(os.str());
  }

  const Eigen::Index r = da.rank();
  if (r == 0) return {0.0, 0.0, 0, true};
  const CMatrix& v = da.eigenvectors();
  const CMatrix pt = v.leftCols(r).adjoint() * p.matrix() * v.leftCols(r);
  const CMatrix bt = v.leftCols(r).adjoint() * b.matrix() * v.leftCols(r);
  // Tr(P X) = Σ_ij P_ji X_ij; the pairwise products are Hermitian in (i, j).
  const RMatrix m = pt.transpose().cwiseProduct(bt).real();
  const RVector alpha = da.eigenvalues().head(r);

  const auto integrand = [&](double s) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      const double di = alpha(i) + s;
      for (Eigen::Index j = 0; j < r; ++j) sum -= m(i, j) / (di * (alpha(j) + s));
    }
    return exponent == 0.0 ? sum : sum * std::pow(s, exponent);
  };
  const auto result = integrate_half_line(integrand, {alpha(0), exponent, 2.0 - exponent}, options);
  return checked(scaled(result, weight), "derivative_via_integral");
}

}  // namespace tracefn
