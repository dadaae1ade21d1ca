#include "tracefn/trace_functional.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tracefn/errors.hpp"

namespace tracefn {

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite needs a finite double");
  ExtendedReal r;
  r.finite_ = true;
  r.value_ = v;
  return r;
}

double ExtendedReal::value() const {
  if (!finite_) throw std::logic_error("ExtendedReal is +inf");
  return value_;
}

double ExtendedReal::as_double() const {
  return finite_ ? value_ : std::numeric_limits<double>::infinity();
}

std::string ExtendedReal::to_string() const {
  if (!finite_) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

void require_psd(const SpectralDecomposition& d, const char* label) {
  const auto check = psd_check(d);
  if (!check.is_psd) {
    std::ostringstream os;
    os << "matrix " << label << " is not positive semidefinite: min eigenvalue "
       << check.min_eigenvalue << " < -" << check.threshold_used;
    throw DomainError(os.str());
  }
}

namespace {

double weight(const HermitianMatrix& p, const SpectralDecomposition& a, Eigen::Index i) {
  const CVector v = a.eigenvector(i);
  return v.dot(p.matrix() * v).real();
}

}  // namespace

FunctionalResult eval_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                 const SpectralDecomposition& a) {
  if (p.dim() != a.dim()) throw DimensionError("eval_functional: P and A differ in dimension");
  require_psd(a, "A");

  FunctionalResult result;
  result.rank_used = a.rank();
  result.image_condition_held = image_contained(p, a);

  double range_sum = 0.0;
  for (Eigen::Index i = 0; i < a.rank(); ++i) range_sum += f(a.eigenvalue(i)) * weight(p, a, i);

  if (a.positive_definite()) {
    result.value = ExtendedReal::finite(range_sum);
  } else if (const auto f0 = f.extends_to_zero()) {
    double kernel_sum = 0.0;
    for (Eigen::Index i = a.rank(); i < a.dim(); ++i) kernel_sum += weight(p, a, i);
    result.value = ExtendedReal::finite(range_sum + *f0 * kernel_sum);
  } else if (result.image_condition_held) {
    result.value = ExtendedReal::finite(range_sum);
  } else {
    result.value = ExtendedReal::plus_infinity();
  }
  return result;
}

FunctionalResult eval_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                 const HermitianMatrix& a, const ThresholdPolicy& policy) {
  const auto dp = eig(p, policy);
  require_psd(dp, "P");
  return eval_functional(f, p, eig(a, policy));
}

ExtendedReal relative_entropy(const HermitianMatrix& p, const HermitianMatrix& q,
                              const ThresholdPolicy& policy) {
  if (p.dim() != q.dim()) throw DimensionError("relative_entropy: P and Q differ in dimension");
  const auto dp = eig(p, policy);
  const auto dq = eig(q, policy);
  require_psd(dp, "P");
  require_psd(dq, "Q");
  if (!image_contained(p, dq)) return ExtendedReal::plus_infinity();

  // Tr(P log P) over im(P) only: 0 log 0 = 0.
  double p_log_p = 0.0;
  for (Eigen::Index i = 0; i < dp.rank(); ++i) p_log_p += dp.eigenvalue(i) * std::log(dp.eigenvalue(i));

  const auto p_log_q = eval_functional(ScalarFunction::log(), p, dq);
  return ExtendedReal::finite(p_log_p - p_log_q.value.value());
}

HermitianMatrix apply_function(const ScalarFunction& f, const SpectralDecomposition& a) {
  RVector values = RVector::Zero(a.dim());
  for (Eigen::Index i = 0; i < a.rank(); ++i) values(i) = f(a.eigenvalue(i));
  if (const auto f0 = f.extends_to_zero())
    for (Eigen::Index i = a.rank(); i < a.dim(); ++i) values(i) = *f0;
  const CMatrix& v = a.eigenvectors();
  return HermitianMatrix::symmetrized(v * values.cast<Complex>().asDiagonal() * v.adjoint());
}

}  // namespace tracefn
