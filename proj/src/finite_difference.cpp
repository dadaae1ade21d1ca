#include "tracefn/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "tracefn/errors.hpp"
#include "tracefn/jacobi.hpp"
#include "tracefn/trace_functional.hpp"

namespace tracefn {

namespace {

using LComplex = std::complex<long double>;
using LMatrix = detail::CMatrix<long double>;

long double basis_value(const ErrorTerm& term, long double t) {
  long double v = std::pow(t, static_cast<long double>(term.exponent));
  for (int k = 0; k < term.log_power; ++k) v *= std::log(t);
  return v;
}

}  // namespace

std::vector<ErrorTerm> analytic_error_basis(int terms) {
  std::vector<ErrorTerm> basis;
  for (int k = 1; k <= terms; ++k) basis.push_back({static_cast<double>(k), 0});
  return basis;
}

std::vector<ErrorTerm> one_sided_error_basis(const ScalarFunction& f, bool singular, int terms) {
  if (!singular) return analytic_error_basis(terms);
  std::vector<ErrorTerm> basis;
  if (f.family() == FunctionFamily::logarithm) {
    // t log t dominates t as t -> 0+.
    for (int k = 1; static_cast<int>(basis.size()) < terms; ++k) {
      basis.push_back({static_cast<double>(k), 1});
      basis.push_back({static_cast<double>(k), 0});
    }
  } else if (f.family() == FunctionFamily::power) {
    const double p = *f.parameter();
    // Kernel branches add t^(p+2) (analytic) to f_P(A + tB); nothing new when
    // that is an integer power.
    if (p <= -1.0 || p == std::floor(p)) return analytic_error_basis(terms);
    for (int k = 1; k <= terms; ++k) {
      basis.push_back({static_cast<double>(k), 0});
      basis.push_back({p + 1.0 + (k - 1), 0});
    }
    std::sort(basis.begin(), basis.end(),
              [](const ErrorTerm& x, const ErrorTerm& y) { return x.exponent < y.exponent; });
  } else {
    return analytic_error_basis(terms);
  }
  basis.resize(static_cast<std::size_t>(terms));
  return basis;
}

long double extrapolate_to_zero(std::span<const long double> steps,
                                std::span<const long double> quotients,
                                std::span<const ErrorTerm> basis) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (static_cast<Eigen::Index>(steps.size()) != m + 1 || quotients.size() != steps.size())
    throw std::invalid_argument("extrapolate_to_zero: need basis.size() + 1 samples");
  using LRMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LRVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  LRMatrix system(m + 1, m + 1);
  LRVector rhs(m + 1);
  for (Eigen::Index k = 0; k <= m; ++k) {
    system(k, 0) = 1.0L;
    for (Eigen::Index j = 0; j < m; ++j)
      system(k, j + 1) = basis_value(basis[static_cast<std::size_t>(j)], steps[static_cast<std::size_t>(k)]);
    rhs(k) = quotients[static_cast<std::size_t>(k)];
  }
  // Column equilibration; the basis columns span many orders of magnitude.
  LRVector scale(m + 1);
  for (Eigen::Index j = 0; j <= m; ++j) {
    scale(j) = system.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0L) scale(j) = 1.0L;
    system.col(j) /= scale(j);
  }
  const LRVector solution = system.fullPivLu().solve(rhs);
  return solution(0) / scale(0);
}

std::optional<long double> functional_extended(const ScalarFunction& f, const HermitianMatrix& p,
                                               const HermitianMatrix& a, long double t,
                                               const HermitianMatrix& b,
                                               const ThresholdPolicy& policy) {
  if (p.dim() != a.dim() || b.dim() != a.dim())
    throw DimensionError("functional_extended: dimension mismatch");
  const LMatrix m = a.matrix().cast<LComplex>() + t * b.matrix().cast<LComplex>();
  const auto dec = detail::jacobi_hermitian<long double>(m, 1e-18L, 100);
  if (!dec.converged)
    throw ConvergenceError("extended-precision Jacobi did not converge", static_cast<double>(dec.off_norm));
  const Eigen::Index n = m.rows();
  const long double max_abs = dec.values.cwiseAbs().maxCoeff();
  const long double threshold = policy.absolute
                                    ? static_cast<long double>(*policy.absolute)
                                    : static_cast<long double>(n) * max_abs * static_cast<long double>(policy.relative);
  if (dec.values(n - 1) < -threshold) {
    std::ostringstream os;
    os << "A + tB is not positive semidefinite at t = " << static_cast<double>(t)
       << " (min eigenvalue " << static_cast<double>(dec.values(n - 1)) << ")";
    throw DomainError(os.str());
  }

  Eigen::Index r = 0;
  while (r < n && dec.values(r) > threshold) ++r;

  const LMatrix pl = p.matrix().cast<LComplex>();
  long double range_sum = 0.0L;
  long double kernel_weight = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = dec.vectors.col(i);
    const long double w = v.dot(pl * v).real();
    if (i < r)
      range_sum += f.extended(dec.values(i)) * w;
    else
      kernel_weight += w;
  }
  if (r == n) return range_sum;
  if (const auto f0 = f.extends_to_zero()) return range_sum + static_cast<long double>(*f0) * kernel_weight;

  const LMatrix k = dec.vectors.rightCols(n - r);
  if ((k.adjoint() * pl * k).norm() > 1e-10L * (1.0L + pl.norm())) return std::nullopt;
  return range_sum;
}

FdEstimate one_sided_derivative(const ScalarFunction& f, const HermitianMatrix& p,
                                const HermitianMatrix& a, const HermitianMatrix& b,
                                const OneSidedOptions& options, const ThresholdPolicy& policy) {
  if (options.terms < 1 || !(options.base_step > 0.0))
    throw std::invalid_argument("one_sided_derivative: need terms >= 1 and a positive base step");
  const auto dec = eig(a, policy);
  const bool singular = !dec.positive_definite();
  FdEstimate out;
  out.basis = options.plain_richardson ? analytic_error_basis(options.terms)
                                       : one_sided_error_basis(f, singular, options.terms);

  // Singular A: work in A's eigenframe with the zero band set to exactly 0
  // and, under im(P) ⊆ im(A), P's kernel block dropped. Otherwise the
  // O(eps) leakage of P into ker(A) gets weighted by f(t mu) / t, which blows
  // up for f with a pole at 0.
  const auto [pf, af, bf] = [&] {
    if (!singular) return std::tuple{p, a, b};
    const CMatrix& v = dec.eigenvectors();
    RVector alpha(dec.dim());
    for (Eigen::Index i = 0; i < dec.dim(); ++i) alpha(i) = dec.clamped_eigenvalue(i);
    CMatrix pt = v.adjoint() * p.matrix() * v;
    if (image_contained(p, dec)) {
      const Eigen::Index k = dec.dim() - dec.rank();
      pt.rightCols(k).setZero();
      pt.bottomRows(k).setZero();
    }
    return std::tuple{HermitianMatrix::symmetrized(pt), HermitianMatrix::diagonal(alpha),
                      HermitianMatrix::symmetrized(v.adjoint() * b.matrix() * v)};
  }();

  const auto g0 = functional_extended(f, pf, af, 0.0L, bf, policy);
  if (!g0) throw DomainError("f_P(A) is +inf; the one-sided derivative is undefined");

  std::vector<long double> steps;
  std::vector<long double> quotients;
  long double t = options.base_step;
  for (int k = 0; k <= options.terms; ++k, t /= 2.0L) {
    const auto g = functional_extended(f, pf, af, t, bf, policy);
    if (!g) throw DomainError("f_P(A + tB) is +inf for some t > 0");
    steps.push_back(t);
    quotients.push_back((*g - *g0) / t);
    out.steps.push_back(static_cast<double>(t));
    out.quotients.push_back(static_cast<double>(quotients.back()));
  }
  out.value = static_cast<double>(extrapolate_to_zero(steps, quotients, out.basis));
  return out;
}

double central_difference_functional(const ScalarFunction& f, const HermitianMatrix& p,
                                     const HermitianMatrix& a, const HermitianMatrix& b, double h) {
  const auto plus = eval_functional(f, p, a + h * b).value;
  const auto minus = eval_functional(f, p, a - h * b).value;
  return (plus.value() - minus.value()) / (2.0 * h);
}

CMatrix central_difference_matrix(const ScalarFunction& f, const HermitianMatrix& a,
                                  const HermitianMatrix& b, double h) {
  const auto plus = eig(a + h * b);
  const auto minus = eig(a - h * b);
  require_psd(plus, "A + hB");
  require_psd(minus, "A - hB");
  if (!plus.positive_definite() || !minus.positive_definite())
    throw DomainError("central_difference_matrix needs A +- hB positive definite");
  return (apply_function(f, plus).matrix() - apply_function(f, minus).matrix()) / (2.0 * h);
}

}  // namespace tracefn
