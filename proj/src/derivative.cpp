#include "tracefn/derivative.hpp"

#include <cmath>
#include <sstream>

#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/trace_functional.hpp"

namespace tracefn {

DividedDifferenceMatrix divided_difference_matrix(const ScalarFunction& f,
                                                  const SpectralDecomposition& a) {
  const Eigen::Index n = a.dim();
  const Eigen::Index r = a.rank();
  DividedDifferenceMatrix d{RMatrix::Zero(n, n), a.eigenvectors(), r};
  for (Eigen::Index i = 0; i < r; ++i) {
    d.entries(i, i) = f.derivative(a.eigenvalue(i));
    for (Eigen::Index j = i + 1; j < r; ++j) {
      const double v = divided_difference(f, a.eigenvalue(i), a.eigenvalue(j)).value;
      d.entries(i, j) = v;
      d.entries(j, i) = v;
    }
  }
  return d;
}

CMatrix phi_map_unsymmetrized(const ScalarFunction& f, const SpectralDecomposition& a,
                              const HermitianMatrix& b) {
  if (b.dim() != a.dim()) throw DimensionError("phi_map: A and B differ in dimension");
  const auto d = divided_difference_matrix(f, a);
  const CMatrix& v = d.basis;
  const CMatrix rotated = v.adjoint() * b.matrix() * v;
  const CMatrix weighted = d.entries.cast<Complex>().cwiseProduct(rotated);
  return v * weighted * v.adjoint();
}

HermitianMatrix phi_map(const ScalarFunction& f, const SpectralDecomposition& a,
                        const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(phi_map_unsymmetrized(f, a, b));
}

const char* to_string(DerivativeSemantics s) {
  switch (s) {
    case DerivativeSemantics::exact_derivative: return "exact_derivative";
    case DerivativeSemantics::lower_bound: return "lower_bound";
    case DerivativeSemantics::formula_only: return "formula_only";
  }
  return "?";
}

double real_trace_product(const CMatrix& p, const CMatrix& x) {
  const Complex tr = (p.transpose().cwiseProduct(x)).sum();
  if (std::abs(tr.imag()) > 1e-10 * (1.0 + std::abs(tr.real()))) {
    std::ostringstream os;
    os << "internal consistency: Tr(P X) has imaginary part " << tr.imag();
    throw Error(os.str());
  }
  return tr.real();
}

DerivativeReport directional_derivative(const ScalarFunction& f, const HermitianMatrix& p,
                                        const HermitianMatrix& a, const HermitianMatrix& b,
                                        const ThresholdPolicy& policy) {
  if (p.dim() != a.dim() || b.dim() != a.dim())
    throw DimensionError("directional_derivative: P, A, B differ in dimension");
  const auto dp = eig(p, policy);
  require_psd(dp, "P");
  const auto da = eig(a, policy);
  require_psd(da, "A");

  DerivativeReport report;
  report.rank = da.rank();
  report.image_condition_held = image_contained(p, da);
  if (!report.image_condition_held) {
    std::ostringstream os;
    os << "hypothesis im(P) ⊆ im(A) violated: ||Π⊥ P Π⊥||_F = " << kernel_compression_norm(p, da);
    throw ImageConditionError(os.str());
  }

  report.formula_value = real_trace_product(p.matrix(), phi_map_unsymmetrized(f, da, b));
  report.admissibility = direction_admissible(da, b);
  report.direction_warning = !report.admissibility.admissible;

  if (da.positive_definite() || f.tf_limit_zero()) {
    report.semantics = DerivativeSemantics::exact_derivative;
  } else if (f.family() == FunctionFamily::power && *f.parameter() <= -1.0) {
    report.semantics = DerivativeSemantics::lower_bound;
  } else {
    report.semantics = DerivativeSemantics::formula_only;
  }
  return report;
}

GapReport inverse_gap_demo() {
  GapReport g;
  g.a = HermitianMatrix::diagonal({1.0, 0.0});
  g.p = g.a;
  RMatrix b(2, 2);
  b << 0.0, 1.0, 1.0, 1.0;
  g.b = HermitianMatrix::from_real(b);

  const auto f = ScalarFunction::inverse();
  g.functional_at_a = eval_functional(f, g.p, g.a).value.value();
  g.formula_value = directional_derivative(f, g.p, g.a, g.b).formula_value;

  OneSidedOptions options;
  options.plain_richardson = true;
  g.fd_estimate = one_sided_derivative(f, g.p, g.a, g.b, options).value;

  for (double t : {0.1, 0.01, 0.001}) {
    const double value = eval_functional(f, g.p, g.a + t * g.b).value.value();
    g.curve.push_back({t, value, 1.0 / (1.0 - t)});
  }
  g.gap = g.fd_estimate - g.formula_value;
  return g;
}

}  // namespace tracefn
