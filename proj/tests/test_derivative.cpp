#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tracefn/derivative.hpp"
#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/random.hpp"

using namespace tracefn;
using tracefn::testing::eigen_matrix_function;
using tracefn::testing::frobenius_relative;

namespace {

HermitianMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  RMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return HermitianMatrix::from_real(m);
}

}  // namespace

TEST_CASE("phi examples") {
  // x^-1 at A = diag(1, 0): only the B11 entry survives, scaled by f'(1) = -1.
  const auto b = real_matrix({{2.0, 1.0}, {1.0, 1.0}});
  const auto phi_inv = phi_map(ScalarFunction::inverse(), eig(HermitianMatrix::diagonal({1.0, 0.0})), b);
  CHECK(phi_inv(0, 0).real() == doctest::Approx(-2.0));
  CHECK(std::abs(phi_inv(0, 1)) == 0.0);
  CHECK(std::abs(phi_inv(1, 1)) == 0.0);

  // Identity: Phi(B) = B at positive definite A.
  SplitMix64 rng(41);
  const auto a = random_psd(rng, 4, 4);
  const auto bb = random_hermitian(rng, 4);
  CHECK((phi_map(ScalarFunction::identity(), eig(a), bb).matrix() - bb.matrix()).norm() <= 1e-12);

  // Square at diag(1, 2): divided differences [[2, 3], [3, 4]].
  const auto phi_sq = phi_map(ScalarFunction::square(), eig(HermitianMatrix::diagonal({1.0, 2.0})),
                              real_matrix({{0.0, 1.0}, {1.0, 0.0}}));
  CHECK(std::abs(phi_sq(0, 1) - Complex(3.0, 0.0)) <= 1e-14);
  CHECK(std::abs(phi_sq(0, 0)) <= 1e-14);
}

TEST_CASE("phi matches a dense central difference of log") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_psd(rng, 6, 6);
    const auto b = random_hermitian(rng, 6);
    const double h = 1e-5;
    const auto lg = [](double x) { return std::log(x); };
    const CMatrix fd = (eigen_matrix_function(a + h * b, lg) - eigen_matrix_function(a - h * b, lg)) / (2.0 * h);
    CHECK(frobenius_relative(phi_map(ScalarFunction::log(), eig(a), b).matrix(), fd) <= 1e-6);
    CHECK(frobenius_relative(central_difference_matrix(ScalarFunction::log(), a, b, h), fd) <= 1e-9);
  }
}

TEST_CASE("phi is linear, Hermitian and basis independent") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_singular_instance(rng, 5, 2);
    const auto d = eig(inst.a);
    const auto f = ScalarFunction::power(-0.5);
    const auto b2 = random_hermitian(rng, 5);
    const CMatrix lhs = phi_map(f, d, 2.0 * inst.b + (-3.0) * b2).matrix();
    const CMatrix rhs = 2.0 * phi_map(f, d, inst.b).matrix() - 3.0 * phi_map(f, d, b2).matrix();
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));

    const CMatrix raw = phi_map_unsymmetrized(f, d, inst.b);
    CHECK((raw - raw.adjoint()).norm() <= 1e-12 * (1.0 + raw.norm()));
  }
}

TEST_CASE("directional derivative examples") {
  const auto g = inverse_gap_demo();
  CHECK(g.formula_value == 0.0);
  CHECK(std::abs(g.fd_estimate - 1.0) <= 1e-3);
  for (const auto& pt : g.curve) CHECK(std::abs(pt.functional - pt.closed_form) <= 1e-10);
  const auto rep = directional_derivative(ScalarFunction::inverse(), g.p, g.a, g.b);
  CHECK(rep.semantics == DerivativeSemantics::lower_bound);
  CHECK_FALSE(rep.direction_warning);

  // Identity: Tr(P B).
  SplitMix64 rng(44);
  const auto a = random_psd(rng, 4, 4);
  const auto p = random_psd(rng, 4, 2);
  const auto b = random_hermitian(rng, 4);
  CHECK(directional_derivative(ScalarFunction::identity(), p, a, b).formula_value ==
        doctest::Approx((p.matrix() * b.matrix()).trace().real()).epsilon(1e-12));

  // log at diag(2, 3, 0) with P = diag(1, 1, 0) and an admissible B.
  const auto a3 = HermitianMatrix::diagonal({2.0, 3.0, 0.0});
  const auto p3 = HermitianMatrix::diagonal({1.0, 1.0, 0.0});
  const auto b3 = real_matrix({{1.0, 0.5, 0.2}, {0.5, 0.0, 0.1}, {0.2, 0.1, 1.0}});
  const auto r3 = directional_derivative(ScalarFunction::log(), p3, a3, b3);
  CHECK(r3.formula_value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r3.semantics == DerivativeSemantics::exact_derivative);
  CHECK(std::abs(one_sided_derivative(ScalarFunction::log(), p3, a3, b3).value - 0.5) <= 1e-6);
  const auto diag_b = HermitianMatrix::diagonal({1.0, -1.0, 1.0});
  CHECK(directional_derivative(ScalarFunction::log(), p3, a3, diag_b).formula_value ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(std::abs(one_sided_derivative(ScalarFunction::log(), p3, a3, diag_b).value - 1.0 / 6.0) <= 1e-8);
}

TEST_CASE("derivative errors and warnings") {
  const auto a = HermitianMatrix::diagonal({1.0, 0.0});
  CHECK_THROWS_AS(directional_derivative(ScalarFunction::log(), HermitianMatrix::identity(2), a,
                                         HermitianMatrix::identity(2)),
                  ImageConditionError);
  CHECK_THROWS_AS(directional_derivative(ScalarFunction::log(), a, HermitianMatrix::diagonal({1.0, -1.0}),
                                         HermitianMatrix::identity(2)),
                  DomainError);
  const auto bad = directional_derivative(ScalarFunction::log(), a, a, HermitianMatrix::diagonal({1.0, -1.0}));
  CHECK(bad.direction_warning);
  CHECK(bad.formula_value == doctest::Approx(1.0));

  const auto custom = make_custom("inv", [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
                                  false);
  CHECK(directional_derivative(custom.function, a, a, HermitianMatrix::identity(2)).semantics ==
        DerivativeSemantics::formula_only);
  CHECK(directional_derivative(ScalarFunction::inverse(), HermitianMatrix::identity(2), HermitianMatrix::identity(2),
                               HermitianMatrix::identity(2))
            .semantics == DerivativeSemantics::exact_derivative);
}

TEST_CASE("formula agrees with a two-sided difference at positive definite A") {
  SplitMix64 rng(45);
  for (const auto& f : {ScalarFunction::log(), ScalarFunction::power(0.5), ScalarFunction::power(-0.9),
                        ScalarFunction::inverse(), ScalarFunction::square()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_psd(rng, 5, 5);
      const auto p = random_psd(rng, 5, 3);
      const auto b = random_hermitian(rng, 5);
      const double formula = directional_derivative(f, p, a, b).formula_value;
      const double fd = central_difference_functional(f, p, a, b, 1e-5);
      CHECK(std::abs(fd - formula) <= 1e-5 * (1.0 + std::abs(formula)));
    }
  }
}
