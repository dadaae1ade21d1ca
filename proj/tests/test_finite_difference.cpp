#include <cmath>
#include <vector>

#include "doctest.h"
#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/random.hpp"
#include "tracefn/trace_functional.hpp"

using namespace tracefn;

namespace {

std::vector<double> exponents(const std::vector<ErrorTerm>& basis) {
  std::vector<double> out;
  for (const auto& t : basis) out.push_back(t.exponent);
  return out;
}

}  // namespace

TEST_CASE("error basis selection") {
  const auto lg = one_sided_error_basis(ScalarFunction::log(), true, 3);
  REQUIRE(lg.size() == 3);
  CHECK(lg[0] == ErrorTerm{1.0, 1});
  CHECK(lg[1] == ErrorTerm{1.0, 0});
  CHECK(lg[2] == ErrorTerm{2.0, 1});

  CHECK(exponents(one_sided_error_basis(ScalarFunction::power(0.5), true, 3)) == std::vector<double>{1.0, 1.5, 2.0});
  const auto neg = exponents(one_sided_error_basis(ScalarFunction::power(-0.9), true, 3));
  REQUIRE(neg.size() == 3);
  CHECK(neg[0] == doctest::Approx(0.1));
  CHECK(neg[1] == 1.0);
  CHECK(neg[2] == doctest::Approx(1.1));
  CHECK(one_sided_error_basis(ScalarFunction::inverse(), true, 3) == analytic_error_basis(3));
  CHECK(one_sided_error_basis(ScalarFunction::log(), false, 3) == analytic_error_basis(3));
}

TEST_CASE("extrapolation is exact on the model") {
  const std::vector<ErrorTerm> basis = {{0.1, 0}, {1.0, 0}, {1.1, 0}};
  std::vector<long double> steps, q;
  for (int k = 0; k < 4; ++k) {
    const long double t = 1e-3L / std::pow(2.0L, k);
    steps.push_back(t);
    q.push_back(0.25L + 3.0L * std::pow(t, 0.1L) - 2.0L * t + 0.5L * std::pow(t, 1.1L));
  }
  CHECK(std::abs(static_cast<double>(extrapolate_to_zero(steps, q, basis)) - 0.25) <= 1e-12);

  const std::vector<ErrorTerm> log_basis = {{1.0, 1}, {1.0, 0}};
  steps.clear();
  q.clear();
  for (int k = 0; k < 3; ++k) {
    const long double t = 1e-2L / std::pow(2.0L, k);
    steps.push_back(t);
    q.push_back(-1.0L + t * std::log(t) + 4.0L * t);
  }
  CHECK(std::abs(static_cast<double>(extrapolate_to_zero(steps, q, log_basis)) + 1.0) <= 1e-14);
  CHECK_THROWS_AS(extrapolate_to_zero(std::span(steps).first(2), std::span(q).first(2), basis), std::invalid_argument);
}

TEST_CASE("one-sided estimate at positive definite A") {
  // Tr(log(diag(2, 3) + t I)) has derivative 1/2 + 1/3.
  const auto est = one_sided_derivative(ScalarFunction::log(), HermitianMatrix::identity(2),
                                        HermitianMatrix::diagonal({2.0, 3.0}), HermitianMatrix::identity(2));
  CHECK(est.value == doctest::Approx(5.0 / 6.0).epsilon(1e-10));
  CHECK(est.steps.size() == 6);
  CHECK(est.steps[0] == 1e-4);
}

TEST_CASE("extended-precision functional matches the double path") {
  SplitMix64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_singular_instance(rng, 5, 1);
    const auto f = ScalarFunction::power(-0.5);
    const auto ext = functional_extended(f, inst.p, inst.a, 0.0L, inst.b);
    REQUIRE(ext.has_value());
    const double dbl = eval_functional(f, inst.p, inst.a).value.value();
    CHECK(std::abs(static_cast<double>(*ext) - dbl) <= 1e-12 * (1.0 + std::abs(dbl)));
  }
  const auto none = functional_extended(ScalarFunction::log(), HermitianMatrix::identity(2),
                                        HermitianMatrix::diagonal({1.0, 0.0}), 0.0L, HermitianMatrix::zero(2));
  CHECK_FALSE(none.has_value());
}

TEST_CASE("one-sided estimate errors") {
  const auto a = HermitianMatrix::diagonal({1.0, 0.0});
  CHECK_THROWS_AS(one_sided_derivative(ScalarFunction::log(), HermitianMatrix::identity(2), a,
                                       HermitianMatrix::identity(2)),
                  DomainError);
  CHECK_THROWS_AS(one_sided_derivative(ScalarFunction::log(), a, a, HermitianMatrix::diagonal({0.0, -1.0})),
                  DomainError);
  OneSidedOptions bad;
  bad.terms = 0;
  CHECK_THROWS_AS(one_sided_derivative(ScalarFunction::log(), a, a, a, bad), std::invalid_argument);
}
