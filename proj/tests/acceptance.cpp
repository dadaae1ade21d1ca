// Acceptance gate. One PASS/FAIL line per criterion; exit status 0 iff all
// criteria pass. Counts, tolerances and time budgets are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tracefn/derivative.hpp"
#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/integral.hpp"
#include "tracefn/perturbation.hpp"
#include "tracefn/random.hpp"
#include "tracefn/trace_functional.hpp"

using namespace tracefn;
using tracefn::testing::eigen_matrix_function;
using tracefn::testing::frobenius_relative;
using tracefn::testing::relative_error;

namespace {

struct Outcome {
  bool passed = true;
  std::string summary;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Formula 0, fd 1, closed-form curve on the 2x2 instance.
Outcome gap_reproduction() {
  const auto g = inverse_gap_demo();
  bool curve = true;
  for (const auto& pt : g.curve) {
    if (pt.t == 0.1 || pt.t == 0.01) curve = curve && std::abs(pt.functional - 1.0 / (1.0 - pt.t)) <= 1e-10;
  }
  Outcome o;
  o.passed = g.formula_value == 0.0 && std::abs(g.fd_estimate - 1.0) <= 1e-3 && curve;
  o.summary = "formula=" + fmt(g.formula_value) + " fd=" + fmt(g.fd_estimate) + " |fd-1|=" +
              fmt(std::abs(g.fd_estimate - 1.0)) + " curve " + (curve ? "ok" : "off");
  return o;
}

Outcome singular_agreement() {
  const std::vector<ScalarFunction> fs = {ScalarFunction::log(), ScalarFunction::power(0.5),
                                          ScalarFunction::power(-0.5), ScalarFunction::power(0.9),
                                          ScalarFunction::power(-0.9)};
  Outcome o;
  std::ostringstream os;
  SplitMix64 rng(20240601);
  for (const auto& f : fs) {
    int ok = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = rng.uniform_int(3, 8);
      const Eigen::Index corank = rng.uniform_int(1, 2);
      const auto inst = random_singular_instance(rng, n, corank);
      const double formula = directional_derivative(f, inst.p, inst.a, inst.b).formula_value;
      const double fd = one_sided_derivative(f, inst.p, inst.a, inst.b).value;
      const double err = relative_error(fd, formula);
      worst = std::max(worst, err);
      ok += err <= 1e-4 ? 1 : 0;
    }
    os << f.name() << " " << ok << "/50 (max rel " << fmt(worst) << ") ";
    o.passed = o.passed && ok == 50;
  }
  o.summary = os.str();
  return o;
}

Outcome frechet_check() {
  struct Entry {
    ScalarFunction f;
    std::function<double(double)> scalar;
  };
  const std::vector<Entry> fs = {{ScalarFunction::log(), [](double x) { return std::log(x); }},
                                 {ScalarFunction::square(), [](double x) { return x * x; }},
                                 {ScalarFunction::power(0.5), [](double x) { return std::sqrt(x); }},
                                 {ScalarFunction::inverse(), [](double x) { return 1.0 / x; }}};
  Outcome o;
  std::ostringstream os;
  SplitMix64 rng(31337);
  for (const auto& e : fs) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = rng.uniform_int(2, 8);
      const auto a = random_psd(rng, n, n);
      const auto b = random_hermitian(rng, n);
      const double h = 1e-5;
      const CMatrix fd = (eigen_matrix_function(a + h * b, e.scalar) - eigen_matrix_function(a - h * b, e.scalar)) /
                         (2.0 * h);
      const CMatrix phi = phi_map(e.f, eig(a), b).matrix();
      worst = std::max(worst, frobenius_relative(phi, fd));
    }
    os << e.f.name() << " max " << fmt(worst) << " ";
    o.passed = o.passed && worst <= 1e-6;
  }
  o.summary = os.str();
  return o;
}

Outcome first_order_suite() {
  Outcome o;
  SplitMix64 rng(4242);
  int degenerate_count = 0;
  int ok = 0;
  double worst_err = 0.0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const bool degenerate = trial % 2 == 0;
    degenerate_count += degenerate ? 1 : 0;
    const Eigen::Index n = rng.uniform_int(3, 6);
    const auto inst = random_perturbation_instance(rng, n, degenerate);
    const auto p = HermitianMatrix::identity(n);
    const auto grid = default_branch_grid();
    const auto coarse = check_prop1(track_branches(inst.a, inst.b, p, grid), inst.b);
    const auto fine = check_prop1(track_branches(inst.a, inst.b, p, refine_grid(grid)), inst.b);
    const double ratio = refinement_ratio(coarse, fine);
    worst_err = std::max({worst_err, coarse.max_err_i / coarse.tolerance, coarse.max_err_ii / coarse.tolerance,
                          coarse.max_err_iii / coarse.tolerance});
    worst_ratio = std::max(worst_ratio, ratio);
    ok += (coarse.passed && fine.passed && ratio <= 0.75) ? 1 : 0;
  }
  o.passed = ok == 20 && degenerate_count >= 5;
  o.summary = std::to_string(ok) + "/20 (" + std::to_string(degenerate_count) +
              " degenerate), max err/tol " + fmt(worst_err) + ", max refinement ratio " + fmt(worst_ratio);
  return o;
}

Outcome quadrature_triangle() {
  Outcome o;
  SplitMix64 rng(777);
  double worst_dd = 0.0;
  double worst_scalar = 0.0;
  for (int probe = 0; probe < 20; ++probe) {
    const double x = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
    const double y = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
    double p = rng.uniform(0.05, 0.95);
    if (probe % 2 == 1) p = -p;
    const auto f = ScalarFunction::power(p);
    worst_dd = std::max(worst_dd, relative_error(divided_difference_via_integral(p, x, y).value,
                                                 divided_difference(f, x, y).value));
    worst_scalar = std::max(worst_scalar, relative_error(power_via_integral(p, x).value, std::pow(x, p)));
    if (std::abs(std::log(x)) > 1e-3)
      worst_scalar = std::max(worst_scalar, relative_error(log_via_integral(x).value, std::log(x)));
  }
  std::ostringstream os;
  os << "divided differences max " << fmt(worst_dd) << ", scalar reps max " << fmt(worst_scalar) << "; matrix ";
  o.passed = worst_dd <= 1e-6 && worst_scalar <= 1e-8;
  for (const auto& f : {ScalarFunction::log(), ScalarFunction::power(0.5), ScalarFunction::power(-0.5)}) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = rng.uniform_int(3, 7);
      const auto inst = random_singular_instance(rng, n, rng.uniform_int(1, 2));
      const double formula = directional_derivative(f, inst.p, inst.a, inst.b).formula_value;
      const double quad = derivative_via_integral(f, inst.p, inst.a, inst.b).value;
      worst = std::max(worst, relative_error(quad, formula));
    }
    os << f.name() << " " << fmt(worst) << " ";
    o.passed = o.passed && worst <= 1e-6;
  }
  o.summary = os.str();
  return o;
}

Outcome lower_bound() {
  Outcome o;
  SplitMix64 rng(99);
  const auto f = ScalarFunction::inverse();
  int bound_ok = 0;
  double min_slack = INFINITY;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = rng.uniform_int(3, 7);
    const auto inst = random_singular_instance(rng, n, rng.uniform_int(1, 2));
    const double formula = directional_derivative(f, inst.p, inst.a, inst.b).formula_value;
    const double fd = one_sided_derivative(f, inst.p, inst.a, inst.b).value;
    min_slack = std::min(min_slack, fd - formula);
    bound_ok += fd >= formula - 1e-6 ? 1 : 0;
  }
  int equal_ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = rng.uniform_int(3, 7);
    const auto inst = random_singular_instance(rng, n, rng.uniform_int(1, 2), DirectionKind::range_only);
    const double formula = directional_derivative(f, inst.p, inst.a, inst.b).formula_value;
    const double fd = one_sided_derivative(f, inst.p, inst.a, inst.b).value;
    const double err = relative_error(fd, formula);
    worst = std::max(worst, err);
    equal_ok += err <= 1e-4 ? 1 : 0;
  }
  o.passed = bound_ok == 30 && equal_ok == 10;
  o.summary = "bound " + std::to_string(bound_ok) + "/30 (min fd-formula " + fmt(min_slack) + "), im(B) in im(A) " +
              std::to_string(equal_ok) + "/10 (max rel " + fmt(worst) + ")";
  return o;
}

Outcome invariance() {
  Outcome o;
  SplitMix64 rng(5150);
  const std::vector<ScalarFunction> fs = {ScalarFunction::log(), ScalarFunction::power(0.5),
                                          ScalarFunction::inverse(), ScalarFunction::square()};
  double worst_unitary = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& f = fs[static_cast<std::size_t>(trial) % fs.size()];
    const Eigen::Index n = rng.uniform_int(2, 7);
    const auto inst = random_singular_instance(rng, n, rng.uniform_int(1, n - 1 < 2 ? 1 : 2));
    const CMatrix u = random_unitary(rng, n);
    const auto conj = [&](const HermitianMatrix& m) { return HermitianMatrix::symmetrized(u * m.matrix() * u.adjoint()); };
    const double base = eval_functional(f, inst.p, inst.a).value.value();
    const double rotated = eval_functional(f, conj(inst.p), conj(inst.a)).value.value();
    worst_unitary = std::max(worst_unitary, relative_error(rotated, base));
  }

  double worst_basis = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& f = fs[static_cast<std::size_t>(trial) % fs.size()];
    const Eigen::Index n = rng.uniform_int(4, 7);
    // Levels with multiplicities 2, 2 and singles, plus a kernel.
    RVector alpha(n);
    alpha << RVector::Constant(2, 2.0), RVector::Constant(2, 1.0), RVector::LinSpaced(n - 4, 0.5, 0.0);
    alpha(n - 1) = 0.0;
    const CMatrix v = random_unitary(rng, n);
    const auto a = with_spectrum(v, alpha);
    const auto b = random_hermitian(rng, n);
    const auto dec = eig(a);
    // Rotate the stored eigenvectors inside every degenerate block.
    CMatrix w = dec.eigenvectors();
    const double tol = 1e-8;
    for (Eigen::Index s = 0; s < n;) {
      Eigen::Index e = s + 1;
      while (e < n && std::abs(dec.eigenvalue(e) - dec.eigenvalue(s)) <= tol) ++e;
      if (e - s > 1) w.middleCols(s, e - s) = w.middleCols(s, e - s) * random_unitary(rng, e - s);
      s = e;
    }
    const SpectralDecomposition rotated(dec.eigenvalues(), w, dec.zero_threshold());
    worst_basis = std::max(worst_basis, frobenius_relative(phi_map(f, rotated, b).matrix(), phi_map(f, dec, b).matrix()));
  }
  o.passed = worst_unitary <= 1e-9 && worst_basis <= 1e-9;
  o.summary = "unitary max rel " + fmt(worst_unitary) + ", basis independence max rel " + fmt(worst_basis);
  return o;
}

Outcome relative_entropy_sanity() {
  Outcome o;
  SplitMix64 rng(8080);
  double worst_self = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = rng.uniform_int(2, 6);
    const auto p = random_density(rng, n, rng.uniform_int(1, static_cast<int>(n)));
    worst_self = std::max(worst_self, std::abs(relative_entropy(p, p).value()));
  }
  int infinity_ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = rng.uniform_int(2, 6);
    const CMatrix v = random_unitary(rng, n);
    const Eigen::Index rq = rng.uniform_int(1, static_cast<int>(n) - 1);
    RVector q_alpha = RVector::Zero(n);
    for (Eigen::Index i = 0; i < rq; ++i) q_alpha(i) = rng.uniform(0.1, 1.0);
    q_alpha /= q_alpha.sum();
    const auto q = with_spectrum(v, q_alpha);
    // Even trials: P inside im(Q); odd trials: P leaks into ker(Q).
    const bool inside = trial % 2 == 0;
    const Eigen::Index rp = inside ? rq : rq + 1;
    const CMatrix g = random_complex(rng, rp, rp);
    CMatrix pt = CMatrix::Zero(n, n);
    pt.topLeftCorner(rp, rp) = g * g.adjoint();
    pt /= pt.trace().real();
    const auto p = HermitianMatrix::symmetrized(v * pt * v.adjoint());
    const auto s = relative_entropy(p, q);
    const bool contained = image_contained(p, eig(q));
    infinity_ok += (contained == inside && s.is_finite() == contained) ? 1 : 0;
  }
  int nonneg_ok = 0;
  double min_value = INFINITY;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = rng.uniform_int(2, 6);
    const CMatrix v = random_unitary(rng, n);
    const Eigen::Index rq = rng.uniform_int(1, static_cast<int>(n));
    const Eigen::Index rp = rng.uniform_int(1, static_cast<int>(rq));
    RVector q_alpha = RVector::Zero(n);
    for (Eigen::Index i = 0; i < rq; ++i) q_alpha(i) = rng.uniform(0.1, 1.0);
    q_alpha /= q_alpha.sum();
    const CMatrix g = random_complex(rng, rp, rp);
    CMatrix pt = CMatrix::Zero(n, n);
    pt.topLeftCorner(rp, rp) = g * g.adjoint();
    pt /= pt.trace().real();
    const double s = relative_entropy(HermitianMatrix::symmetrized(v * pt * v.adjoint()), with_spectrum(v, q_alpha)).value();
    min_value = std::min(min_value, s);
    nonneg_ok += s >= -1e-9 ? 1 : 0;
  }
  o.passed = worst_self <= 1e-10 && infinity_ok == 20 && nonneg_ok == 20;
  o.summary = "max |S(P||P)| " + fmt(worst_self) + ", +inf iff image fails " + std::to_string(infinity_ok) +
              "/20, nonnegative " + std::to_string(nonneg_ok) + "/20 (min " + fmt(min_value) + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "inverse-gap reproduction", 1.0, gap_reproduction},
      {2, "singular-A agreement with one-sided FD", 30.0, singular_agreement},
      {3, "positive definite Frechet check", 10.0, frechet_check},
      {4, "first-order perturbation identities", 20.0, first_order_suite},
      {5, "quadrature oracle triangle", 30.0, quadrature_triangle},
      {6, "lower bound for x^-1", 20.0, lower_bound},
      {7, "invariance suite", 10.0, invariance},
      {8, "relative entropy sanity", 5.0, relative_entropy_sanity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool passed = o.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("%s criterion %d: %s | %s | %.3fs (budget %.0fs)\n", passed ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.summary.c_str(), seconds, c.budget_seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
