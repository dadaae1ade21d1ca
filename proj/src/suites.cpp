#include "tracefn/suites.hpp"

#include <cmath>
#include <stdexcept>

#include "tracefn/derivative.hpp"
#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/integral.hpp"
#include "tracefn/perturbation.hpp"
#include "tracefn/random.hpp"
#include "tracefn/report.hpp"

namespace tracefn {

bool SuiteReport::passed() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) list.push_back({{"label", c.label}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"suite", name}, {"passed", passed()}, {"failures", failures()}, {"checks", std::move(list)}};
}

namespace {

struct GapInstance {
  HermitianMatrix a = HermitianMatrix::diagonal({1.0, 0.0});
  HermitianMatrix p = HermitianMatrix::diagonal({1.0, 0.0});
  HermitianMatrix b = HermitianMatrix::from_real((RMatrix(2, 2) << 0.0, 1.0, 1.0, 1.0).finished());
};

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

/// Runs `body`; a library error turns into a failed check carrying the message.
template <typename Body>
Check guarded(std::string label, Body body) {
  Check c{std::move(label), false, nlohmann::json::object()};
  try {
    body(c);
  } catch (const Error& e) {
    c.passed = false;
    c.detail["error"] = e.what();
  }
  return c;
}

nlohmann::json prop1_json(const Prop1Report& r) {
  return {{"err_i", number_json(r.max_err_i)},
          {"err_ii", number_json(r.max_err_ii)},
          {"err_iii", number_json(r.max_err_iii)},
          {"tolerance", number_json(r.tolerance)}};
}

nlohmann::json limit_json(const KernelLimitReport& r) {
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& b : r.branches) {
    branches.push_back({{"branch", b.branch},
                        {"lambda_prime0", number_json(b.lambda_prime0)},
                        {"last_sample", b.samples.empty() ? nlohmann::json(nullptr) : number_json(b.samples.back())},
                        {"target", number_json(b.target)},
                        {"verdict", to_string(b.verdict)}});
  }
  return {{"verdict", to_string(r.verdict)}, {"branches", std::move(branches)}};
}

}  // namespace

SuiteReport run_prop1_suite(const SuiteOptions& options) {
  SuiteReport report{"prop1", {}};

  report.checks.push_back(guarded("commuting diagonal pair", [](Check& c) {
    const auto a = HermitianMatrix::diagonal({1.0, 0.0});
    const auto b = HermitianMatrix::diagonal({0.0, 1.0});
    const auto track = track_branches(a, b, HermitianMatrix::identity(2));
    const auto r = check_prop1(track, b);
    c.detail = prop1_json(r);
    c.detail["lambda_prime0_kernel"] = number_json(track.lambda_prime0(1));
    c.passed = r.max_err_i <= 1e-10 && r.max_err_ii <= 1e-10 && r.max_err_iii <= 1e-10 &&
               std::abs(track.lambda_prime0(1) - 1.0) <= 1e-10;
  }));

  report.checks.push_back(guarded("2x2 gap instance", [](Check& c) {
    const GapInstance g;
    const auto r = check_prop1(track_branches(g.a, g.b, g.p), g.b);
    c.detail = prop1_json(r);
    c.passed = r.passed && r.max_err_i <= 1e-6;
  }));

  SplitMix64 rng(options.seed);
  for (int trial = 0; trial < options.trials; ++trial) {
    const bool degenerate = trial % 2 == 0;
    const Eigen::Index n = rng.uniform_int(3, 5);
    const auto inst = random_perturbation_instance(rng, n, degenerate);
    const std::string label = "random trial " + std::to_string(trial) + (degenerate ? " (degenerate)" : "");
    report.checks.push_back(guarded(label, [&](Check& c) {
      const auto p = HermitianMatrix::identity(n);
      const auto grid = default_branch_grid();
      const auto coarse = check_prop1(track_branches(inst.a, inst.b, p, grid), inst.b);
      const auto fine = check_prop1(track_branches(inst.a, inst.b, p, refine_grid(grid)), inst.b);
      const double ratio = refinement_ratio(coarse, fine);
      c.detail = prop1_json(coarse);
      c.detail["n"] = n;
      c.detail["refinement_ratio"] = number_json(ratio);
      c.passed = coarse.passed && fine.passed && ratio <= 0.75;
    }));
  }
  return report;
}

SuiteReport run_kernel_limit_suite(const SuiteOptions& options) {
  SuiteReport report{"kernel-limit", {}};
  const GapInstance g;

  report.checks.push_back(guarded("gap instance, log", [&](Check& c) {
    const auto r = check_kernel_limit(track_branches(g.a, g.b, g.p, branch_grid(24)), ScalarFunction::log());
    c.detail = limit_json(r);
    c.passed = r.verdict == LimitVerdict::pass;
  }));
  report.checks.push_back(guarded("gap instance, power:0.5", [&](Check& c) {
    const auto r = check_kernel_limit(track_branches(g.a, g.b, g.p), ScalarFunction::power(0.5));
    c.detail = limit_json(r);
    c.passed = r.verdict == LimitVerdict::pass;
  }));
  report.checks.push_back(guarded("gap instance, inverse ratio", [&](Check& c) {
    const auto r = check_kernel_limit(track_branches(g.a, g.b, g.p), ScalarFunction::inverse());
    c.detail = limit_json(r);
    c.passed = r.verdict == LimitVerdict::pass && r.branches.size() == 1 &&
               std::abs(r.branches.front().target - 1.0) <= 1e-4;
  }));

  SplitMix64 rng(options.seed);
  for (int trial = 0; trial < options.trials; ++trial) {
    const Eigen::Index n = rng.uniform_int(3, 6);
    const Eigen::Index corank = rng.uniform_int(1, 2);
    const auto inst = random_singular_instance(rng, n, corank, DirectionKind::admissible, 0.1);
    for (const auto& f : {ScalarFunction::log(), ScalarFunction::power(0.5)}) {
      const std::string label = "random trial " + std::to_string(trial) + ", " + f.name();
      report.checks.push_back(guarded(label, [&](Check& c) {
        const auto grid = f.family() == FunctionFamily::logarithm ? branch_grid(24) : default_branch_grid();
        const auto track = track_branches(inst.a, inst.b, inst.p, grid);
        const auto r = check_kernel_limit(track, f);
        c.detail = limit_json(r);
        bool vanishing = true;
        for (const auto& b : r.branches)
          vanishing = vanishing && std::abs(b.h0) <= 1e-8 && std::abs(b.h_prime0) <= 1e-8;
        c.detail["h0_and_h_prime0_vanish"] = vanishing;
        c.passed = r.verdict == LimitVerdict::pass && vanishing;
      }));
    }
  }
  return report;
}

SuiteReport run_quadrature_suite(const SuiteOptions& options) {
  SuiteReport report{"quadrature", {}};

  report.checks.push_back(guarded("log, diag(1,2), B = I", [](Check& c) {
    const auto a = HermitianMatrix::diagonal({1.0, 2.0});
    const auto q = derivative_via_integral(ScalarFunction::log(), HermitianMatrix::identity(2), a,
                                           HermitianMatrix::identity(2));
    c.detail = {{"quadrature", number_json(q.value)}, {"expected", 1.5}};
    c.passed = relative_error(q.value, 1.5) <= 1e-6;
  }));
  report.checks.push_back(guarded("power:0.5, diag(4,0), B = I", [](Check& c) {
    const auto q = derivative_via_integral(ScalarFunction::power(0.5), HermitianMatrix::diagonal({1.0, 0.0}),
                                           HermitianMatrix::diagonal({4.0, 0.0}), HermitianMatrix::identity(2));
    c.detail = {{"quadrature", number_json(q.value)}, {"expected", 0.25}};
    c.passed = relative_error(q.value, 0.25) <= 1e-6;
  }));

  SplitMix64 rng(options.seed);
  for (int trial = 0; trial < options.trials; ++trial) {
    const double x = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const double y = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    double p = rng.uniform(0.05, 0.95);
    if (rng.uniform() < 0.5) p = -p;
    report.checks.push_back(guarded("scalar probe " + std::to_string(trial), [&](Check& c) {
      const auto f = ScalarFunction::power(p);
      const double power_err = relative_error(power_via_integral(p, x).value, std::pow(x, p));
      const double lx = std::log(x);
      const double log_q = log_via_integral(x).value;
      const double log_err = std::abs(lx) < 1e-2 ? std::abs(log_q - lx) : relative_error(log_q, lx);
      const double log_tol = std::abs(lx) < 1e-2 ? 1e-10 : 1e-8;
      const double dd_err =
          relative_error(divided_difference_via_integral(p, x, y).value, divided_difference(f, x, y).value);
      c.detail = {{"x", x}, {"y", y}, {"p", p},
                  {"power_rel_err", number_json(power_err)},
                  {"log_err", number_json(log_err)},
                  {"divided_difference_rel_err", number_json(dd_err)}};
      c.passed = power_err <= 1e-8 && log_err <= log_tol && dd_err <= 1e-7;
    }));
  }

  for (int trial = 0; trial < options.trials; ++trial) {
    const Eigen::Index n = rng.uniform_int(3, 6);
    const Eigen::Index corank = rng.uniform_int(1, 2);
    const auto inst = random_singular_instance(rng, n, corank);
    for (const auto& f : {ScalarFunction::log(), ScalarFunction::power(0.5), ScalarFunction::power(-0.5)}) {
      report.checks.push_back(guarded("matrix trial " + std::to_string(trial) + ", " + f.name(), [&](Check& c) {
        const double formula = directional_derivative(f, inst.p, inst.a, inst.b).formula_value;
        const double quad = derivative_via_integral(f, inst.p, inst.a, inst.b).value;
        const double fd = one_sided_derivative(f, inst.p, inst.a, inst.b).value;
        const double scale = 1.0 + std::abs(formula);
        c.detail = {{"formula", number_json(formula)},
                    {"quadrature", number_json(quad)},
                    {"finite_difference", number_json(fd)}};
        c.passed = std::abs(quad - formula) <= 1e-6 * scale && std::abs(fd - formula) <= 1e-4 * scale &&
                   std::abs(quad - fd) <= (1e-6 + 1e-4) * scale;
      }));
    }
  }
  return report;
}

SuiteReport run_gap_suite(const SuiteOptions&) {
  SuiteReport report{"gap", {}};
  report.checks.push_back(guarded("x^-1 on the 2x2 instance", [](Check& c) {
    const auto g = inverse_gap_demo();
    nlohmann::json curve = nlohmann::json::array();
    bool curve_ok = true;
    for (const auto& pt : g.curve) {
      curve.push_back({{"t", pt.t}, {"functional", number_json(pt.functional)}, {"closed_form", number_json(pt.closed_form)}});
      curve_ok = curve_ok && std::abs(pt.functional - pt.closed_form) <= 1e-10;
    }
    c.detail = {{"formula", number_json(g.formula_value)},
                {"finite_difference", number_json(g.fd_estimate)},
                {"gap", number_json(g.gap)},
                {"curve", std::move(curve)}};
    c.passed = g.formula_value == 0.0 && std::abs(g.fd_estimate - 1.0) <= 1e-3 && curve_ok &&
               g.fd_estimate >= g.formula_value - 1e-6;
  }));
  return report;
}

std::vector<SuiteReport> run_suites(const std::string& name, const SuiteOptions& options) {
  if (name == "prop1") return {run_prop1_suite(options)};
  if (name == "kernel-limit") return {run_kernel_limit_suite(options)};
  if (name == "quadrature") return {run_quadrature_suite(options)};
  if (name == "gap") return {run_gap_suite(options)};
  if (name == "all")
    return {run_prop1_suite(options), run_kernel_limit_suite(options), run_quadrature_suite(options),
            run_gap_suite(options)};
  throw std::invalid_argument("unknown suite '" + name + "' (prop1, kernel-limit, quadrature, gap, all)");
}

}  // namespace tracefn
