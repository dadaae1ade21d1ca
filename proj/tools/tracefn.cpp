// tracefn: evaluate trace functionals Tr(P f(A)), their directional
// derivatives, and the built-in verification suites.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 domain error, 3 an oracle
// or suite check failed.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracefn/derivative.hpp"
#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"
#include "tracefn/integral.hpp"
#include "tracefn/matrix_io.hpp"
#include "tracefn/report.hpp"
#include "tracefn/suites.hpp"
#include "tracefn/trace_functional.hpp"

namespace {

using namespace tracefn;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDomain = 2;
constexpr int kExitCheck = 3;

struct Settings {
  bool json = false;
  double tol = 1e-4;
  std::string verify = "none";
  std::uint64_t seed = 1;
  int trials = 10;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string digest(const std::string& command, const std::vector<std::string>& paths) {
  std::string bytes = command;
  for (const auto& p : paths) bytes += '\0' + slurp(p);
  return fnv1a_hex(bytes);
}

const auto g_start = std::chrono::steady_clock::now();

void emit(RunReport& report, const Settings& s, const std::vector<std::string>& human) {
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start).count();
  if (s.json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    for (const auto& line : human) std::cout << line << '\n';
  }
}

int cmd_eval(const std::string& f_spec, const std::string& p_path, const std::string& a_path,
             const Settings& s, RunReport& report) {
  const auto f = parse_function_spec(f_spec);
  const auto p = read_matrix_file(p_path);
  const auto a = read_matrix_file(a_path);
  report.input_digest = digest(report.command, {p_path, a_path});

  const auto result = eval_functional(f, p, a, ThresholdPolicy::from_environment());
  report.add_result("f_P(A)", extended_json(result.value), Provenance::formula);
  report.results["rank_used"] = result.rank_used;
  report.results["image_condition_held"] = result.image_condition_held;
  emit(report, s, {format_extended(result.value)});
  return kExitOk;
}

int cmd_dderiv(const std::string& f_spec, const std::string& p_path, const std::string& a_path,
               const std::string& b_path, const Settings& s, RunReport& report) {
  if (s.verify != "none" && s.verify != "fd" && s.verify != "quad" && s.verify != "all")
    throw ParseError("--verify must be one of none, fd, quad, all");
  const auto f = parse_function_spec(f_spec);
  const auto p = read_matrix_file(p_path);
  const auto a = read_matrix_file(a_path);
  const auto b = read_matrix_file(b_path);
  report.input_digest = digest(report.command, {p_path, a_path, b_path});
  const auto policy = ThresholdPolicy::from_environment();

  const auto d = directional_derivative(f, p, a, b, policy);
  const double formula = d.formula_value;
  report.add_result("formula_value", number_json(formula), Provenance::formula);
  report.results["semantics"] = to_string(d.semantics);
  report.results["direction_admissible"] = d.admissibility.admissible;

  std::vector<std::string> human = {"formula_value: " + format_number(formula),
                                    std::string("semantics: ") + to_string(d.semantics)};
  if (d.direction_warning) human.push_back("warning: direction B is not admissible on the probe grid");

  bool all_pass = true;
  const double scale = 1.0 + std::abs(formula);

  if (s.verify == "fd" || s.verify == "all") {
    std::string verdict;
    try {
      const double fd = one_sided_derivative(f, p, a, b, {}, policy).value;
      report.add_result("finite_difference", number_json(fd), Provenance::finite_difference);
      human.push_back("finite_difference: " + format_number(fd));
      switch (d.semantics) {
        case DerivativeSemantics::exact_derivative:
          verdict = std::abs(fd - formula) <= s.tol * scale ? "pass" : "fail";
          break;
        case DerivativeSemantics::lower_bound:
          verdict = fd >= formula - 1e-6 ? "pass" : "fail";
          break;
        case DerivativeSemantics::formula_only:
          verdict = "informational";
          break;
      }
    } catch (const DomainError& e) {
      verdict = "skipped";
      report.verdicts["finite_difference_reason"] = e.what();
    }
    report.verdicts["finite_difference"] = verdict;
    human.push_back("finite_difference_verdict: " + verdict +
                    (d.semantics == DerivativeSemantics::lower_bound ? " (lower bound)" : ""));
    all_pass = all_pass && verdict != "fail";
  }

  if (s.verify == "quad" || s.verify == "all") {
    std::string verdict;
    const bool supported =
        f.family() == FunctionFamily::logarithm ||
        (f.family() == FunctionFamily::power && *f.parameter() > -1.0 && *f.parameter() < 1.0 && *f.parameter() != 0.0);
    if (!supported) {
      verdict = "skipped";
      report.verdicts["quadrature_reason"] = "no integral representation for " + f.name();
    } else {
      try {
        const double q = derivative_via_integral(f, p, a, b, {}, policy).value;
        report.add_result("quadrature", number_json(q), Provenance::quadrature);
        human.push_back("quadrature: " + format_number(q));
        verdict = std::abs(q - formula) <= 1e-6 * scale ? "pass" : "fail";
      } catch (const ConvergenceError& e) {
        verdict = "fail";
        report.verdicts["quadrature_reason"] = e.what();
      }
    }
    report.verdicts["quadrature"] = verdict;
    human.push_back("quadrature_verdict: " + verdict);
    all_pass = all_pass && verdict != "fail";
  }

  emit(report, s, human);
  return all_pass ? kExitOk : kExitCheck;
}

int cmd_verify(const std::string& suite, const Settings& s, RunReport& report) {
  if (s.trials < 0) throw ParseError("--trials must be non-negative");
  report.input_digest = fnv1a_hex(report.command);
  const auto suites = run_suites(suite, {s.seed, s.trials});
  std::vector<std::string> human;
  bool all_pass = true;
  json list = json::array();
  for (const auto& r : suites) {
    for (const auto& c : r.checks) {
      std::string line = (c.passed ? "PASS " : "FAIL ") + r.name + ": " + c.label;
      if (!c.passed) line += " " + c.detail.dump();
      human.push_back(line);
    }
    human.push_back("suite " + r.name + ": " + std::to_string(r.checks.size() - r.failures()) + "/" +
                    std::to_string(r.checks.size()) + " passed");
    list.push_back(r.to_json());
    report.verdicts[r.name] = r.passed() ? "pass" : "fail";
    all_pass = all_pass && r.passed();
  }
  report.results["suites"] = std::move(list);
  emit(report, s, human);
  return all_pass ? kExitOk : kExitCheck;
}

int cmd_demo_gap(const Settings& s, RunReport& report) {
  report.input_digest = fnv1a_hex(report.command);
  const auto g = inverse_gap_demo();
  report.add_result("formula_value", number_json(g.formula_value), Provenance::formula);
  report.add_result("finite_difference", number_json(g.fd_estimate), Provenance::finite_difference);
  report.results["gap"] = number_json(g.gap);
  report.results["functional_at_A"] = number_json(g.functional_at_a);
  json curve = json::array();
  std::vector<std::string> human = {
      "A = P = diag(1, 0), B = [[0, 1], [1, 1]], f(x) = 1/x",
      "f_P(A): " + format_number(g.functional_at_a),
      "formula Tr(P Phi(B)): " + format_number(g.formula_value),
      "finite difference df_P(A; B): " + format_number(g.fd_estimate),
      "gap: " + format_number(g.gap)};
  bool curve_ok = true;
  for (const auto& pt : g.curve) {
    curve.push_back({{"t", pt.t}, {"functional", number_json(pt.functional)}, {"closed_form", number_json(pt.closed_form)}});
    human.push_back("t = " + format_number(pt.t) + ": Tr(P(A+tB)^-1) = " + format_number(pt.functional) +
                    ", 1/(1-t) = " + format_number(pt.closed_form));
    curve_ok = curve_ok && std::abs(pt.functional - pt.closed_form) <= 1e-10;
  }
  report.results["curve"] = std::move(curve);
  const bool lower_bound = g.fd_estimate >= g.formula_value - 1e-6;
  report.verdicts["lower_bound"] = lower_bound ? "pass" : "fail";
  report.verdicts["closed_form_curve"] = curve_ok ? "pass" : "fail";
  emit(report, s, human);
  return lower_bound && curve_ok ? kExitOk : kExitCheck;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace functionals Tr(P f(A)) on PSD matrices and their directional derivatives"};
  app.require_subcommand(1);
  Settings s;
  app.add_flag("--json", s.json, "Emit the full JSON run report");
  app.add_option("--tol", s.tol, "Finite-difference agreement tolerance (relative to 1 + |formula|)")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string f_spec, p_path, a_path, b_path, suite;

  auto* eval = app.add_subcommand("eval", "Evaluate f_P(A) = Tr(P f(A))");
  eval->add_option("f", f_spec, "log | power:<p> | inverse | identity | square")->required();
  eval->add_option("P", p_path, "Matrix file for P")->required();
  eval->add_option("A", a_path, "Matrix file for A")->required();

  auto* dderiv = app.add_subcommand("dderiv", "Directional derivative of f_P at A along B");
  dderiv->add_option("f", f_spec, "log | power:<p> | inverse | identity | square")->required();
  dderiv->add_option("P", p_path, "Matrix file for P")->required();
  dderiv->add_option("A", a_path, "Matrix file for A")->required();
  dderiv->add_option("B", b_path, "Matrix file for B")->required();
  dderiv->add_option("--verify", s.verify, "Oracles to run: none, fd, quad, all")
      ->check(CLI::IsMember({"none", "fd", "quad", "all"}));

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "prop1 | kernel-limit | quadrature | gap | all")
      ->required()
      ->check(CLI::IsMember({"prop1", "kernel-limit", "quadrature", "gap", "all"}));
  verify->add_option("--seed", s.seed, "Random seed");
  verify->add_option("--trials", s.trials, "Random trials per check family")->check(CLI::NonNegativeNumber);

  auto* demo = app.add_subcommand("demo-gap", "Show the strict lower bound for f(x) = 1/x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  RunReport report;
  report.command = join_args(argc, argv);

  try {
    if (*eval) return cmd_eval(f_spec, p_path, a_path, s, report);
    if (*dderiv) return cmd_dderiv(f_spec, p_path, a_path, b_path, s, report);
    if (*verify) return cmd_verify(suite, s, report);
    if (*demo) return cmd_demo_gap(s, report);
  } catch (const ParseError& e) {
    std::cerr << "tracefn: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "tracefn: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "tracefn: " << e.what() << '\n';
    return kExitCheck;
  } catch (const TrackingError& e) {
    std::cerr << "tracefn: " << e.what() << '\n';
    return kExitCheck;
  } catch (const Error& e) {
    std::cerr << "tracefn: domain error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitInput;
}
