#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tracefn {

/// Where a function sits in the catalog. The family decides how finite
/// difference oracles model the behaviour of f near 0 and whether an integral
/// representation is available.
enum class FunctionFamily { logarithm, power, custom };

/// A differentiable f : (0, ∞) -> R together with the facts about its
/// behaviour at 0 that the trace-functional machinery needs.
struct CustomFunction;

class ScalarFunction {
 public:
  using Eval = std::function<double(double)>;
  using EvalExtended = std::function<long double(long double)>;

  static ScalarFunction log();
  static ScalarFunction power(double p);
  /// x^-1; identical to power(-1) apart from the name.
  static ScalarFunction inverse();
  static ScalarFunction identity();
  static ScalarFunction square();

  const std::string& name() const { return name_; }
  FunctionFamily family() const { return family_; }
  std::optional<double> parameter() const { return parameter_; }

  double operator()(double x) const { return eval_(x); }
  double derivative(double x) const { return deriv_(x); }
  /// f evaluated in extended precision where the catalog entry supports it.
  long double extended(long double x) const { return eval_ext_(x); }

  /// lim_{t→0+} f(t) when it is finite.
  std::optional<double> extends_to_zero() const { return extends_to_zero_; }
  /// lim_{t→0+} t f(t) = 0.
  bool tf_limit_zero() const { return tf_limit_zero_; }
  bool is_power(double p) const { return family_ == FunctionFamily::power && parameter_ == p; }

 private:
  friend struct CustomFunction;
  friend CustomFunction make_custom(std::string, Eval, Eval, bool, std::optional<double>);
  ScalarFunction() = default;

  std::string name_;
  FunctionFamily family_ = FunctionFamily::custom;
  std::optional<double> parameter_;
  Eval eval_;
  Eval deriv_;
  EvalExtended eval_ext_;
  std::optional<double> extends_to_zero_;
  bool tf_limit_zero_ = false;
};

/// Catalog lookup: name ∈ {log, power, inverse, identity, square}; `power`
/// needs the exponent. Throws std::invalid_argument otherwise.
ScalarFunction builtin(const std::string& name, std::optional<double> parameter = std::nullopt);

/// Parses the command-line form: `log`, `power:<p>`, `inverse`, `identity`,
/// `square`.
ScalarFunction parse_function_spec(const std::string& spec);

struct CustomFunction {
  ScalarFunction function;
  /// Set when the numeric spot check of t f(t) at t = 1e-4, 1e-6, 1e-8
  /// contradicts the declared tf_limit_zero flag.
  std::optional<std::string> warning;
};

/// User-supplied (f, f', flag) triple. Differentiability is the caller's
/// responsibility. A finite limit at 0 together with tf_limit_zero = false is
/// contradictory and rejected.
CustomFunction make_custom(std::string name, ScalarFunction::Eval eval, ScalarFunction::Eval deriv,
                           bool tf_limit_zero, std::optional<double> extends_to_zero = std::nullopt);

enum class DividedDifferenceRegime { diagonal, off_diagonal, near_diagonal };

struct DividedDifference {
  double value = 0.0;
  DividedDifferenceRegime regime = DividedDifferenceRegime::diagonal;
};

/// Relative gap below which the quotient is replaced by f' at the midpoint.
inline constexpr double kNearDiagonalDelta = 1e-7;

/// First-order divided difference f^[1](x, y). Exactly symmetric in (x, y).
/// Throws DomainError unless x > 0 and y > 0.
DividedDifference divided_difference(const ScalarFunction& f, double x, double y);

}  // namespace tracefn
