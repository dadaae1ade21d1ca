#include "tracefn/scalar_function.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tracefn/errors.hpp"

namespace tracefn {

ScalarFunction ScalarFunction::log() {
  ScalarFunction f;
  f.name_ = "log";
  f.family_ = FunctionFamily::logarithm;
  f.eval_ = [](double x) { return std::log(x); };
  f.deriv_ = [](double x) { return 1.0 / x; };
  f.eval_ext_ = [](long double x) { return std::log(x); };
  f.tf_limit_zero_ = true;
  return f;
}

ScalarFunction ScalarFunction::power(double p) {
  if (!std::isfinite(p)) throw std::invalid_argument("power exponent must be finite");
  ScalarFunction f;
  std::ostringstream os;
  os << "power:" << p;
  f.name_ = os.str();
  f.family_ = FunctionFamily::power;
  f.parameter_ = p;
  if (p == 1.0) {
    f.eval_ = [](double x) { return x; };
    f.deriv_ = [](double) { return 1.0; };
    f.eval_ext_ = [](long double x) { return x; };
  } else if (p == 2.0) {
    f.eval_ = [](double x) { return x * x; };
    f.deriv_ = [](double x) { return 2.0 * x; };
    f.eval_ext_ = [](long double x) { return x * x; };
  } else if (p == -1.0) {
    f.eval_ = [](double x) { return 1.0 / x; };
    f.deriv_ = [](double x) { return -1.0 / (x * x); };
    f.eval_ext_ = [](long double x) { return 1.0L / x; };
  } else {
    f.eval_ = [p](double x) { return std::pow(x, p); };
    f.deriv_ = [p](double x) { return p * std::pow(x, p - 1.0); };
    f.eval_ext_ = [p](long double x) { return std::pow(x, static_cast<long double>(p)); };
  }
  if (p > 0.0) f.extends_to_zero_ = 0.0;
  if (p == 0.0) f.extends_to_zero_ = 1.0;
  f.tf_limit_zero_ = p > -1.0;
  return f;
}

ScalarFunction ScalarFunction::inverse() {
  auto f = power(-1.0);
  f.name_ = "inverse";
  return f;
}

ScalarFunction ScalarFunction::identity() {
  auto f = power(1.0);
  f.name_ = "identity";
  return f;
}

ScalarFunction ScalarFunction::square() {
  auto f = power(2.0);
  f.name_ = "square";
  return f;
}

ScalarFunction builtin(const std::string& name, std::optional<double> parameter) {
  if (name == "log") return ScalarFunction::log();
  if (name == "inverse") return ScalarFunction::inverse();
  if (name == "identity") return ScalarFunction::identity();
  if (name == "square") return ScalarFunction::square();
  if (name == "power") {
    if (!parameter) throw std::invalid_argument("builtin 'power' requires an exponent");
    return ScalarFunction::power(*parameter);
  }
  throw std::invalid_argument("unknown builtin function '" + name + "'");
}

ScalarFunction parse_function_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return builtin(spec);
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  if (head != "power") throw std::invalid_argument("unknown function spec '" + spec + "'");
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(tail, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad exponent in '" + spec + "'");
  }
  if (used != tail.size()) throw std::invalid_argument("bad exponent in '" + spec + "'");
  return builtin("power", p);
}

CustomFunction make_custom(std::string name, ScalarFunction::Eval eval, ScalarFunction::Eval deriv,
                           bool tf_limit_zero, std::optional<double> extends_to_zero) {
  if (!eval || !deriv) throw std::invalid_argument("custom function needs both f and f'");
  if (extends_to_zero && !tf_limit_zero)
    throw std::invalid_argument("custom function '" + name +
                                "': a finite limit at 0 implies t f(t) -> 0, flag is inconsistent");
  CustomFunction out;
  out.function.name_ = std::move(name);
  out.function.family_ = FunctionFamily::custom;
  out.function.eval_ = eval;
  out.function.deriv_ = std::move(deriv);
  out.function.eval_ext_ = [eval](long double x) {
    return static_cast<long double>(eval(static_cast<double>(x)));
  };
  out.function.extends_to_zero_ = extends_to_zero;
  out.function.tf_limit_zero_ = tf_limit_zero;

  // Spot check only: the limit is an analytic property.
  const double probes[] = {1e-4, 1e-6, 1e-8};
  double prev = INFINITY;
  bool shrinking = true;
  for (double t : probes) {
    const double v = std::abs(t * eval(t));
    if (!std::isfinite(v) || v > prev) shrinking = false;
    prev = v;
  }
  const bool looks_zero = shrinking && prev < 1e-3;
  if (tf_limit_zero && !looks_zero)
    out.warning = "t f(t) does not appear to vanish as t -> 0+ (last probe " + std::to_string(prev) + ")";
  else if (!tf_limit_zero && looks_zero)
    out.warning = "t f(t) appears to vanish as t -> 0+ although the flag says otherwise";
  return out;
}

DividedDifference divided_difference(const ScalarFunction& f, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    std::ostringstream os;
    os << "divided difference of " << f.name() << " needs x, y > 0 (got " << x << ", " << y << ")";
    throw DomainError(os.str());
  }
  if (x == y) return {f.derivative(x), DividedDifferenceRegime::diagonal};
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (hi - lo <= kNearDiagonalDelta * hi)
    return {f.derivative(lo + (hi - lo) / 2.0), DividedDifferenceRegime::near_diagonal};
  return {(f(hi) - f(lo)) / (hi - lo), DividedDifferenceRegime::off_diagonal};
}

}  // namespace tracefn
