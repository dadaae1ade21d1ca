#include "tracefn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tracefn {

namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are
// the Gauss points.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrod[7] * fc;
  double gauss = kGauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kNodes[static_cast<std::size_t>(j)];
    const double sum = f(c - dx) + f(c + dx);
    kronrod += kKronrod[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kGauss[static_cast<std::size_t>(j / 2)] * sum;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

QuadratureResult uniform(const Integrand& f, double a, double b, int depth) {
  const long panels = 1L << depth;
  QuadratureResult r;
  const double w = (b - a) / static_cast<double>(panels);
  for (long k = 0; k < panels; ++k) {
    const double lo = a + w * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + w;
    const Panel p = gk15(f, lo, hi);
    r.value += p.value;
    r.abs_error_estimate += p.error;
  }
  r.evaluations = 15 * panels;
  r.converged = true;
  return r;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options) {
  if (options.uniform_depth) {
    if (*options.uniform_depth < 0 || *options.uniform_depth > 24)
      throw std::invalid_argument("integrate: uniform depth out of range");
    return uniform(f, a, b, *options.uniform_depth);
  }
  std::priority_queue<Panel> queue;
  Panel first = gk15(f, a, b);
  double total = first.value;
  double error = first.error;
  long evaluations = 15;
  queue.push(first);
  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (error > tolerance() && static_cast<int>(queue.size()) < options.max_intervals) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      queue.push(worst);
      break;
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    evaluations += 30;
    queue.push(left);
    queue.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  std::vector<Panel> panels;
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  QuadratureResult r;
  // Fixed-order (left to right) reduction.
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    r.value += p.value;
    r.abs_error_estimate += p.error;
  }
  r.evaluations = evaluations;
  r.converged = r.abs_error_estimate <= std::max(options.abs_tol, options.rel_tol * std::abs(r.value));
  return r;
}

QuadratureResult integrate_half_line(const Integrand& f, const HalfLineShape& shape,
                                     const QuadratureOptions& options) {
  if (!(shape.split > 0.0) || !(shape.endpoint_exponent > -1.0) || !(shape.decay_exponent > 1.0))
    throw std::invalid_argument("integrate_half_line: need split > 0, endpoint exponent > -1, decay exponent > 1");
  const double split = shape.split;
  const double a = 2.0 / (shape.endpoint_exponent + 1.0);
  const double m = 2.0 / (shape.decay_exponent - 1.0);

  const Integrand head = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double s = split * std::pow(u, a);
    return f(s) * split * a * std::pow(u, a - 1.0);
  };
  const Integrand tail = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double s = split * std::pow(u, -m);
    if (!std::isfinite(s)) return 0.0;
    return f(s) * split * m * std::pow(u, -m - 1.0);
  };

  QuadratureOptions piece = options;
  // Each piece gets half of the absolute budget.
  piece.abs_tol = 0.5 * options.abs_tol;
  const auto h = integrate(head, 0.0, 1.0, piece);
  const auto t = integrate(tail, 0.0, 1.0, piece);
  QuadratureResult r;
  r.value = h.value + t.value;
  r.abs_error_estimate = h.abs_error_estimate + t.abs_error_estimate;
  r.evaluations = h.evaluations + t.evaluations;
  r.converged = options.uniform_depth
                    ? true
                    : r.abs_error_estimate <= std::max(options.abs_tol, options.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace tracefn
