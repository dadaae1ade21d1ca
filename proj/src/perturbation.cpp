#include "tracefn/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tracefn/errors.hpp"
#include "tracefn/finite_difference.hpp"

namespace tracefn {

std::vector<double> branch_grid(int last) {
  std::vector<double> grid;
  for (int k = 0; k <= last; ++k) grid.push_back(std::ldexp(1e-2, -k));
  return grid;
}

std::vector<double> default_branch_grid() { return branch_grid(12); }

std::vector<double> refine_grid(const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(t / 2.0);
  return out;
}

SpectralDecomposition rebase_degenerate(const SpectralDecomposition& a, const HermitianMatrix& b,
                                        double degeneracy_tol) {
  const Eigen::Index n = a.dim();
  const double tol = degeneracy_tol * (1.0 + a.spectral_norm());
  CMatrix v = a.eigenvectors();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && a.eigenvalue(end - 1) - a.eigenvalue(end) <= tol) ++end;
    if (end - start > 1) {
      const CMatrix block = v.middleCols(start, end - start);
      const auto compressed = eig(HermitianMatrix::symmetrized(block.adjoint() * b.matrix() * block));
      v.middleCols(start, end - start) = block * compressed.eigenvectors();
    }
    start = end;
  }
  return SpectralDecomposition(a.eigenvalues(), std::move(v), a.zero_threshold());
}

namespace {

/// Greedy assignment by overlap: result[row] = column.
std::vector<Eigen::Index> match_by_overlap(const RMatrix& overlap, double ambiguity_gap,
                                           double t) {
  const Eigen::Index n = overlap.rows();
  for (Eigen::Index row = 0; row < n; ++row) {
    RVector sorted = overlap.row(row).transpose();
    std::sort(sorted.data(), sorted.data() + n, std::greater<>());
    if (n > 1 && sorted(0) - sorted(1) < ambiguity_gap) {
      std::ostringstream os;
      os << "ambiguous branch match near t = " << t << " (overlaps " << sorted(0) << " and "
         << sorted(1) << "); use a finer grid";
      throw TrackingError(os.str());
    }
  }
  std::vector<Eigen::Index> result(static_cast<std::size_t>(n), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(n), false);
  std::vector<bool> col_used(static_cast<std::size_t>(n), false);
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index br = 0, bc = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (row_used[static_cast<std::size_t>(r)]) continue;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (col_used[static_cast<std::size_t>(c)]) continue;
        if (overlap(r, c) > best) {
          best = overlap(r, c);
          br = r;
          bc = c;
        }
      }
    }
    row_used[static_cast<std::size_t>(br)] = true;
    col_used[static_cast<std::size_t>(bc)] = true;
    result[static_cast<std::size_t>(br)] = bc;
  }
  return result;
}

Complex unit_phase(Complex z) {
  const double m = std::abs(z);
  return m == 0.0 ? Complex(1.0) : z / m;
}

/// Extrapolated derivative at 0 of a sampled function with known value at 0,
/// from samples[first .. first + terms].
double derivative_at_zero(const std::vector<double>& grid, const std::vector<double>& samples,
                          double value0, int terms, std::size_t first) {
  std::vector<long double> steps;
  std::vector<long double> quotients;
  for (std::size_t k = first; k < first + static_cast<std::size_t>(terms) + 1; ++k) {
    steps.push_back(grid[k]);
    quotients.push_back((static_cast<long double>(samples[k]) - value0) / grid[k]);
  }
  const auto basis = analytic_error_basis(terms);
  return static_cast<double>(extrapolate_to_zero(steps, quotients, basis));
}

std::vector<double> row_samples(const RMatrix& m, Eigen::Index row) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.cols(); ++k) out[static_cast<std::size_t>(k)] = m(row, k);
  return out;
}

}  // namespace

BranchTrack track_branches(const HermitianMatrix& a, const HermitianMatrix& b,
                           const HermitianMatrix& p, const std::vector<double>& t_grid,
                           const TrackOptions& options) {
  if (a.dim() != b.dim() || a.dim() != p.dim()) throw DimensionError("track_branches: dimension mismatch");
  if (t_grid.size() < static_cast<std::size_t>(options.richardson_terms) + 1)
    throw std::invalid_argument("track_branches: grid too short for the requested extrapolation");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0) || (k > 0 && !(t_grid[k] < t_grid[k - 1])))
      throw std::invalid_argument("track_branches: t grid must be positive and strictly decreasing");
  }

  const Eigen::Index n = a.dim();
  const auto k_count = static_cast<Eigen::Index>(t_grid.size());
  const auto da = eig(a, options.policy);

  BranchTrack track{.t_grid = t_grid,
                    .reference = rebase_degenerate(da, b, options.degeneracy_tol),
                    .lambda = RMatrix(n, k_count),
                    .vectors = {},
                    .lambda_prime0 = RVector(n),
                    .h_samples = RMatrix(n, k_count),
                    .h_at_zero = RVector(n),
                    .kernel_branches = {},
                    .richardson_terms = options.richardson_terms,
                    .degeneracy_tol = options.degeneracy_tol};
  track.a_norm = da.spectral_norm();
  track.b_norm = spectral_norm(b);
  track.p_norm = spectral_norm(p);

  // Column c of `current` holds the running branch c.
  CMatrix current;
  RVector current_values;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double t = t_grid[static_cast<std::size_t>(k)];
    const auto d = eig(a + t * b, options.policy);
    if (k == 0) {
      current = d.eigenvectors();
      current_values = d.eigenvalues();
    } else {
      const RMatrix overlap = (current.adjoint() * d.eigenvectors()).cwiseAbs();
      const auto match = match_by_overlap(overlap, options.ambiguity_gap, t);
      CMatrix next(n, n);
      RVector next_values(n);
      for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index col = match[static_cast<std::size_t>(c)];
        CVector w = d.eigenvector(col);
        const Complex ov = current.col(c).dot(w);
        if (std::abs(ov) < options.continuity_min) {
          std::ostringstream os;
          os << "branch continuity lost near t = " << t << " (overlap " << std::abs(ov)
             << "); use a finer grid";
          throw TrackingError(os.str());
        }
        next.col(c) = w * std::conj(unit_phase(ov));
        next_values(c) = d.eigenvalue(col);
      }
      current = std::move(next);
      current_values = std::move(next_values);
    }
    track.vectors.push_back(current);
    track.lambda.col(k) = current_values;
  }

  // Relabel running branches by the reference eigenvector they approach.
  const CMatrix& v = track.reference.eigenvectors();
  const RMatrix final_overlap = (v.adjoint() * current).cwiseAbs();
  const auto to_branch = match_by_overlap(final_overlap, options.ambiguity_gap, t_grid.back());
  RMatrix lambda(n, k_count);
  std::vector<CMatrix> vectors(static_cast<std::size_t>(k_count), CMatrix(n, n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = to_branch[static_cast<std::size_t>(i)];
    const Complex gauge = std::conj(unit_phase(v.col(i).dot(current.col(c))));
    lambda.row(i) = track.lambda.row(c);
    for (Eigen::Index k = 0; k < k_count; ++k)
      vectors[static_cast<std::size_t>(k)].col(i) = track.vectors[static_cast<std::size_t>(k)].col(c) * gauge;
  }
  track.lambda = std::move(lambda);
  track.vectors = std::move(vectors);

  // Under im(P) ⊆ im(A), P is evaluated through its compression to the range
  // of A: the O(eps) kernel residue of a computed P would otherwise swamp
  // h_i(t) = O(t^2) on kernel branches.
  const Eigen::Index r = track.reference.rank();
  const bool compress = r < n && image_contained(p, track.reference);
  const CMatrix basis = compress ? CMatrix(v.leftCols(r)) : CMatrix::Identity(n, n);
  const CMatrix p_small = basis.adjoint() * p.matrix() * basis;
  const auto h_of = [&](const auto& u) {
    const CVector c = basis.adjoint() * u;
    return c.dot(p_small * c).real();
  };
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const CMatrix& u = track.vectors[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i) track.h_samples(i, k) = h_of(u.col(i));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    track.h_at_zero(i) = h_of(v.col(i));
    track.lambda_prime0(i) = derivative_at_zero(t_grid, row_samples(track.lambda, i),
                                                track.reference.eigenvalue(i), options.richardson_terms, 0);
  }
  for (Eigen::Index i = r; i < n; ++i) track.kernel_branches.push_back(i);
  return track;
}

Prop1Report check_prop1(const BranchTrack& track, const HermitianMatrix& b) {
  const Eigen::Index n = track.reference.dim();
  const CMatrix& v = track.reference.eigenvectors();
  const CMatrix bt = v.adjoint() * b.matrix() * v;
  const int terms = track.richardson_terms;
  const std::size_t used = static_cast<std::size_t>(terms) + 1;

  // coeff[k](j, i) = <v_j, u_i(t_k)> in the gauge where <v_i, u_i(t_k)> > 0.
  std::vector<CMatrix> coeff;
  for (std::size_t k = 0; k < used; ++k) {
    CMatrix c = v.adjoint() * track.vectors[k];
    for (Eigen::Index i = 0; i < n; ++i) c.col(i) *= std::conj(unit_phase(c(i, i)));
    coeff.push_back(std::move(c));
  }

  // d(j, i) = <v_j, u_i'(0)>.
  CMatrix d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<double> re(used), im(used);
      for (std::size_t k = 0; k < used; ++k) {
        re[k] = coeff[k](j, i).real();
        im[k] = coeff[k](j, i).imag();
      }
      const double base = (i == j) ? 1.0 : 0.0;
      d(j, i) = Complex(derivative_at_zero(track.t_grid, re, base, terms, 0),
                        derivative_at_zero(track.t_grid, im, 0.0, terms, 0));
    }
  }

  Prop1Report report;
  const double tol = track.degeneracy_tol * (1.0 + track.a_norm);
  for (Eigen::Index i = 0; i < n; ++i) {
    report.max_err_i = std::max(report.max_err_i, std::abs(track.lambda_prime0(i) - bt(i, i).real()));
    report.max_err_iii = std::max(report.max_err_iii, std::abs(2.0 * d(i, i).real()));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gap = track.reference.eigenvalue(j) - track.reference.eigenvalue(i);
      if (std::abs(gap) <= tol) continue;
      report.max_err_ii = std::max(report.max_err_ii, std::abs(gap * d(i, j) - bt(i, j)));
    }
  }
  report.tolerance = 1e-4 * (1.0 + track.b_norm);
  report.passed = report.max_err_i <= report.tolerance && report.max_err_ii <= report.tolerance &&
                  report.max_err_iii <= report.tolerance;
  return report;
}

double refinement_ratio(const Prop1Report& coarse, const Prop1Report& fine, double noise_floor) {
  double ratio = 0.0;
  const std::pair<double, double> pairs[] = {{coarse.max_err_i, fine.max_err_i},
                                             {coarse.max_err_ii, fine.max_err_ii},
                                             {coarse.max_err_iii, fine.max_err_iii}};
  for (const auto& [c, f] : pairs)
    if (c > noise_floor) ratio = std::max(ratio, f / c);
  return ratio;
}

const char* to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::pass: return "pass";
    case LimitVerdict::fail: return "fail";
    case LimitVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

bool monotone_tail(const std::vector<double>& magnitudes, std::size_t count) {
  if (magnitudes.size() < count) return false;
  for (std::size_t k = magnitudes.size() - count + 1; k < magnitudes.size(); ++k)
    if (!(magnitudes[k] < magnitudes[k - 1])) return false;
  return true;
}

}  // namespace

KernelLimitReport check_kernel_limit(const BranchTrack& track, const ScalarFunction& f) {
  KernelLimitReport report;
  const auto& grid = track.t_grid;
  const std::size_t k_count = grid.size();
  const int terms = track.richardson_terms;
  const std::size_t tail_first = k_count - static_cast<std::size_t>(terms) - 1;
  const bool inverse_mode = f.is_power(-1.0);

  bool any_fail = false;
  bool any_inconclusive = false;
  for (Eigen::Index i : track.kernel_branches) {
    KernelBranchLimit b;
    b.branch = i;
    b.lambda_prime0 = track.lambda_prime0(i);
    b.mode = inverse_mode ? KernelLimitMode::inverse_ratio : KernelLimitMode::remainder;
    const auto h = row_samples(track.h_samples, i);
    // h_i'(0) from the finest samples.
    b.h0 = track.h_at_zero(i);
    b.h_prime0 = derivative_at_zero(grid, h, 0.0, terms, tail_first);

    bool positive = true;
    for (std::size_t k = 0; k < k_count; ++k) positive = positive && track.lambda(i, static_cast<Eigen::Index>(k)) > 0.0;
    if (b.lambda_prime0 <= 1e-10 || !positive) {
      b.verdict = LimitVerdict::inconclusive;
      any_inconclusive = true;
      report.branches.push_back(std::move(b));
      continue;
    }

    std::vector<double> distance;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double t = grid[k];
      const double lam = track.lambda(i, static_cast<Eigen::Index>(k));
      const double s = inverse_mode ? h[k] / (t * lam) : f(lam) * h[k] / t;
      b.samples.push_back(s);
    }
    double bound = 0.0;
    if (inverse_mode) {
      // h_i(t) / t^2 -> h_i''(0) / 2.
      std::vector<double> scaled(k_count);
      for (std::size_t k = 0; k < k_count; ++k) scaled[k] = h[k] / (grid[k] * grid[k]);
      std::vector<long double> steps, values;
      for (std::size_t k = tail_first; k < k_count; ++k) {
        steps.push_back(grid[k]);
        values.push_back(scaled[k]);
      }
      const auto basis = analytic_error_basis(terms);
      const double half_h2 = static_cast<double>(extrapolate_to_zero(steps, values, basis));
      b.target = half_h2 / b.lambda_prime0;
      for (double s : b.samples) distance.push_back(std::abs(s - b.target));
      bound = 1e-4 * (1.0 + std::abs(b.target));
    } else {
      for (double s : b.samples) distance.push_back(std::abs(s));
      bound = 1e-6 * (1.0 + track.p_norm);
    }
    const bool ok = monotone_tail(distance, 6) && distance.back() <= bound;
    b.verdict = ok ? LimitVerdict::pass : LimitVerdict::fail;
    any_fail = any_fail || !ok;
    report.branches.push_back(std::move(b));
  }
  report.verdict = any_fail ? LimitVerdict::fail
                   : any_inconclusive ? LimitVerdict::inconclusive
                                      : LimitVerdict::pass;
  return report;
}

}  // namespace tracefn
