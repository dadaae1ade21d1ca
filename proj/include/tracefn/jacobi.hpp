#pragma once

// Cyclic Jacobi eigensolver for dense Hermitian matrices, templated on the
// real scalar so the same routine serves double and long double callers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace tracefn::detail {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <class Real>
struct JacobiResult {
  RVector<Real> values;      // descending
  CMatrix<Real> vectors;     // columns match `values`
  int sweeps = 0;
  Real off_norm = 0;         // off-diagonal Frobenius norm at exit
  bool converged = false;
};

template <class Real>
Real off_diagonal_norm(const CMatrix<Real>& a) {
  Real sum = 0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

/// Diagonalizes the Hermitian matrix `a` by complex Givens rotations applied
/// in row-cyclic order. Stops once the off-diagonal Frobenius norm is at most
/// `rel_tol * ||a||_F` or after `max_sweeps` sweeps. Eigenvalues are returned
/// in descending order; ties keep the order they had on the diagonal.
template <class Real>
JacobiResult<Real> jacobi_hermitian(CMatrix<Real> a, Real rel_tol, int max_sweeps) {
  using Complex = std::complex<Real>;
  const Eigen::Index n = a.rows();
  CMatrix<Real> v = CMatrix<Real>::Identity(n, n);
  const Real scale = a.norm();
  const Real target = rel_tol * scale;

  JacobiResult<Real> out;
  Real off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > target && sweep < max_sweeps) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const Real mag = std::abs(apq);
        if (mag == Real(0)) continue;
        const Complex phase = apq / mag;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        // Real symmetric 2x2 Schur step on [[app, mag], [mag, aqq]].
        const Real tau = (aqq - app) / (2 * mag);
        const Real t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::hypot(Real(1), tau));
        const Real c = 1 / std::sqrt(1 + t * t);
        const Real s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = Complex(0);
        a(q, p) = Complex(0);
        a(p, p) = Complex(a(p, p).real());
        a(q, q) = Complex(a(q, q).real());
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  out.off_norm = off;
  out.converged = off <= target;
  return out;
}

}  // namespace tracefn::detail
