#pragma once

// Oracles for the tests that do not go through the library's own
// eigensolver: matrix functions via Eigen::SelfAdjointEigenSolver.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "tracefn/hermitian.hpp"

namespace tracefn::testing {

inline CMatrix eigen_matrix_function(const HermitianMatrix& a, const std::function<double(double)>& f) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  const RVector fv = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * fv.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

inline RVector eigen_eigenvalues_desc(const HermitianMatrix& a) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

inline double frobenius_relative(const CMatrix& x, const CMatrix& reference) {
  return (x - reference).norm() / reference.norm();
}

}  // namespace tracefn::testing
