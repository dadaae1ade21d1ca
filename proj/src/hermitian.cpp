#include "tracefn/hermitian.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "tracefn/errors.hpp"
#include "tracefn/jacobi.hpp"

namespace tracefn {

HermitianMatrix::HermitianMatrix(CMatrix m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << "Hermitian matrix must be square with dim >= 1, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  if (!m.allFinite()) throw DomainError("Hermitian matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > kHermitianTolerance * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |m_ij - conj(m_ji)| = " << deviation;
    throw DomainError(os.str());
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianMatrix HermitianMatrix::from_real(const RMatrix& m) {
  return HermitianMatrix(m.cast<Complex>());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  if (n < 1) throw DimensionError("identity dimension must be >= 1");
  return HermitianMatrix(CMatrix::Identity(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  if (n < 1) throw DimensionError("zero matrix dimension must be >= 1");
  return HermitianMatrix(CMatrix::Zero(n, n), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  if (d.size() < 1) throw DimensionError("diagonal matrix needs at least one entry");
  return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix(), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> d) {
  RVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return diagonal(v);
}

HermitianMatrix HermitianMatrix::symmetrized(const CMatrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) throw DimensionError("symmetrized: matrix must be square");
  return HermitianMatrix((m + m.adjoint()) / 2.0, Trusted{});
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("dimension mismatch in matrix sum");
  return HermitianMatrix(a.m_ + b.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("dimension mismatch in matrix difference");
  return HermitianMatrix(a.m_ - b.m_, HermitianMatrix::Trusted{});
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.m_, HermitianMatrix::Trusted{});
}

double ThresholdPolicy::resolve(Eigen::Index n, double max_abs_eigenvalue) const {
  if (absolute) return *absolute;
  return static_cast<double>(n) * max_abs_eigenvalue * relative;
}

ThresholdPolicy ThresholdPolicy::from_environment() {
  ThresholdPolicy policy;
  if (const char* env = std::getenv("TRACEFN_ZERO_TOL")) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(value) && value >= 0.0) policy.absolute = value;
  }
  return policy;
}

SpectralDecomposition::SpectralDecomposition(RVector eigenvalues, CMatrix eigenvectors,
                                             double zero_threshold)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      zero_threshold_(zero_threshold),
      rank_(0) {
  if (eigenvectors_.rows() != eigenvalues_.size() || eigenvectors_.cols() != eigenvalues_.size())
    throw DimensionError("eigenvector matrix does not match eigenvalue count");
  while (rank_ < eigenvalues_.size() && eigenvalues_(rank_) > zero_threshold_) ++rank_;
}

double SpectralDecomposition::clamped_eigenvalue(Eigen::Index i) const {
  const double a = eigenvalues_(i);
  return std::abs(a) <= zero_threshold_ ? 0.0 : a;
}

double SpectralDecomposition::spectral_norm() const {
  return eigenvalues_.cwiseAbs().maxCoeff();
}

CMatrix SpectralDecomposition::kernel_projector() const {
  const CMatrix k = kernel_basis();
  return k * k.adjoint();
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
}

SpectralDecomposition eig(const HermitianMatrix& a, const EigOptions& options) {
  auto result = detail::jacobi_hermitian<double>(a.matrix(), options.rel_tol, options.max_sweeps);
  if (!result.converged) {
    std::ostringstream os;
    os << "Jacobi eigensolver did not converge after " << result.sweeps
       << " sweeps; off-diagonal norm " << result.off_norm;
    throw ConvergenceError(os.str(), result.off_norm);
  }
  const double max_abs = result.values.size() ? result.values.cwiseAbs().maxCoeff() : 0.0;
  const double threshold = options.threshold.resolve(a.dim(), max_abs);
  return SpectralDecomposition(std::move(result.values), std::move(result.vectors), threshold);
}

SpectralDecomposition eig(const HermitianMatrix& a, const ThresholdPolicy& policy) {
  EigOptions options;
  options.threshold = policy;
  return eig(a, options);
}

double spectral_norm(const HermitianMatrix& a) { return eig(a).spectral_norm(); }

double kernel_compression_norm(const HermitianMatrix& p, const SpectralDecomposition& a) {
  if (p.dim() != a.dim()) throw DimensionError("image_contained: dimension mismatch");
  if (a.rank() == a.dim()) return 0.0;
  const CMatrix k = a.kernel_basis();
  // ||Π⊥ P Π⊥||_F equals the Frobenius norm of the compression K* P K.
  return (k.adjoint() * p.matrix() * k).norm();
}

bool image_contained(const HermitianMatrix& p, const SpectralDecomposition& a, double ctol) {
  return kernel_compression_norm(p, a) <= ctol * (1.0 + p.frobenius_norm());
}

PsdCheckResult psd_check(const HermitianMatrix& a, double threshold) {
  const auto d = eig(a);
  return {d.min_eigenvalue() >= -threshold, d.min_eigenvalue(), threshold};
}

PsdCheckResult psd_check(const SpectralDecomposition& a) {
  return {a.min_eigenvalue() >= -a.zero_threshold(), a.min_eigenvalue(), a.zero_threshold()};
}

std::vector<double> default_probe_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(std::pow(10.0, -k));
  return grid;
}

AdmissibilityReport direction_admissible(const SpectralDecomposition& a, const HermitianMatrix& b,
                                         const std::vector<double>& t_probe) {
  if (b.dim() != a.dim()) throw DimensionError("direction_admissible: dimension mismatch");
  AdmissibilityReport report;
  const HermitianMatrix a_mat = HermitianMatrix::symmetrized(a.reconstruct());
  const double a_norm = a.spectral_norm();
  const double b_norm = spectral_norm(b);
  report.admissible = true;
  for (double t : t_probe) {
    const double lam = eig(a_mat + t * b).min_eigenvalue();
    const bool ok = lam >= -1e-10 * (1.0 + a_norm + t * b_norm);
    report.probes.push_back({t, lam, ok});
    report.admissible = report.admissible && ok;
  }
  if (a.rank() < a.dim()) {
    const CMatrix k = a.kernel_basis();
    const auto compressed = eig(HermitianMatrix::symmetrized(k.adjoint() * b.matrix() * k));
    report.kernel_compression_min = compressed.min_eigenvalue();
    report.kernel_compression_psd = report.kernel_compression_min >= -1e-10 * (1.0 + b_norm);
  }
  return report;
}

}  // namespace tracefn
