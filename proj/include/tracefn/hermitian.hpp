#pragma once

// Dense Hermitian matrices, their spectral decomposition, and the numerical
// rank / image / positivity tests the rest of the library is built on.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace tracefn {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Max entrywise deviation |m_ij - conj(m_ji)| tolerated at construction,
/// relative to max(1, max |m_ij|).
inline constexpr double kHermitianTolerance = 1e-12;

/// An n x n complex matrix equal to its conjugate transpose.
///
/// Construction validates the Hermitian symmetry and then stores the exact
/// symmetrization (M + M*)/2, so downstream code may rely on exact symmetry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix m);

  static HermitianMatrix from_real(const RMatrix& m);
  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);
  static HermitianMatrix diagonal(const RVector& d);
  static HermitianMatrix diagonal(std::initializer_list<double> d);
  /// Symmetrizes without validating. For matrices produced internally by
  /// unitary similarity, where the deviation is pure round-off.
  static HermitianMatrix symmetrized(const CMatrix& m);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace().real(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}
  CMatrix m_;
};

/// How the "numerically zero" eigenvalue cutoff is chosen.
struct ThresholdPolicy {
  /// Fixed absolute cutoff; overrides the relative rule when set.
  std::optional<double> absolute;
  /// Default cutoff is n * max|alpha_i| * relative.
  double relative = 1e-12;

  double resolve(Eigen::Index n, double max_abs_eigenvalue) const;

  /// Default policy, overridden by the TRACEFN_ZERO_TOL environment variable
  /// (an absolute cutoff) when it is set to a valid non-negative number.
  static ThresholdPolicy from_environment();
};

/// A = V diag(alpha) V*, eigenvalues descending, with the numerical rank r:
/// alpha[0..r) exceed the zero threshold.
class SpectralDecomposition {
 public:
  SpectralDecomposition(RVector eigenvalues, CMatrix eigenvectors, double zero_threshold);

  Eigen::Index dim() const { return eigenvalues_.size(); }
  const RVector& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenvectors() const { return eigenvectors_; }
  double eigenvalue(Eigen::Index i) const { return eigenvalues_(i); }
  CVector eigenvector(Eigen::Index i) const { return eigenvectors_.col(i); }
  Eigen::Index rank() const { return rank_; }
  double zero_threshold() const { return zero_threshold_; }
  bool positive_definite() const { return rank_ == dim(); }
  /// Eigenvalue with the zero band clamped to exactly 0.
  double clamped_eigenvalue(Eigen::Index i) const;
  double min_eigenvalue() const { return eigenvalues_(dim() - 1); }
  /// Spectral norm max|alpha_i|.
  double spectral_norm() const;

  /// Columns r..n of V: an orthonormal basis of the numerical kernel.
  CMatrix kernel_basis() const { return eigenvectors_.rightCols(dim() - rank_); }
  CMatrix range_basis() const { return eigenvectors_.leftCols(rank_); }
  /// Orthogonal projector onto the numerical kernel.
  CMatrix kernel_projector() const;
  CMatrix reconstruct() const;

 private:
  RVector eigenvalues_;
  CMatrix eigenvectors_;
  double zero_threshold_;
  Eigen::Index rank_;
};

struct EigOptions {
  ThresholdPolicy threshold;
  double rel_tol = 1e-13;
  int max_sweeps = 100;
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Deterministic for
/// a fixed input. Throws ConvergenceError if the sweep cap is reached.
SpectralDecomposition eig(const HermitianMatrix& a, const EigOptions& options = {});
SpectralDecomposition eig(const HermitianMatrix& a, const ThresholdPolicy& policy);

double spectral_norm(const HermitianMatrix& a);

/// im(P) ⊆ im(A), tested as ||Π⊥ P Π⊥||_F <= ctol (1 + ||P||_F) with Π⊥ the
/// projector onto A's numerical kernel.
bool image_contained(const HermitianMatrix& p, const SpectralDecomposition& a,
                     double ctol = 1e-10);
/// The kernel-compression norm ||Π⊥ P Π⊥||_F used by image_contained.
double kernel_compression_norm(const HermitianMatrix& p, const SpectralDecomposition& a);

struct PsdCheckResult {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double threshold_used = 0.0;
};

PsdCheckResult psd_check(const HermitianMatrix& a, double threshold);
/// Uses the decomposition's zero threshold as the tolerance band.
PsdCheckResult psd_check(const SpectralDecomposition& a);

struct AdmissibilityProbe {
  double t = 0.0;
  double min_eigenvalue = 0.0;
  bool passed = false;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityProbe> probes;
  /// Every probe t has lambda_min(A + tB) >= -1e-10 (1 + ||A|| + t||B||).
  bool admissible = false;
  /// Smallest eigenvalue of the kernel compression Π⊥ B Π⊥ (0 if A is PD).
  double kernel_compression_min = 0.0;
  /// The necessary condition Π⊥ B Π⊥ ⪰ 0.
  bool kernel_compression_psd = true;
};

/// 8 points, geometric from 1e-1 down to 1e-8.
std::vector<double> default_probe_grid();

AdmissibilityReport direction_admissible(const SpectralDecomposition& a, const HermitianMatrix& b,
                                         const std::vector<double>& t_probe = default_probe_grid());

}  // namespace tracefn
