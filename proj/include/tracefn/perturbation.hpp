#pragma once

// Numerical tracking of the eigenvalue / eigenvector branches of A + tB as
// t -> 0+, and checks of the first-order perturbation identities
//
//   (i)   λ_i'(0) = <v_i, B v_i>
//   (ii)  (α_j - α_i) <v_i, u_j'(0)> = <v_i, B v_j>      (α_i ≠ α_j)
//   (iii) <u_j'(0), v_j> + <v_j, u_j'(0)> = 0
//
// and of the vanishing kernel-branch remainder f(λ_i(t)) h_i(t) / t with
// h_i(t) = <u_i(t), P u_i(t)>.

#include <vector>

#include "tracefn/hermitian.hpp"
#include "tracefn/scalar_function.hpp"

namespace tracefn {

/// {1e-2 · 2^-k : k = 0..12}.
std::vector<double> default_branch_grid();
/// {1e-2 · 2^-k : k = 0..last}.
std::vector<double> branch_grid(int last);
/// Every step halved.
std::vector<double> refine_grid(const std::vector<double>& grid);

struct TrackOptions {
  /// Error terms eliminated when extrapolating derivatives at t = 0.
  int richardson_terms = 2;
  /// Two overlaps closer than this make a match ambiguous.
  double ambiguity_gap = 1e-3;
  /// Minimum |<u_i(t_k), u_i(t_k+1)>| between consecutive grid points.
  double continuity_min = 0.9;
  /// Eigenvalues of A closer than this (times 1 + ||A||) form one eigenspace.
  double degeneracy_tol = 1e-8;
  ThresholdPolicy policy;
};

/// Re-bases every degenerate eigenspace of A so that it diagonalizes the
/// compression of B (first-order degenerate perturbation theory). Within a
/// cluster, vectors are ordered by descending compressed-B eigenvalue.
SpectralDecomposition rebase_degenerate(const SpectralDecomposition& a, const HermitianMatrix& b,
                                        double degeneracy_tol = 1e-8);

struct BranchTrack {
  std::vector<double> t_grid;
  /// α_i and the re-based reference eigenvectors v_i at t = 0.
  SpectralDecomposition reference;
  /// lambda(i, k) = λ_i(t_k).
  RMatrix lambda;
  /// vectors[k].col(i) = u_i(t_k); consecutive samples of a branch have real
  /// positive overlap, and <v_i, u_i(t_min)> is real positive.
  std::vector<CMatrix> vectors;
  RVector lambda_prime0;
  /// h(i, k) = <u_i(t_k), P u_i(t_k)> for every branch.
  RMatrix h_samples;
  /// <v_i, P v_i>.
  RVector h_at_zero;
  std::vector<Eigen::Index> kernel_branches;
  double a_norm = 0.0;
  double b_norm = 0.0;
  double p_norm = 0.0;
  int richardson_terms = 3;
  double degeneracy_tol = 1e-8;
};

/// Follows the eigenpairs of A + tB over a decreasing grid of positive t,
/// matching branches greedily by eigenvector overlap and finally against the
/// re-based eigenbasis of A. Throws TrackingError on ambiguous matches or a
/// continuity violation.
BranchTrack track_branches(const HermitianMatrix& a, const HermitianMatrix& b,
                           const HermitianMatrix& p,
                           const std::vector<double>& t_grid = default_branch_grid(),
                           const TrackOptions& options = {});

struct Prop1Report {
  double max_err_i = 0.0;
  double max_err_ii = 0.0;
  double max_err_iii = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Estimates λ_i'(0) and u_j'(0) by Richardson extrapolation of one-sided
/// quotients on the leading grid points and reports the deviations from the
/// three identities. Passes when all are <= 1e-4 (1 + ||B||).
Prop1Report check_prop1(const BranchTrack& track, const HermitianMatrix& b);

/// Largest fine / coarse ratio over the three errors, ignoring errors whose
/// coarse value is below `noise_floor` (already at round-off level). 0 when
/// every error is below the floor.
double refinement_ratio(const Prop1Report& coarse, const Prop1Report& fine, double noise_floor = 1e-10);

enum class LimitVerdict { pass, fail, inconclusive };
const char* to_string(LimitVerdict v);

enum class KernelLimitMode {
  /// f(λ_i(t)) h_i(t) / t -> 0.
  remainder,
  /// f = x^-1: h_i(t) / (t λ_i(t)) -> h_i''(0) / (2 λ_i'(0)).
  inverse_ratio,
};

struct KernelBranchLimit {
  Eigen::Index branch = 0;
  double lambda_prime0 = 0.0;
  double h0 = 0.0;
  double h_prime0 = 0.0;
  KernelLimitMode mode = KernelLimitMode::remainder;
  std::vector<double> samples;
  double target = 0.0;
  LimitVerdict verdict = LimitVerdict::inconclusive;
};

struct KernelLimitReport {
  std::vector<KernelBranchLimit> branches;
  LimitVerdict verdict = LimitVerdict::inconclusive;
};

/// Samples the kernel-branch remainder over the grid. A branch passes when
/// the sequence (or its distance to the target) decreases monotonically over
/// the last 6 grid points and ends below 1e-6 (1 + ||P||) (remainder mode) or
/// 1e-4 (1 + |target|) (inverse mode). Branches with λ_i'(0) <= 1e-10 are
/// inconclusive.
KernelLimitReport check_kernel_limit(const BranchTrack& track, const ScalarFunction& f);

}  // namespace tracefn
