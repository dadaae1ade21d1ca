#pragma once

// Seeded random instances. The generator is SplitMix64, pinned so that a
// seed reproduces the same instances on every platform:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// uniform() = (next() >> 11) * 2^-53; normal() is Box-Muller on two uniforms.

#include <cstdint>

#include "tracefn/hermitian.hpp"

namespace tracefn {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();

 private:
  std::uint64_t state_;
};

/// Complex Gaussian entries (re, im independent standard normals).
CMatrix random_complex(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols);
/// (G + G*) / 2 rescaled to spectral norm `norm`.
HermitianMatrix random_hermitian(SplitMix64& rng, Eigen::Index n, double norm = 1.0);
/// Eigenvectors of a random Hermitian matrix.
CMatrix random_unitary(SplitMix64& rng, Eigen::Index n);
/// V diag(alpha) V* with V random unitary.
HermitianMatrix with_spectrum(const CMatrix& v, const RVector& alpha);
/// Random PSD matrix of the given rank with nonzero eigenvalues in [lo, hi].
HermitianMatrix random_psd(SplitMix64& rng, Eigen::Index n, Eigen::Index rank, double lo = 0.5,
                           double hi = 2.0);

/// A singular PSD A, a P with im(P) ⊆ im(A), and a direction B, all built in
/// one random eigenbasis V of A.
struct SingularInstance {
  HermitianMatrix a;
  HermitianMatrix p;
  HermitianMatrix b;
  CMatrix basis;
  Eigen::Index rank;
};

enum class DirectionKind {
  /// B = V [[B11, B12], [B21, B22]] V* with B22 ⪰ 0.5: A + tB stays PSD for
  /// small t > 0.
  admissible,
  /// B = V [[B11, 0], [0, 0]] V*: im(B) ⊆ im(A).
  range_only,
};

/// rank = n - corank; nonzero eigenvalues of A uniform in [0.5, 2], redrawn
/// until consecutive ones are at least `min_gap` apart.
SingularInstance random_singular_instance(SplitMix64& rng, Eigen::Index n, Eigen::Index corank,
                                          DirectionKind kind = DirectionKind::admissible,
                                          double min_gap = 0.0);

struct PerturbationInstance {
  HermitianMatrix a;
  HermitianMatrix b;
};

/// PSD A in a random eigenbasis with eigenvalue levels 0 < 0.4..0.7 apart,
/// one of them 0; with `degenerate` one positive level has multiplicity 2.
/// B is random Hermitian with spectral norm 1.
PerturbationInstance random_perturbation_instance(SplitMix64& rng, Eigen::Index n, bool degenerate);

/// A PSD matrix of unit trace and the given rank.
HermitianMatrix random_density(SplitMix64& rng, Eigen::Index n, Eigen::Index rank);

}  // namespace tracefn
