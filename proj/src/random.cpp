#include "tracefn/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace tracefn {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SplitMix64::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

double SplitMix64::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMatrix random_complex(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return g;
}

HermitianMatrix random_hermitian(SplitMix64& rng, Eigen::Index n, double norm) {
  const CMatrix g = random_complex(rng, n, n);
  const auto h = HermitianMatrix::symmetrized(0.5 * (g + g.adjoint()));
  const double s = spectral_norm(h);
  return s > 0.0 ? (norm / s) * h : h;
}

CMatrix random_unitary(SplitMix64& rng, Eigen::Index n) { return eig(random_hermitian(rng, n)).eigenvectors(); }

HermitianMatrix with_spectrum(const CMatrix& v, const RVector& alpha) {
  return HermitianMatrix::symmetrized(v * alpha.cast<Complex>().asDiagonal() * v.adjoint());
}

HermitianMatrix random_psd(SplitMix64& rng, Eigen::Index n, Eigen::Index rank, double lo, double hi) {
  RVector alpha = RVector::Zero(n);
  for (Eigen::Index i = 0; i < rank; ++i) alpha(i) = rng.uniform(lo, hi);
  return with_spectrum(random_unitary(rng, n), alpha);
}

namespace {

/// Random block with spectral norm at most `norm`.
CMatrix bounded_block(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols, double norm) {
  const CMatrix g = random_complex(rng, rows, cols);
  const double s = Eigen::JacobiSVD<CMatrix>(g).singularValues()(0);
  return g * (norm * rng.uniform(0.2, 1.0) / s);
}

}  // namespace

SingularInstance random_singular_instance(SplitMix64& rng, Eigen::Index n, Eigen::Index corank,
                                          DirectionKind kind, double min_gap) {
  if (corank < 1 || corank >= n) throw std::invalid_argument("random_singular_instance: need 1 <= corank < n");
  const Eigen::Index r = n - corank;
  const CMatrix v = random_unitary(rng, n);

  if (min_gap * static_cast<double>(r) > 1.5)
    throw std::invalid_argument("random_singular_instance: min_gap too large for [0.5, 2]");
  RVector alpha = RVector::Zero(n);
  for (bool separated = false; !separated;) {
    for (Eigen::Index i = 0; i < r; ++i) alpha(i) = rng.uniform(0.5, 2.0);
    std::sort(alpha.data(), alpha.data() + r, std::greater<>());
    separated = true;
    for (Eigen::Index i = 0; i + 1 < r; ++i) separated = separated && alpha(i) - alpha(i + 1) >= min_gap;
  }

  const CMatrix w = random_complex(rng, r, r);
  CMatrix pt = CMatrix::Zero(n, n);
  pt.topLeftCorner(r, r) = w * w.adjoint() / static_cast<double>(r);

  CMatrix bt = CMatrix::Zero(n, n);
  const CMatrix b11 = bounded_block(rng, r, r, 1.0);
  bt.topLeftCorner(r, r) = 0.5 * (b11 + b11.adjoint());
  if (kind == DirectionKind::admissible) {
    const CMatrix b12 = bounded_block(rng, r, corank, 1.0);
    bt.topRightCorner(r, corank) = b12;
    bt.bottomLeftCorner(corank, r) = b12.adjoint();
    const CMatrix g = random_complex(rng, corank, corank);
    bt.bottomRightCorner(corank, corank) =
        g * g.adjoint() / static_cast<double>(corank) + 0.5 * CMatrix::Identity(corank, corank);
  }

  return {with_spectrum(v, alpha), HermitianMatrix::symmetrized(v * pt * v.adjoint()),
          HermitianMatrix::symmetrized(v * bt * v.adjoint()), v, r};
}

PerturbationInstance random_perturbation_instance(SplitMix64& rng, Eigen::Index n, bool degenerate) {
  if (n < (degenerate ? 3 : 2)) throw std::invalid_argument("random_perturbation_instance: n too small");
  RVector alpha(n);
  alpha(n - 1) = 0.0;
  for (Eigen::Index i = n - 2; i >= 0; --i) alpha(i) = alpha(i + 1) + rng.uniform(0.4, 0.7);
  if (degenerate) {
    const auto i = static_cast<Eigen::Index>(rng.uniform_int(0, static_cast<int>(n) - 3));
    alpha(i) = alpha(i + 1);
  }
  const CMatrix v = random_unitary(rng, n);
  return {with_spectrum(v, alpha), random_hermitian(rng, n)};
}

HermitianMatrix random_density(SplitMix64& rng, Eigen::Index n, Eigen::Index rank) {
  const CMatrix v = random_unitary(rng, n);
  const CMatrix g = random_complex(rng, rank, rank);
  CMatrix m = CMatrix::Zero(n, n);
  m.topLeftCorner(rank, rank) = g * g.adjoint();
  m = v * m * v.adjoint();
  m /= m.trace().real();
  return HermitianMatrix::symmetrized(m);
}

}  // namespace tracefn
