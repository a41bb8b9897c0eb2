// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_RANDOM_HPP
#define QCHAN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qchan/matrix.hpp"

namespace qchan {

// Deterministic generator: the Gaussian sampling is hand-rolled Box-Muller
// on top of mt19937_64, so streams are bit-identical across standard
// library implementations. Callers own their generator; nothing is global.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  // Derive an independent stream, e.g. one per trial or per start index.
  // Pure function of (seed, stream), so parallel callers can fan out
  // without touching this generator's state.
  Rng derive(std::uint64_t stream) const {
    std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  double uniform() {  // in (0, 1]
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard complex normal CN(0,1): Re and Im are N(0, 1/2).
  Complex cgauss() {
    const double r = std::sqrt(-std::log(uniform()));
    const double phi = 2.0 * M_PI * uniform();
    return Complex(r * std::cos(phi), r * std::sin(phi));
  }

  double gauss() { return M_SQRT2 * cgauss().real(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.cgauss();
  return g;
}

// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal of R
// phase-fixed to be positive (Mezzadri's recipe).
inline Matrix haar_unitary(Index d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mod = std::abs(rjj);
    q.col(j) *= mod > 0.0 ? rjj / mod : Complex(1.0, 0.0);
  }
  return q;
}

// Random density matrix of the requested rank: G^dagger G / tr for a
// rank x d Ginibre G.
inline Matrix random_density_matrix(Index d, Index rank, Rng& rng) {
  if (rank < 1 || rank > d)
    throw std::invalid_argument("random_density_matrix: rank out of range");
  const Matrix g = ginibre(rank, d, rng);
  Matrix rho = g.adjoint() * g;
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

// Haar-random unit vector in C^d.
inline CVector random_pure_vector(Index d, Rng& rng) {
  CVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = rng.cgauss();
  const double nrm = v.norm();
  if (nrm == 0.0) {
    CVector e = CVector::Zero(d);
    e(0) = 1.0;
    return e;
  }
  return v / nrm;
}

}  // namespace qchan

#endif  // QCHAN_RANDOM_HPP
