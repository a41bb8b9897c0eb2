// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_STATE_METRICS_HPP
#define QCHAN_STATE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qchan/channels.hpp"
#include "qchan/matrix.hpp"
#include "qchan/random.hpp"

namespace qchan {

namespace detail {
inline void require_same_dim(const DensityOperator& rho,
                             const DensityOperator& sigma, const char* who) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace detail

// Tr|rho - sigma|, in [0, 2].
inline double trace_distance(const DensityOperator& rho,
                             const DensityOperator& sigma) {
  detail::require_same_dim(rho, sigma, "trace_distance");
  return herm_eig(rho.mat - sigma.mat).values.cwiseAbs().sum();
}

// Uhlmann fidelity Tr sqrt(rho^{1/2} sigma rho^{1/2}), in [0, 1]. Always
// computed in the sandwich form; the sqrt(rho*sigma) similarity form is a
// test-only cross-check elsewhere.
inline double fidelity(const DensityOperator& rho,
                       const DensityOperator& sigma) {
  detail::require_same_dim(rho, sigma, "fidelity");
  const Matrix root = psd_sqrt(rho.mat);
  return psd_sqrt(root * sigma.mat * root).trace().real();
}

// Bures distance sqrt(2 (1 - f)), in [0, sqrt(2)].
inline double bures_distance(const DensityOperator& rho,
                             const DensityOperator& sigma) {
  const double f = fidelity(rho, sigma);
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - f)));
}

// d^2 <= D <= 2d and D <= 2 sqrt(1-f^2); violations are reported, not thrown.
struct StateEquivalenceReport {
  double trace_dist = 0.0;       // D
  double fid = 0.0;              // f
  double bures = 0.0;            // d
  double fid_upper_bound = 0.0;  // 2 sqrt(1 - f^2)
  bool lower_ok = false;         // d^2 <= D
  bool upper_ok = false;         // D <= 2d
  bool fid_bound_ok = false;     // D <= 2 sqrt(1-f^2)
  bool pass = false;
};

inline StateEquivalenceReport check_state_equivalence(
    const DensityOperator& rho, const DensityOperator& sigma,
    double slack = 1e-9) {
  StateEquivalenceReport r;
  r.trace_dist = trace_distance(rho, sigma);
  r.fid = fidelity(rho, sigma);
  r.bures = std::sqrt(std::max(0.0, 2.0 * (1.0 - r.fid)));
  r.fid_upper_bound =
      2.0 * std::sqrt(std::max(0.0, 1.0 - r.fid * r.fid));
  r.lower_ok = r.bures * r.bures <= r.trace_dist + slack;
  r.upper_ok = r.trace_dist <= 2.0 * r.bures + slack;
  r.fid_bound_ok = r.trace_dist <= r.fid_upper_bound + slack;
  r.pass = r.lower_ok && r.upper_ok && r.fid_bound_ok;
  return r;
}

// Brute-force check of the purification variational problem: samples
// chi = U rho^{1/2}, psi = V sigma^{1/2} over Haar pairs and tracks the
// minimum of ||chi - psi||_F^2. The polar-constructed optimum
// U = I, V = (polar factor of sigma^{1/2} rho^{1/2})^dagger is included,
// so the returned minimum equals 2 (1 - f) up to roundoff.
inline double uhlmann_purification_oracle(const DensityOperator& rho,
                                          const DensityOperator& sigma,
                                          int trials, Rng& rng) {
  detail::require_same_dim(rho, sigma, "uhlmann_purification_oracle");
  if (trials < 1)
    throw std::invalid_argument("uhlmann_purification_oracle: trials must be >= 1");
  const Index d = rho.dim();
  const Matrix root_rho = psd_sqrt(rho.mat);
  const Matrix root_sigma = psd_sqrt(sigma.mat);

  auto squared_distance = [&](const Matrix& u, const Matrix& v) {
    const Matrix diff = u * root_rho - v * root_sigma;
    return (diff.adjoint() * diff).trace().real();
  };

  const Matrix w = polar_unitary(root_sigma * root_rho);
  double best = squared_distance(Matrix::Identity(d, d), w.adjoint());
  for (int t = 0; t < trials; ++t) {
    const Matrix u = haar_unitary(d, rng);
    const Matrix v = haar_unitary(d, rng);
    best = std::min(best, squared_distance(u, v));
  }
  return best;
}

}  // namespace qchan

#endif  // QCHAN_STATE_METRICS_HPP
