// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_CHANNELS_HPP
#define QCHAN_CHANNELS_HPP

#include <stdexcept>
#include <vector>

#include "qchan/matrix.hpp"
#include "qchan/random.hpp"

namespace qchan {

// Conventions, fixed once for the whole library:
//
//  * A channel maps states on C^m (input) to states on C^n (output) in the
//    Schrodinger picture, T(rho) = sum_j K_j rho K_j^dagger with K_j of
//    shape n x m and sum_j K_j^dagger K_j = I_m.
//  * The Heisenberg-picture operators are F_j = conj(K_j), acting as
//    Phi(B) = sum_j F_j^dagger B F_j on n x n observables; Phi(I_n) = I_m.
//  * The channel density (Choi-type kernel) lives on C^m (x) C^n with the
//    composite index (x, i) = x*n + i, input factor first. Its entries are
//    kernel[(x,i),(y,k)] = <x| Phi(|i><k|) |y>, equivalently
//    kernel = sum_j w_j w_j^dagger with w_j[(x,i)] = K_j(i, x).
//  * The partial trace of the kernel over the output factor is I_m, and
//    the Schrodinger action is recovered as
//    T(rho) = tr_in[(rho^T (x) I_n) kernel].
//  * Transposition of a state density is always the entrywise transpose;
//    for Hermitian rho this coincides with complex conjugation.

struct DensityOperator {
  Matrix mat;
  Index dim() const { return mat.rows(); }
};

struct KrausChannel {
  Index dim_in = 0;   // m
  Index dim_out = 0;  // n
  std::vector<Matrix> kraus;  // each n x m
};

struct ChannelDensity {
  Index dim_in = 0;
  Index dim_out = 0;
  Matrix kernel;  // (m*n) x (m*n)
};

// ---------------------------------------------------------------------------
// Densities for states

inline DensityOperator make_density(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("make_density: matrix is not square");
  if (!all_finite(m))
    throw std::invalid_argument("make_density: matrix has non-finite entries");
  const Index d = m.rows();
  HermEig eig = herm_eig(m);  // gates Hermiticity
  if (eig.values.minCoeff() < -static_cast<double>(d) * 1e-12)
    throw std::invalid_argument("make_density: matrix is not positive semidefinite");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("make_density: trace differs from one");
  return DensityOperator{0.5 * (m + m.adjoint())};
}

inline DensityOperator random_density(Index d, Index rank, Rng& rng) {
  return DensityOperator{random_density_matrix(d, rank, rng)};
}

inline DensityOperator pure_density(const CVector& psi) {
  const CVector v = psi / psi.norm();
  return DensityOperator{v * v.adjoint()};
}

inline DensityOperator maximally_mixed(Index d) {
  return DensityOperator{Matrix::Identity(d, d) / static_cast<double>(d)};
}

// ---------------------------------------------------------------------------
// Kraus channels

inline KrausChannel make_channel(std::vector<Matrix> kraus) {
  if (kraus.empty())
    throw std::invalid_argument("make_channel: empty Kraus list");
  const Index n = kraus.front().rows();
  const Index m = kraus.front().cols();
  for (const Matrix& k : kraus) {
    if (k.rows() != n || k.cols() != m)
      throw std::invalid_argument("make_channel: Kraus operators disagree in shape");
    if (!all_finite(k))
      throw std::invalid_argument("make_channel: Kraus operator has non-finite entries");
  }
  return KrausChannel{m, n, std::move(kraus)};
}

struct ChannelValidation {
  Index dim_in = 0;
  Index dim_out = 0;
  Index kraus_rank = 0;   // independent Kraus operators
  double tp_defect = 0.0; // ||sum K^dagger K - I||_op
  bool pass = false;
};

inline ChannelValidation validate_channel(const KrausChannel& ch,
                                          double tol = 1e-9) {
  if (ch.kraus.empty())
    throw std::invalid_argument("validate_channel: empty Kraus list");
  ChannelValidation report;
  report.dim_in = ch.dim_in;
  report.dim_out = ch.dim_out;

  Matrix acc = Matrix::Zero(ch.dim_in, ch.dim_in);
  for (const Matrix& k : ch.kraus) acc += k.adjoint() * k;
  acc -= Matrix::Identity(ch.dim_in, ch.dim_in);
  report.tp_defect = herm_eig(acc).values.cwiseAbs().maxCoeff();

  const Index count = static_cast<Index>(ch.kraus.size());
  Matrix gram(count, count);
  for (Index a = 0; a < count; ++a)
    for (Index b = 0; b < count; ++b)
      gram(a, b) = (ch.kraus[a].adjoint() * ch.kraus[b]).trace();
  HermEig eig = herm_eig(gram);
  const double cut = rank_cutoff(eig.values.cwiseAbs().maxCoeff(), count);
  report.kraus_rank = (eig.values.array() > cut).count();

  report.pass = report.tp_defect <= tol;
  return report;
}

inline std::vector<Matrix> heisenberg_ops(const KrausChannel& ch) {
  std::vector<Matrix> ops;
  ops.reserve(ch.kraus.size());
  for (const Matrix& k : ch.kraus) ops.push_back(k.conjugate());
  return ops;
}

// ---------------------------------------------------------------------------
// Kernel <-> Kraus

inline CVector kraus_vec(const Matrix& k) {
  const Index n = k.rows(), m = k.cols();
  CVector w(m * n);
  for (Index x = 0; x < m; ++x)
    for (Index i = 0; i < n; ++i) w(x * n + i) = k(i, x);
  return w;
}

inline Matrix kraus_unvec(const CVector& w, Index m, Index n) {
  Matrix k(n, m);
  for (Index x = 0; x < m; ++x)
    for (Index i = 0; i < n; ++i) k(i, x) = w(x * n + i);
  return k;
}

inline ChannelDensity density_from_kraus(const KrausChannel& ch) {
  if (ch.kraus.empty())
    throw std::invalid_argument("density_from_kraus: empty Kraus list");
  const Index mn = ch.dim_in * ch.dim_out;
  Matrix kernel = Matrix::Zero(mn, mn);
  for (const Matrix& k : ch.kraus) {
    const CVector w = kraus_vec(k);
    kernel += w * w.adjoint();
  }
  return ChannelDensity{ch.dim_in, ch.dim_out, std::move(kernel)};
}

struct DensityDefects {
  double hermiticity = 0.0;   // ||kernel - kernel^dagger||_F
  double min_eigenvalue = 0.0;
  double ptrace_defect = 0.0; // ||tr_out(kernel) - I_m||_op
};

inline DensityDefects density_defects(const ChannelDensity& cd) {
  DensityDefects d;
  d.hermiticity = (cd.kernel - cd.kernel.adjoint()).norm();
  d.min_eigenvalue = herm_eig(cd.kernel).values.minCoeff();
  Matrix pt = partial_trace(cd.kernel, cd.dim_in, cd.dim_out, Factor::Second);
  pt -= Matrix::Identity(cd.dim_in, cd.dim_in);
  d.ptrace_defect = herm_eig(pt).values.cwiseAbs().maxCoeff();
  return d;
}

inline KrausChannel kraus_from_density(const ChannelDensity& cd) {
  const Index m = cd.dim_in, n = cd.dim_out, mn = m * n;
  if (cd.kernel.rows() != mn || cd.kernel.cols() != mn)
    throw std::invalid_argument("kraus_from_density: kernel size disagrees with dims");
  HermEig eig = herm_eig(cd.kernel);
  const double lam_max = eig.values.cwiseAbs().maxCoeff();
  const double cut = rank_cutoff(lam_max, mn);
  if (eig.values.minCoeff() < -cut)
    throw std::invalid_argument("kraus_from_density: kernel fails the PSD gate");
  std::vector<Matrix> kraus;
  for (Index j = 0; j < mn; ++j) {
    const double lam = eig.values(j);
    if (lam <= cut) continue;
    kraus.push_back(std::sqrt(lam) * kraus_unvec(eig.vectors.col(j), m, n));
  }
  if (kraus.empty())
    throw std::invalid_argument("kraus_from_density: kernel has no support");
  return KrausChannel{m, n, std::move(kraus)};
}

// ---------------------------------------------------------------------------
// Channel actions

inline Matrix apply_schrodinger(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim_in || rho.cols() != ch.dim_in)
    throw std::invalid_argument("apply_schrodinger: state dimension mismatch");
  Matrix out = Matrix::Zero(ch.dim_out, ch.dim_out);
  for (const Matrix& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

inline DensityOperator apply_schrodinger(const KrausChannel& ch,
                                         const DensityOperator& rho) {
  Matrix out = apply_schrodinger(ch, rho.mat);
  return DensityOperator{0.5 * (out + out.adjoint())};
}

inline Matrix apply_via_density(const ChannelDensity& cd, const Matrix& rho) {
  if (rho.rows() != cd.dim_in || rho.cols() != cd.dim_in)
    throw std::invalid_argument("apply_via_density: state dimension mismatch");
  const Matrix lifted =
      kron(rho.transpose(), Matrix::Identity(cd.dim_out, cd.dim_out)) * cd.kernel;
  return partial_trace(lifted, cd.dim_in, cd.dim_out, Factor::First);
}

inline DensityOperator apply_via_density(const ChannelDensity& cd,
                                         const DensityOperator& rho) {
  Matrix out = apply_via_density(cd, rho.mat);
  return DensityOperator{0.5 * (out + out.adjoint())};
}

inline Matrix apply_heisenberg(const KrausChannel& ch, const Matrix& b) {
  if (b.rows() != ch.dim_out || b.cols() != ch.dim_out)
    throw std::invalid_argument("apply_heisenberg: observable dimension mismatch");
  Matrix out = Matrix::Zero(ch.dim_in, ch.dim_in);
  for (const Matrix& k : ch.kraus)
    out += k.transpose() * b * k.conjugate();
  return out;
}

// Standard coupling omega(rho): the pure state on C^m (x) C^m whose vector
// is the flattened square root of rho. Its margins are rho (second factor)
// and rho^T (first factor).
inline DensityOperator standard_entangled_state(const DensityOperator& rho) {
  const Index m = rho.dim();
  const Matrix root = psd_sqrt(rho.mat);
  CVector u(m * m);
  for (Index x = 0; x < m; ++x)
    for (Index y = 0; y < m; ++y) u(x * m + y) = root(x, y);
  return DensityOperator{u * u.adjoint()};
}

// ---------------------------------------------------------------------------
// Channel zoo

inline KrausChannel identity_channel(Index d) {
  return make_channel({Matrix::Identity(d, d)});
}

inline KrausChannel unitary_channel(const Matrix& u) {
  if (u.rows() != u.cols())
    throw std::invalid_argument("unitary_channel: matrix is not square");
  const Matrix defect = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
  if (defect.norm() > 1e-9 * std::sqrt(static_cast<double>(u.cols())))
    throw std::invalid_argument("unitary_channel: matrix is not unitary");
  return make_channel({u});
}

// T(rho) = (1-p) rho + p tr(rho) I/d.
inline KrausChannel depolarizing_channel(Index d, double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("depolarizing_channel: p outside [0, 1]");
  std::vector<Matrix> kraus;
  if (p < 1.0)
    kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  if (p > 0.0) {
    const double w = std::sqrt(p / static_cast<double>(d));
    for (Index i = 0; i < d; ++i)
      for (Index k = 0; k < d; ++k) {
        Matrix unit = Matrix::Zero(d, d);
        unit(i, k) = w;
        kraus.push_back(unit);
      }
  }
  return make_channel(std::move(kraus));
}

// T(rho) = (1-p) rho + p diag(rho).
inline KrausChannel dephasing_channel(double p, Index d = 2) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("dephasing_channel: p outside [0, 1]");
  std::vector<Matrix> kraus;
  if (p < 1.0)
    kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  if (p > 0.0)
    for (Index i = 0; i < d; ++i) {
      Matrix proj = Matrix::Zero(d, d);
      proj(i, i) = std::sqrt(p);
      kraus.push_back(proj);
    }
  return make_channel(std::move(kraus));
}

inline KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("amplitude_damping_channel: gamma outside [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return make_channel({k0, k1});
}

// T(rho) = sigma tr(rho), same input and output dimension as sigma.
inline KrausChannel replacement_channel(const DensityOperator& sigma) {
  const Index d = sigma.dim();
  HermEig eig = herm_eig(sigma.mat);
  const double cut = rank_cutoff(eig.values.cwiseAbs().maxCoeff(), d);
  std::vector<Matrix> kraus;
  for (Index a = 0; a < d; ++a) {
    if (eig.values(a) <= cut) continue;
    const double w = std::sqrt(eig.values(a));
    for (Index k = 0; k < d; ++k)
      kraus.push_back(w * eig.vectors.col(a) * Matrix::Identity(d, d).row(k));
  }
  return make_channel(std::move(kraus));
}

// Stinespring construction: the first m columns of a Haar unitary on
// C^{kraus_count * n} form an isometry, cut into kraus_count blocks.
inline KrausChannel random_channel(Index m, Index n, Index kraus_count, Rng& rng) {
  if (m < 1 || n < 1 || kraus_count < 1)
    throw std::invalid_argument("random_channel: dimensions must be positive");
  if (kraus_count * n < m)
    throw std::invalid_argument("random_channel: kraus_count * dim_out < dim_in");
  const Matrix u = haar_unitary(kraus_count * n, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(kraus_count);
  for (Index j = 0; j < kraus_count; ++j)
    kraus.push_back(u.block(j * n, 0, n, m));
  return make_channel(std::move(kraus));
}

}  // namespace qchan

#endif  // QCHAN_CHANNELS_HPP
