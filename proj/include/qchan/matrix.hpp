// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_MATRIX_HPP
#define QCHAN_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qchan {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Scale-invariant numerical rank rule: eigenvalues at or below
// d * lambda_max * 1e-12 count as zero everywhere (sqrt, rank, Kraus
// extraction).
inline double rank_cutoff(double lambda_max, Index d) {
  return static_cast<double>(d) * std::abs(lambda_max) * 1e-12;
}

inline bool all_finite(const Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

enum class Factor { First, Second };

// Trace over one tensor factor of an operator on C^{m} (x) C^{n},
// flattened so composite index (x, i) = x * n + i.
inline Matrix partial_trace(const Matrix& m, Index m_dim, Index n_dim,
                            Factor factor) {
  if (m.rows() != m.cols() || m.rows() != m_dim * n_dim)
    throw std::invalid_argument("partial_trace: operator is not square of size m_dim*n_dim");
  if (factor == Factor::First) {
    Matrix out = Matrix::Zero(n_dim, n_dim);
    for (Index i = 0; i < n_dim; ++i)
      for (Index k = 0; k < n_dim; ++k)
        for (Index x = 0; x < m_dim; ++x)
          out(i, k) += m(x * n_dim + i, x * n_dim + k);
    return out;
  }
  Matrix out = Matrix::Zero(m_dim, m_dim);
  for (Index x = 0; x < m_dim; ++x)
    for (Index y = 0; y < m_dim; ++y)
      for (Index i = 0; i < n_dim; ++i)
        out(x, y) += m(x * n_dim + i, y * n_dim + i);
  return out;
}

struct HermEig {
  RealVector values;  // descending
  Matrix vectors;     // orthonormal columns, phase-fixed per column
};

namespace detail {

// Phase convention: rotate each column so its first entry of largest
// modulus is real positive.
inline void fix_phases(Matrix& q) {
  for (Index j = 0; j < q.cols(); ++j) {
    Index best = 0;
    double best_mod = 0.0;
    for (Index i = 0; i < q.rows(); ++i) {
      const double mod = std::abs(q(i, j));
      if (mod > best_mod) {
        best_mod = mod;
        best = i;
      }
    }
    if (best_mod > 0.0) q.col(j) *= std::conj(q(best, j)) / best_mod;
  }
}

inline double op_norm_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("op_norm_hermitian: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

inline HermEig herm_eig(const Matrix& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("herm_eig: matrix is not square");
  const Index d = h.rows();
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver failed");

  const double scale = d > 0 ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
  const Matrix delta = h - h.adjoint();
  const double defect_bound = delta.norm();  // Frobenius dominates op norm
  if (defect_bound > 1e-10 * scale) {
    const double defect = detail::op_norm_hermitian(Complex(0, 1) * delta);
    if (defect > 1e-10 * scale)
      throw std::invalid_argument("herm_eig: matrix is not Hermitian within tolerance");
  }

  HermEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  detail::fix_phases(out.vectors);
  return out;
}

// Hermitian PSD square root. Eigenvalues within the rank cutoff of zero are
// clipped to zero; anything more negative is a contract violation.
inline Matrix psd_sqrt(const Matrix& p) {
  HermEig eig = herm_eig(p);
  const Index d = p.rows();
  const double lam_max = d > 0 ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double cutoff = rank_cutoff(lam_max, d);
  RealVector roots(d);
  for (Index i = 0; i < d; ++i) {
    const double lam = eig.values(i);
    if (lam < -cutoff)
      throw std::invalid_argument("psd_sqrt: eigenvalue " + std::to_string(lam) +
                                  " below PSD clipping threshold");
    roots(i) = lam > cutoff ? std::sqrt(lam) : 0.0;
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

// Operator modulus sqrt(a^dagger a) for any rectangular a.
inline Matrix mat_abs(const Matrix& a) { return psd_sqrt(a.adjoint() * a); }

// Singular values in descending order, via the Gram matrix.
inline RealVector singular_values(const Matrix& a) {
  HermEig eig = herm_eig(a.adjoint() * a);
  RealVector s(eig.values.size());
  for (Index i = 0; i < s.size(); ++i)
    s(i) = eig.values(i) > 0.0 ? std::sqrt(eig.values(i)) : 0.0;
  return s;
}

inline bool is_hermitian(const Matrix& a, double rel_tol = 1e-11) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= rel_tol * std::max(scale, 1e-300);
}

inline double trace_norm(const Matrix& a) {
  if (is_hermitian(a)) return herm_eig(a).values.cwiseAbs().sum();
  return singular_values(a).sum();
}

inline double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double lam = detail::op_norm_hermitian(a.adjoint() * a);
  return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

struct Svd {
  Matrix u;      // square, unitary
  RealVector s;  // descending
  Matrix v;      // square, unitary; a = u * s.asDiagonal() * v.adjoint()
};

// Full SVD of a square matrix, built from one Hermitian solve of a^dagger a.
// Left vectors are a*v_i/s_i; the near-null block is completed to a unitary
// by Gram-Schmidt over the canonical basis, so the factors are always full.
inline Svd svd_square(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("svd_square: matrix is not square");
  const Index d = a.rows();
  HermEig gram = herm_eig(a.adjoint() * a);
  Svd out;
  out.v = gram.vectors;
  out.s = RealVector(d);
  for (Index i = 0; i < d; ++i)
    out.s(i) = gram.values(i) > 0.0 ? std::sqrt(gram.values(i)) : 0.0;

  const double s_max = d > 0 ? out.s.maxCoeff() : 0.0;
  const double s_cut = s_max * static_cast<double>(d) * 1e-12;
  out.u = Matrix::Zero(d, d);
  Index r = 0;
  for (; r < d; ++r) {
    if (out.s(r) <= s_cut) break;
    out.u.col(r) = a * out.v.col(r) / out.s(r);
  }
  // Complete columns r..d-1 by greedy Gram-Schmidt over the canonical
  // basis: at each step keep the basis vector with the largest residual.
  for (Index filled = r; filled < d; ++filled) {
    CVector best;
    double best_norm = -1.0;
    for (Index e = 0; e < d; ++e) {
      CVector cand = CVector::Zero(d);
      cand(e) = 1.0;
      for (Index j = 0; j < filled; ++j)
        cand -= out.u.col(j).dot(cand) * out.u.col(j);
      const double nrm = cand.norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = cand;
      }
    }
    if (best_norm <= 0.0)
      throw std::runtime_error("svd_square: failed to complete left factor");
    for (Index j = 0; j < filled; ++j)  // second pass for orthogonality
      best -= out.u.col(j).dot(best) * out.u.col(j);
    out.u.col(filled) = best / best.norm();
  }
  return out;
}

// Unitary polar factor w with a = w * |a|. On the null space w acts as the
// Gram-Schmidt completion, so w is always a full unitary.
inline Matrix polar_unitary(const Matrix& a) {
  Svd f = svd_square(a);
  return f.u * f.v.adjoint();
}

inline Matrix identity(Index d) { return Matrix::Identity(d, d); }

}  // namespace qchan

#endif  // QCHAN_MATRIX_HPP
