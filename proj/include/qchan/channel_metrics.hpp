// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_CHANNEL_METRICS_HPP
#define QCHAN_CHANNEL_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/matrix.hpp"
#include "qchan/state_metrics.hpp"

namespace qchan {

// Precomputed data for one channel pair: the two kernels and their PSD
// square roots. The roots do not depend on the input state, so they are
// shared across every conditional evaluation and every optimizer step.
struct ChannelPair {
  Index dim_in = 0;
  Index dim_out = 0;
  KrausChannel phi;
  KrausChannel psi;
  ChannelDensity phi_density;
  ChannelDensity psi_density;
  Matrix phi_root;  // phi_density.kernel^{1/2}
  Matrix psi_root;
};

inline ChannelPair make_channel_pair(const KrausChannel& phi,
                                     const KrausChannel& psi) {
  if (phi.dim_in != psi.dim_in || phi.dim_out != psi.dim_out)
    throw std::invalid_argument("make_channel_pair: channel dimensions differ");
  ChannelPair pair;
  pair.dim_in = phi.dim_in;
  pair.dim_out = phi.dim_out;
  pair.phi = phi;
  pair.psi = psi;
  pair.phi_density = density_from_kraus(phi);
  pair.psi_density = density_from_kraus(psi);
  pair.phi_root = psd_sqrt(pair.phi_density.kernel);
  pair.psi_root = psd_sqrt(pair.psi_density.kernel);
  return pair;
}

// X_mu(rho) = (rho^T{}^{1/2} (x) I_out) X_mu (rho^T{}^{1/2} (x) I_out).
// For a valid channel density this is a state on the product space whose
// partial trace over the input factor is the channel output T(rho).
inline Matrix sandwiched_density(const ChannelDensity& cd,
                                 const DensityOperator& rho) {
  if (rho.dim() != cd.dim_in)
    throw std::invalid_argument("sandwiched_density: state dimension mismatch");
  const Matrix lift = kron(psd_sqrt(rho.mat.transpose()),
                           Matrix::Identity(cd.dim_out, cd.dim_out));
  Matrix out = lift * cd.kernel * lift;
  return 0.5 * (out + out.adjoint());
}

// The standard coupling omega(rho) pushed through id (x) T. With the index
// conventions of channels.hpp this equals sandwiched_density exactly; it is
// kept as an independent route for cross-checks.
inline Matrix pushforward_coupling(const KrausChannel& ch,
                                   const DensityOperator& rho) {
  if (rho.dim() != ch.dim_in)
    throw std::invalid_argument("pushforward_coupling: state dimension mismatch");
  const Matrix omega = standard_entangled_state(rho).mat;
  const Matrix eye = Matrix::Identity(ch.dim_in, ch.dim_in);
  Matrix out = Matrix::Zero(ch.dim_in * ch.dim_out, ch.dim_in * ch.dim_out);
  for (const Matrix& k : ch.kraus) {
    const Matrix lift = kron(eye, k);
    out += lift * omega * lift.adjoint();
  }
  return out;
}

namespace detail {
inline void require_input_dim(const ChannelPair& pair, const DensityOperator& rho,
                              const char* who) {
  if (rho.dim() != pair.dim_in)
    throw std::invalid_argument(std::string(who) + ": state dimension mismatch");
}
}  // namespace detail

// Conditional CB semidistance: trace norm of the sandwiched difference.
inline double conditional_cb(const ChannelPair& pair, const DensityOperator& rho) {
  detail::require_input_dim(pair, rho, "conditional_cb");
  const Matrix diff = sandwiched_density(pair.phi_density, rho) -
                      sandwiched_density(pair.psi_density, rho);
  return herm_eig(diff).values.cwiseAbs().sum();
}

// Conditional relative fidelity, evaluated as the trace norm of
// phi_root (rho^T (x) I) psi_root. The state-fidelity form of the two
// sandwiched densities is algebraically equal and available below as a
// cross-check route.
inline double conditional_fidelity(const ChannelPair& pair,
                                   const DensityOperator& rho) {
  detail::require_input_dim(pair, rho, "conditional_fidelity");
  const Matrix lift = kron(rho.mat.transpose(),
                           Matrix::Identity(pair.dim_out, pair.dim_out));
  const double f = singular_values(pair.phi_root * lift * pair.psi_root).sum();
  return std::clamp(f, 0.0, 1.0);
}

// Cross-check route: state fidelity of the two sandwiched densities.
inline double conditional_fidelity_via_states(const ChannelPair& pair,
                                              const DensityOperator& rho) {
  detail::require_input_dim(pair, rho, "conditional_fidelity_via_states");
  const Matrix r = sandwiched_density(pair.phi_density, rho);
  const Matrix s = sandwiched_density(pair.psi_density, rho);
  const Matrix root = psd_sqrt(r);
  const double f = psd_sqrt(root * s * root).trace().real();
  return std::clamp(f, 0.0, 1.0);
}

// Conditional CH semidistance sqrt(2 (1 - f_c^rho)).
inline double conditional_ch(const ChannelPair& pair, const DensityOperator& rho) {
  const double f = conditional_fidelity(pair, rho);
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - f)));
}

// Fast path for a pure second channel: f = sqrt(sum_j |tr(rho^T F_j^dagger V)|^2),
// where F_j are Heisenberg operators of the first channel and V is the
// Heisenberg operator of the pure one (an isometry up to conjugation).
inline double pure_conditional_fidelity(const std::vector<Matrix>& heisenberg_phi,
                                        const Matrix& v,
                                        const DensityOperator& rho) {
  if (heisenberg_phi.empty())
    throw std::invalid_argument("pure_conditional_fidelity: empty operator list");
  const Index m = v.cols();
  const Matrix defect = v.adjoint() * v - Matrix::Identity(m, m);
  if (herm_eig(defect).values.cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("pure_conditional_fidelity: v is not an isometry");
  if (rho.dim() != m)
    throw std::invalid_argument("pure_conditional_fidelity: state dimension mismatch");
  const Matrix rho_t = rho.mat.transpose();
  double sum = 0.0;
  for (const Matrix& f : heisenberg_phi) {
    const Complex overlap = (rho_t * f.adjoint() * v).trace();
    sum += std::norm(overlap);
  }
  return std::clamp(std::sqrt(sum), 0.0, 1.0);
}

struct OutputMetrics {
  double trace_dist = 0.0;  // Tr|T_phi(rho) - T_psi(rho)|
  double fid = 0.0;         // fidelity of the same output pair
};

inline OutputMetrics output_metrics(const ChannelPair& pair,
                                    const DensityOperator& rho) {
  detail::require_input_dim(pair, rho, "output_metrics");
  const DensityOperator a = apply_schrodinger(pair.phi, rho);
  const DensityOperator b = apply_schrodinger(pair.psi, rho);
  return OutputMetrics{trace_distance(a, b), fidelity(a, b)};
}

// C-distance: sup_rho of a linear functional of rho, which is attained at
// the top eigenvector, so the supremum collapses to the largest eigenvalue
// of the output-traced modulus of the kernel difference. No optimizer.
inline double c_distance(const ChannelPair& pair) {
  const Matrix diff = pair.phi_density.kernel - pair.psi_density.kernel;
  const Matrix traced =
      partial_trace(mat_abs(diff), pair.dim_in, pair.dim_out, Factor::Second);
  return op_norm(traced);
}

inline double c_distance(const KrausChannel& phi, const KrausChannel& psi) {
  return c_distance(make_channel_pair(phi, psi));
}

// All conditional quantities for one input state.
struct ConditionalMetrics {
  DensityOperator rho;
  double d_cb_rho = 0.0;   // conditional CB semidistance
  double f_c_rho = 0.0;    // conditional relative fidelity
  double d_c_rho = 0.0;    // conditional CH semidistance
  double f_out_rho = 0.0;  // output-state fidelity
  double d_b_rho = 0.0;    // output trace distance
};

inline ConditionalMetrics conditional_metrics(const ChannelPair& pair,
                                              const DensityOperator& rho) {
  ConditionalMetrics cm;
  cm.rho = rho;
  cm.d_cb_rho = conditional_cb(pair, rho);
  cm.f_c_rho = conditional_fidelity(pair, rho);
  cm.d_c_rho = std::sqrt(std::max(0.0, 2.0 * (1.0 - cm.f_c_rho)));
  const OutputMetrics om = output_metrics(pair, rho);
  cm.d_b_rho = om.trace_dist;
  cm.f_out_rho = om.fid;
  return cm;
}

// Convenience wrappers taking raw channels.
inline double conditional_cb(const KrausChannel& phi, const KrausChannel& psi,
                             const DensityOperator& rho) {
  return conditional_cb(make_channel_pair(phi, psi), rho);
}
inline double conditional_fidelity(const KrausChannel& phi, const KrausChannel& psi,
                                   const DensityOperator& rho) {
  return conditional_fidelity(make_channel_pair(phi, psi), rho);
}
inline double conditional_ch(const KrausChannel& phi, const KrausChannel& psi,
                             const DensityOperator& rho) {
  return conditional_ch(make_channel_pair(phi, psi), rho);
}
inline OutputMetrics output_metrics(const KrausChannel& phi, const KrausChannel& psi,
                                    const DensityOperator& rho) {
  return output_metrics(make_channel_pair(phi, psi), rho);
}

struct OptDiagnostics {
  int iterations = 0;
  bool converged = false;
  double gap = 0.0;  // Frank-Wolfe certificate where applicable, else 0
};

// Full report: suprema/infima over input states plus the closed-form
// C-distance. Witnesses are the extremal states actually found; every
// reported value is the corresponding conditional quantity evaluated at
// its witness.
struct ChannelMetricsReport {
  double b_distance = 0.0;         // sup_rho output trace distance
  double cb_distance = 0.0;        // sup_rho conditional CB
  double c_distance = 0.0;         // closed form
  double ch_distance = 0.0;        // sqrt(2 (1 - complete_fidelity))
  double complete_fidelity = 0.0;  // inf_rho conditional fidelity
  double h_distance = 0.0;         // sup_rho output Bures distance

  DensityOperator witness_b, witness_cb, witness_fc, witness_h;
  OptDiagnostics diag_b, diag_cb, diag_fc, diag_h;
  bool all_converged = false;
};

struct ChainCheck {
  bool ok = true;
  std::string detail;
};

// D_b <= D_cb <= D_c and d_c^2 <= D_cb <= 2 d_c and d_h^2 <= D_b <= 2 d_h.
inline ChainCheck check_report_chain(const ChannelMetricsReport& r,
                                     double slack = 1e-8) {
  ChainCheck c;
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      c.ok = false;
      if (!c.detail.empty()) c.detail += "; ";
      c.detail += what;
    }
  };
  require(r.b_distance <= r.cb_distance + slack, "b_distance > cb_distance");
  require(r.cb_distance <= r.c_distance + slack, "cb_distance > c_distance");
  require(r.ch_distance * r.ch_distance <= r.cb_distance + slack,
          "ch_distance^2 > cb_distance");
  require(r.cb_distance <= 2.0 * r.ch_distance + slack,
          "cb_distance > 2 ch_distance");
  require(r.h_distance * r.h_distance <= r.b_distance + slack,
          "h_distance^2 > b_distance");
  require(r.b_distance <= 2.0 * r.h_distance + slack, "b_distance > 2 h_distance");
  return c;
}

}  // namespace qchan

#endif  // QCHAN_CHANNEL_METRICS_HPP
