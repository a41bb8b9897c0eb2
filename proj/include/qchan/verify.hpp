// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_VERIFY_HPP
#define QCHAN_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qchan/channel_metrics.hpp"
#include "qchan/channels.hpp"
#include "qchan/matrix.hpp"
#include "qchan/optimize.hpp"
#include "qchan/random.hpp"
#include "qchan/state_metrics.hpp"

namespace qchan {

struct SuiteFailure {
  std::uint64_t instance = 0;  // trial index or derived seed
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  std::vector<SuiteFailure> failures;
  bool pass() const { return failures.empty(); }

  void require_le(std::uint64_t instance, const std::string& quantity,
                  double lhs, double rhs, double slack) {
    if (!(lhs <= rhs + slack))
      failures.push_back(SuiteFailure{instance, quantity, lhs, rhs, slack});
  }
  void require_close(std::uint64_t instance, const std::string& quantity,
                     double lhs, double rhs, double slack) {
    if (!(std::abs(lhs - rhs) <= slack))
      failures.push_back(SuiteFailure{instance, quantity, lhs, rhs, slack});
  }
  void merge(const SuiteReport& other) {
    trials += other.trials;
    failures.insert(failures.end(), other.failures.begin(),
                    other.failures.end());
  }
};

// ---------------------------------------------------------------------------
// The variational lemma behind the channel fidelity:
//   sup { tr(X^dagger Y + Y^dagger X) : X^dagger X = R, Y^dagger Y = S }
//     = 2 tr sqrt(R^{1/2} S R^{1/2}),
// achieved at X0 = R^{1/2}, Y0 = W^dagger S^{1/2} with
// S^{1/2} R^{1/2} = W |S^{1/2} R^{1/2}|.

inline SuiteReport lemma_check(const Matrix& r, const Matrix& s, int trials,
                               Rng& rng) {
  if (r.rows() != s.rows() || r.cols() != s.cols())
    throw std::invalid_argument("lemma_check: size mismatch");
  const Index d = r.rows();
  const Matrix r_root = psd_sqrt(r);  // throws on non-PSD input
  const Matrix s_root = psd_sqrt(s);

  SuiteReport report;
  report.suite = "lemma";
  report.trials = trials;

  const double closed_form = 2.0 * psd_sqrt(r_root * s * r_root).trace().real();

  // (b) Sampled decompositions never exceed the closed form.
  for (int t = 0; t < trials; ++t) {
    const Matrix u = haar_unitary(d, rng);
    const Matrix v = haar_unitary(d, rng);
    const double sampled =
        2.0 * ((u * r_root).adjoint() * (v * s_root)).trace().real();
    report.require_le(static_cast<std::uint64_t>(t), "sampled_vs_closed_form",
                      sampled, closed_form, 1e-9);
  }

  // (c) The polar-constructed pair achieves the supremum and satisfies its
  // constraint.
  const Matrix w = polar_unitary(s_root * r_root);
  const Matrix y0 = w.adjoint() * s_root;
  const double achieved = 2.0 * (r_root.adjoint() * y0).trace().real();
  report.require_close(0, "constructed_optimizer_achieves", achieved,
                       closed_form, 1e-9);
  report.require_close(0, "constructed_constraint",
                       (y0.adjoint() * y0 - s).norm(), 0.0, 1e-9);

  // (d) Invariance of the value under X -> U X.
  for (int t = 0; t < std::min(trials, 5); ++t) {
    const Matrix u = haar_unitary(d, rng);
    const Matrix x = u * r_root;
    const double recomputed = 2.0 * psd_sqrt(x * s * x.adjoint()).trace().real();
    report.require_close(static_cast<std::uint64_t>(t), "unitary_invariance",
                         recomputed, closed_form,
                         1e-10 * std::max(1.0, closed_form));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Minimax reduction at fixed rho: the lemma applied to the two sandwiched
// densities. Sampled decomposition overlaps stay at or below the
// conditional fidelity, and the polar construction attains it.

inline SuiteReport minimax_check(const KrausChannel& phi,
                                 const KrausChannel& psi,
                                 const DensityOperator& rho, int trials,
                                 Rng& rng) {
  const ChannelPair pair = make_channel_pair(phi, psi);
  if (rho.dim() != pair.dim_in)
    throw std::invalid_argument("minimax_check: state dimension mismatch");

  SuiteReport report;
  report.suite = "minimax";
  report.trials = trials;

  const Matrix r = sandwiched_density(pair.phi_density, rho);
  const Matrix s = sandwiched_density(pair.psi_density, rho);
  const Matrix r_root = psd_sqrt(r);
  const Matrix s_root = psd_sqrt(s);
  const Index d = r.rows();

  const double fc = conditional_fidelity(pair, rho);
  const double lemma_value = psd_sqrt(r_root * s * r_root).trace().real();
  report.require_close(0, "lemma_value_equals_conditional_fidelity",
                       lemma_value, fc, 1e-9);

  for (int t = 0; t < trials; ++t) {
    const Matrix u = haar_unitary(d, rng);
    const Matrix v = haar_unitary(d, rng);
    const double sampled =
        ((u * r_root).adjoint() * (v * s_root)).trace().real();
    report.require_le(static_cast<std::uint64_t>(t),
                      "sampled_overlap_vs_fidelity", sampled, fc, 1e-9);
  }

  const Matrix w = polar_unitary(s_root * r_root);
  const double achieved =
      (r_root.adjoint() * (w.adjoint() * s_root)).trace().real();
  report.require_close(0, "constructed_overlap_achieves", achieved, fc, 1e-9);
  return report;
}

// ---------------------------------------------------------------------------
// Inequality chains on random channel pairs. Exact identities get 1e-8
// slack; comparisons that involve an optimized bound against a closed form
// get 5e-3.

inline SuiteReport inequality_suite(const std::vector<std::pair<Index, Index>>& dims,
                                    int trials, Rng& rng,
                                    const OptimizerConfig& cfg) {
  SuiteReport report;
  report.suite = "inequalities";

  std::uint64_t instance = 0;
  for (const auto& [m, n] : dims) {
    for (int t = 0; t < trials; ++t, ++instance) {
      Rng local = rng.derive(instance);
      const Index ka = 1 + static_cast<Index>(local.raw() % (m * n));
      const Index kb = 1 + static_cast<Index>(local.raw() % (m * n));
      const KrausChannel phi =
          random_channel(m, n, std::max<Index>(ka, (m + n - 1) / n), local);
      const KrausChannel psi =
          random_channel(m, n, std::max<Index>(kb, (m + n - 1) / n), local);
      const Index rank = 1 + static_cast<Index>(local.raw() % m);
      const DensityOperator rho = random_density(m, rank, local);
      const ChannelPair pair = make_channel_pair(phi, psi);

      const ConditionalMetrics cm = conditional_metrics(pair, rho);
      report.require_le(instance, "conditional_ch_sq_vs_cb",
                        cm.d_c_rho * cm.d_c_rho, cm.d_cb_rho, 1e-8);
      report.require_le(instance, "conditional_cb_vs_2ch", cm.d_cb_rho,
                        2.0 * cm.d_c_rho, 1e-8);
      report.require_le(instance, "output_vs_conditional_cb", cm.d_b_rho,
                        cm.d_cb_rho, 1e-8);

      OptimizerConfig sub = cfg;
      sub.seed = Rng(cfg.seed).derive(instance).raw();
      const ChannelMetricsReport full = full_metrics(phi, psi, sub);
      report.require_le(instance, "b_distance_vs_cb_distance", full.b_distance,
                        full.cb_distance, 1e-8);
      report.require_le(instance, "cb_distance_vs_c_distance",
                        full.cb_distance, full.c_distance, 5e-3);
      report.require_le(instance, "ch_distance_sq_vs_cb_distance",
                        full.ch_distance * full.ch_distance, full.cb_distance,
                        1e-8);
      report.require_le(instance, "cb_distance_vs_2ch_distance",
                        full.cb_distance, 2.0 * full.ch_distance, 1e-8);
      report.require_le(instance, "h_distance_sq_vs_b_distance",
                        full.h_distance * full.h_distance, full.b_distance,
                        1e-8);
      report.require_le(instance, "b_distance_vs_2h_distance", full.b_distance,
                        2.0 * full.h_distance, 1e-8);
      ++report.trials;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Representation identities: Kraus <-> kernel round trip, both pictures of
// the channel action, the two fidelity forms, and the pure-channel fast
// path against the general route.

namespace detail {

inline void representation_checks(SuiteReport& report, std::uint64_t instance,
                                  const KrausChannel& phi,
                                  const KrausChannel& psi,
                                  const DensityOperator& rho) {
  const ChannelPair pair = make_channel_pair(phi, psi);
  const Index m = pair.dim_in, n = pair.dim_out;

  // (a) Fidelity forms.
  report.require_close(instance, "fidelity_forms_agree",
                       conditional_fidelity(pair, rho),
                       conditional_fidelity_via_states(pair, rho), 1e-8);

  // (b) Kernel action equals Kraus action.
  const Matrix via_kraus = apply_schrodinger(phi, rho.mat);
  const Matrix via_kernel = apply_via_density(pair.phi_density, rho.mat);
  report.require_close(instance, "kernel_action_equals_kraus_action",
                       (via_kraus - via_kernel).norm(), 0.0, 1e-10);

  // (c) Coupling route equals the sandwich route.
  report.require_close(instance, "coupling_equals_sandwich",
                       (pushforward_coupling(phi, rho) -
                        sandwiched_density(pair.phi_density, rho))
                           .norm(),
                       0.0, 1e-10);

  // (d) Round trip preserves the action on all matrix units.
  const KrausChannel round_trip = kraus_from_density(pair.phi_density);
  double worst = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < m; ++k) {
      Matrix unit = Matrix::Zero(m, m);
      unit(i, k) = 1.0;
      worst = std::max(worst, (apply_schrodinger(phi, unit) -
                               apply_schrodinger(round_trip, unit))
                                  .norm());
    }
  report.require_close(instance, "round_trip_preserves_action", worst, 0.0,
                       1e-10);

  // Orthogonality of the extracted Kraus operators.
  double cross = 0.0;
  for (std::size_t a = 0; a < round_trip.kraus.size(); ++a)
    for (std::size_t b = a + 1; b < round_trip.kraus.size(); ++b)
      cross = std::max(cross,
                       std::abs((round_trip.kraus[a].adjoint() *
                                 round_trip.kraus[b])
                                    .trace()));
  report.require_close(instance, "extracted_kraus_orthogonal", cross, 0.0,
                       1e-9);

  // Heisenberg unitality and bilinear duality on a random observable.
  report.require_close(
      instance, "heisenberg_unital",
      (apply_heisenberg(phi, Matrix::Identity(n, n)) - Matrix::Identity(m, m))
          .norm(),
      0.0, 1e-9);
}

}  // namespace detail

inline SuiteReport representation_suite(int trials, Rng& rng) {
  SuiteReport report;
  report.suite = "representations";

  std::uint64_t instance = 0;

  // Fixed zoo sweep.
  Rng zoo_rng = rng.derive(0xf00d);
  const DensityOperator sigma = random_density(2, 2, zoo_rng);
  std::vector<KrausChannel> zoo = {
      identity_channel(2),           depolarizing_channel(2, 0.3),
      depolarizing_channel(2, 1.0),  dephasing_channel(0.4),
      amplitude_damping_channel(0.5), replacement_channel(sigma),
      unitary_channel(haar_unitary(2, zoo_rng))};
  for (std::size_t a = 0; a < zoo.size(); ++a) {
    const DensityOperator rho = random_density(2, 1 + (a % 2), zoo_rng);
    detail::representation_checks(report, instance++, zoo[a],
                                  zoo[(a + 1) % zoo.size()], rho);
    ++report.trials;
  }

  // Random corpus with m, n <= 3.
  for (int t = 0; t < trials; ++t, ++instance) {
    Rng local = rng.derive(instance + 0x1000);
    const Index m = 2 + static_cast<Index>(local.raw() % 2);
    const Index n = 2 + static_cast<Index>(local.raw() % 2);
    const Index kmin = (m + n - 1) / n;
    const KrausChannel phi = random_channel(
        m, n, std::max<Index>(kmin, 1 + static_cast<Index>(local.raw() % (m * n))),
        local);
    const KrausChannel psi = random_channel(
        m, n, std::max<Index>(kmin, 1 + static_cast<Index>(local.raw() % (m * n))),
        local);
    const DensityOperator rho =
        random_density(m, 1 + static_cast<Index>(local.raw() % m), local);
    detail::representation_checks(report, instance, phi, psi, rho);

    // Pure fast path vs the general route, on an isometry pair.
    if (n >= m) {
      const Matrix v_iso = haar_unitary(n, local).leftCols(m);
      const KrausChannel pure = make_channel({v_iso});
      const ChannelPair mixed_vs_pure = make_channel_pair(phi, pure);
      const double general = conditional_fidelity(mixed_vs_pure, rho);
      const double fast = pure_conditional_fidelity(
          heisenberg_ops(phi), v_iso.conjugate(), rho);
      report.require_close(instance, "pure_fast_path_equals_general", fast,
                           general, 1e-8);
    }
    ++report.trials;
  }
  return report;
}

}  // namespace qchan

#endif  // QCHAN_VERIFY_HPP
