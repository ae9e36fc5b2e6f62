#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "veccomp/channel.hpp"
#include "veccomp/rng.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Antenna-count lower bounds guaranteeing, with probability at least
// 1 - delta, that the combined estimate lands within epsilon of the true
// superposition, plus empirical validation of the concentration facts the
// proofs rest on.

struct BoundInputs {
  int L = 1;
  int K = 1;
  double gamma1 = 1.0;   // sum_k ||x_k||
  double gamma2 = 1.0;   // sum_k ||x_k||^2
  double epsilon = 1.0;  // target error norm
  double delta = 0.5;    // failure probability
  double sigma_z = 1.0;  // per-antenna noise std
  double c0 = 2.0;       // scale constant, > 1

  void validate() const {
    if (L < 1 || K < 1) throw std::invalid_argument("BoundInputs: L and K must be >= 1");
    if (!(epsilon > 0)) throw std::invalid_argument("BoundInputs: epsilon must be > 0");
    if (!(delta > 0 && delta < 1))
      throw std::invalid_argument("BoundInputs: delta must lie in (0, 1)");
    if (!(gamma1 > 0) || !(gamma2 > 0))
      throw std::invalid_argument("BoundInputs: gamma1 and gamma2 must be > 0");
    if (!(sigma_z >= 0)) throw std::invalid_argument("BoundInputs: sigma_z must be >= 0");
    if (!(c0 > 1)) throw std::invalid_argument("BoundInputs: c0 must be > 1");
  }
};

// Pre-ceiling value of the receive-antenna bound:
//   max{ L K gamma1^2 gamma2 / eps^2 * ln(2K(L+1)/delta), L }.
inline double receive_antenna_bound_value(const BoundInputs& b) {
  b.validate();
  const double log_term = std::log(2.0 * b.K * (b.L + 1) / b.delta);
  const double concentration =
      double(b.L) * b.K * b.gamma1 * b.gamma1 * b.gamma2 / (b.epsilon * b.epsilon) * log_term;
  return std::max(concentration, double(b.L));
}

inline std::int64_t min_receive_antennas(const BoundInputs& b) {
  return std::int64_t(std::ceil(receive_antenna_bound_value(b)));
}

// Pre-ceiling value of the joint antenna-product bound:
//   L K max{ gamma1^2 gamma2 sigma_z^2 c0 / eps^2 * ln(2K(L+1)/delta), L }.
inline double antenna_product_bound_value(const BoundInputs& b) {
  b.validate();
  const double log_term = std::log(2.0 * b.K * (b.L + 1) / b.delta);
  const double noise_term = b.gamma1 * b.gamma1 * b.gamma2 * b.sigma_z * b.sigma_z * b.c0 /
                            (b.epsilon * b.epsilon) * log_term;
  return double(b.L) * b.K * std::max(noise_term, double(b.L));
}

inline std::int64_t min_antenna_product(const BoundInputs& b) {
  return std::int64_t(std::ceil(antenna_product_bound_value(b)));
}

// Monte Carlo scenario for the tail-probability validation: K nodes with
// unit-norm symbol vectors through the fading channel.
struct TailScenario {
  int K = 2;
  int n_r = 64;
  int n_t = 4;
  int ell = 2;
  double sigma_h = 1.0;
  double sigma_z = 1.0;
  double corr = 0.0;
  BeamformerMode mode = BeamformerMode::kIsometric;
  std::uint64_t seed = 1;
};

struct TailReport {
  double p_total = 0;         // P(||r - r_hat|| <= epsilon)
  double p_signal = 0;        // P(err_signal <= epsilon)
  double p_interference = 0;  // P(err_interference <= epsilon)
  double p_noise = 0;         // P(err_noise <= epsilon)
  int trials = 0;
};

// Fraction of trials whose total / per-term error norms stay within epsilon.
inline TailReport empirical_tail_probability(const TailScenario& sc, double epsilon,
                                             int trials) {
  if (trials < 100)
    throw std::invalid_argument("empirical_tail_probability: need at least 100 trials");
  const std::vector<double> sigma_h(size_t(sc.K), sc.sigma_h);
  const std::vector<double> sigma_v(size_t(sc.K), 1.0 / sc.sigma_h);
  TailReport report;
  report.trials = trials;
  int n_total = 0, n_sig = 0, n_inter = 0, n_noise = 0;
  for (std::uint32_t trial = 0; trial < std::uint32_t(trials); ++trial) {
    const auto channels =
        draw_channels<double>(sc.K, sc.n_r, sc.n_t, sigma_h, sc.corr, sc.seed, trial);
    std::vector<std::uint64_t> beam_seeds(size_t(sc.K));
    for (int k = 0; k < sc.K; ++k)
      beam_seeds[size_t(k)] = derive_seed(sc.seed, trial, std::uint32_t(k));
    const auto beams = draw_beamformers<double>(sc.n_t, sc.ell, sigma_v, sc.mode, beam_seeds);
    std::vector<ComplexVector<double>> symbols;
    symbols.reserve(size_t(sc.K));
    for (int k = 0; k < sc.K; ++k) {
      RngStream srng(sc.seed, trial, std::uint32_t(k), Role::kSymbols);
      symbols.push_back(random_unit_vector<double>(sc.ell, srng));
    }
    RngStream noise(sc.seed, trial, 0, Role::kNoise);
    const auto res = transmit_and_combine<double>(channels, beams, symbols, sc.sigma_z, noise);
    if (res.err_total <= epsilon) ++n_total;
    if (res.err_signal <= epsilon) ++n_sig;
    if (res.err_interference <= epsilon) ++n_inter;
    if (res.err_noise <= epsilon) ++n_noise;
  }
  report.p_total = double(n_total) / trials;
  report.p_signal = double(n_sig) / trials;
  report.p_interference = double(n_inter) / trials;
  report.p_noise = double(n_noise) / trials;
  return report;
}

// Empirical extreme eigenvalues of H^H H / (N_r sigma^2) against the
// concentration envelope 1 +- 3 sqrt(N_t/N_r), plus the cross-channel
// operator norm ||H1^H H2|| / (N_r sigma^2) that should vanish at the same
// sqrt(N_t/N_r) rate.  Violations are reported as flags, not exceptions.
struct EigenReport {
  double lambda_min = 0;
  double lambda_max = 0;
  double envelope_low = 0;
  double envelope_high = 0;
  double cross_norm = 0;       // largest over trials
  double cross_threshold = 0;  // 3 sqrt(N_t/N_r)
  bool eigen_ok = false;
  bool cross_ok = false;
  int trials = 0;
};

inline EigenReport eigen_concentration_check(int n_r, int n_t, double sigma, int trials,
                                             std::uint64_t seed) {
  if (n_r < n_t)
    throw std::invalid_argument("eigen_concentration_check: need N_r >= N_t");
  if (trials < 1)
    throw std::invalid_argument("eigen_concentration_check: need at least one trial");
  EigenReport report;
  report.trials = trials;
  const double spread = 3.0 * std::sqrt(double(n_t) / n_r);
  report.envelope_low = 1.0 - spread;
  report.envelope_high = 1.0 + spread;
  report.cross_threshold = spread;
  report.lambda_min = std::numeric_limits<double>::infinity();
  report.lambda_max = -std::numeric_limits<double>::infinity();
  const double scale = 1.0 / (double(n_r) * sigma * sigma);
  for (std::uint32_t trial = 0; trial < std::uint32_t(trials); ++trial) {
    const auto h = draw_channels<double>(2, n_r, n_t, {sigma, sigma}, 0.0, seed, trial);
    const ComplexMatrix<double> gram = scale * (h[0].adjoint() * h[0]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<double>> eig(gram);
    report.lambda_min = std::min(report.lambda_min, eig.eigenvalues().minCoeff());
    report.lambda_max = std::max(report.lambda_max, eig.eigenvalues().maxCoeff());
    const ComplexMatrix<double> cross = scale * (h[0].adjoint() * h[1]);
    const double op_norm =
        Eigen::JacobiSVD<ComplexMatrix<double>>(cross).singularValues()(0);
    report.cross_norm = std::max(report.cross_norm, op_norm);
  }
  report.eigen_ok =
      report.lambda_min >= report.envelope_low && report.lambda_max <= report.envelope_high;
  report.cross_ok = report.cross_norm < report.cross_threshold;
  return report;
}

}  // namespace veccomp
