#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "veccomp/rng.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Simulated narrowband multiple-access channel.  K nodes each apply a
// transmit beamformer V_k (N_t x L) to their symbol vector x_k (length L);
// the receiver sees sum_k H_k V_k x_k + z over N_r antennas, combines with
// U = sum_k H_k V_k / N_r, and normalizes by beta = N_r * N_t so that the
// effective per-node gain concentrates at sigma_h,k * sigma_v,k squared
// (unity when sigma_v = 1 / sigma_h).

enum class BeamformerMode { kGaussian, kIsometric };

inline const char* to_string(BeamformerMode mode) {
  return mode == BeamformerMode::kGaussian ? "gaussian" : "isometric";
}

inline BeamformerMode beamformer_mode_from_string(const std::string& s) {
  if (s == "gaussian") return BeamformerMode::kGaussian;
  if (s == "isometric") return BeamformerMode::kIsometric;
  throw std::invalid_argument("unknown beamformer mode '" + s +
                              "' (expected gaussian or isometric)");
}

// Sentinel node index for randomness shared by all nodes in a trial.
inline constexpr std::uint32_t kSharedNode = 0xFFFFu;

// Draws the K fading matrices for one trial.  With correlation a in [0, 1],
// H_k = sigma_h,k * (sqrt(a) H0 + sqrt(1 - a) W_k) where H0 is common to the
// trial and W_k is private to node k; every entry is unit-variance complex
// normal, so E|H_k(i,j)|^2 = sigma_h,k^2 for any a.
template <typename Scalar = double>
std::vector<ComplexMatrix<Scalar>> draw_channels(int K, int n_r, int n_t,
                                                 const std::vector<Scalar>& sigma_h,
                                                 Scalar corr, std::uint64_t seed,
                                                 std::uint32_t trial) {
  if (K < 1) throw std::invalid_argument("draw_channels: K must be >= 1");
  if (int(sigma_h.size()) != K)
    throw std::invalid_argument("draw_channels: need one sigma_h per node");
  if (!(corr >= Scalar(0) && corr <= Scalar(1)))
    throw std::invalid_argument("draw_channels: correlation must lie in [0, 1]");
  std::vector<ComplexMatrix<Scalar>> out;
  out.reserve(size_t(K));
  ComplexMatrix<Scalar> shared;
  if (corr > Scalar(0)) {
    RngStream rng(seed, trial, kSharedNode, Role::kShared);
    shared = random_cnormal_matrix<Scalar>(n_r, n_t, rng);
  }
  const Scalar ws = std::sqrt(corr);
  const Scalar wp = std::sqrt(Scalar(1) - corr);
  for (int k = 0; k < K; ++k) {
    RngStream rng(seed, trial, std::uint32_t(k), Role::kChannel);
    ComplexMatrix<Scalar> h = random_cnormal_matrix<Scalar>(n_r, n_t, rng);
    if (corr > Scalar(0))
      h = ws * shared + wp * h;
    out.push_back(sigma_h[size_t(k)] * h);
  }
  return out;
}

// Draws one transmit beamformer without any channel knowledge.
//   gaussian:  independent CN(0, sigma_v^2) entries;
//   isometric: sqrt(N_t) * sigma_v * Q with Q a uniformly random N_t x L
//              matrix with orthonormal columns (requires L <= N_t).
// Both choices have the same expected power E||V||_F^2 = N_t L sigma_v^2.
template <typename Scalar = double>
ComplexMatrix<Scalar> draw_beamformer(int n_t, int ell, Scalar sigma_v, BeamformerMode mode,
                                      RngStream& rng) {
  if (mode == BeamformerMode::kGaussian)
    return sigma_v * random_cnormal_matrix<Scalar>(n_t, ell, rng);
  if (ell > n_t)
    throw std::invalid_argument("draw_beamformer: isometric mode needs L <= N_t");
  ComplexMatrix<Scalar> g = random_cnormal_matrix<Scalar>(n_t, ell, rng);
  Eigen::HouseholderQR<ComplexMatrix<Scalar>> qr(g);
  ComplexMatrix<Scalar> q =
      qr.householderQ() * ComplexMatrix<Scalar>::Identity(n_t, ell);
  // Fix the QR phase ambiguity so Q is Haar distributed, not just uniform up
  // to a per-column phase.
  for (int j = 0; j < ell; ++j) {
    const Complex<Scalar> d = qr.matrixQR()(j, j);
    const Scalar mag = std::abs(d);
    if (mag > Scalar(0)) q.col(j) *= d / mag;
  }
  return std::sqrt(Scalar(n_t)) * sigma_v * q;
}

// One beamformer per node, each from its own seed-addressed stream so the
// draw does not depend on node processing order.
template <typename Scalar = double>
std::vector<ComplexMatrix<Scalar>> draw_beamformers(int n_t, int ell,
                                                    const std::vector<Scalar>& sigma_v,
                                                    BeamformerMode mode,
                                                    const std::vector<std::uint64_t>& seeds) {
  if (sigma_v.size() != seeds.size())
    throw std::invalid_argument("draw_beamformers: need one sigma_v per seed");
  std::vector<ComplexMatrix<Scalar>> out;
  out.reserve(seeds.size());
  for (size_t k = 0; k < seeds.size(); ++k) {
    RngStream rng(seeds[k], 0, 0, Role::kBeamformer);
    out.push_back(draw_beamformer<Scalar>(n_t, ell, sigma_v[k], mode, rng));
  }
  return out;
}

// Receive combiner U = sum_k H_k V_k / N_r.
template <typename Scalar = double>
ComplexMatrix<Scalar> build_combiner(const std::vector<ComplexMatrix<Scalar>>& channels,
                                     const std::vector<ComplexMatrix<Scalar>>& beams) {
  if (channels.empty() || channels.size() != beams.size())
    throw std::invalid_argument("build_combiner: need matching channel/beamformer lists");
  ComplexMatrix<Scalar> u = channels[0] * beams[0];
  for (size_t k = 1; k < channels.size(); ++k) u += channels[k] * beams[k];
  u /= Scalar(channels[0].rows());
  return u;
}

// Combined observation split into its exact signal / interference / noise
// parts.  The target of the estimate y is the superposition sum_k x_k.
template <typename Scalar = double>
struct TransmissionResult {
  ComplexVector<Scalar> y;               // U^H (received) / N_t, length L
  ComplexVector<Scalar> y_signal;        // per-node matched terms
  ComplexVector<Scalar> y_interference;  // cross-node terms
  ComplexVector<Scalar> y_noise;         // combined thermal noise
  Scalar err_signal = 0;                 // ||y_signal - sum_k x_k||
  Scalar err_interference = 0;           // ||y_interference||
  Scalar err_noise = 0;                  // ||y_noise||
  Scalar err_total = 0;                  // ||y - sum_k x_k||
};

// The estimate of the superposed symbol vector sum_k x_k.  The combiner
// normalization by beta = N_r N_t is already folded into y, so no further
// compensation factor is applied here.
template <typename Scalar = double>
ComplexVector<Scalar> compensated_estimate(const TransmissionResult<Scalar>& rx) {
  return rx.y;
}

// Runs one superposition through the channel.  The noise vector is drawn
// from noise_rng; sigma_z is the per-antenna noise standard deviation
// (E|z_i|^2 = sigma_z^2).  Per-node transmit power ||V_k x_k||^2 is checked
// against p_max.  decompose = false skips the O(K^2) signal/interference
// split (the y_* fields stay empty) and is what large Monte Carlo sweeps
// use; y itself is identical either way.
template <typename Scalar = double>
TransmissionResult<Scalar> transmit_and_combine(
    const std::vector<ComplexMatrix<Scalar>>& channels,
    const std::vector<ComplexMatrix<Scalar>>& beams,
    const std::vector<ComplexVector<Scalar>>& symbols, Scalar sigma_z,
    RngStream& noise_rng, Scalar p_max = Scalar(100), bool decompose = true) {
  const size_t K = channels.size();
  if (K == 0 || beams.size() != K || symbols.size() != K)
    throw std::invalid_argument("transmit_and_combine: list sizes must match");
  const int n_r = int(channels[0].rows());
  const int n_t = int(channels[0].cols());
  const int ell = int(symbols[0].size());
  const Scalar beta = Scalar(n_r) * Scalar(n_t);

  // Effective per-node channels and the total received signal.
  std::vector<ComplexMatrix<Scalar>> g(K);
  ComplexVector<Scalar> received = ComplexVector<Scalar>::Zero(n_r);
  ComplexVector<Scalar> target = ComplexVector<Scalar>::Zero(ell);
  for (size_t k = 0; k < K; ++k) {
    const Scalar power = (beams[k] * symbols[k]).squaredNorm();
    if (!(power <= p_max))
      throw std::runtime_error("transmit_and_combine: node " + std::to_string(k) +
                               " transmit power " + std::to_string(double(power)) +
                               " exceeds the cap " + std::to_string(double(p_max)));
    g[k] = channels[k] * beams[k];
    received += g[k] * symbols[k];
    target += symbols[k];
  }
  const ComplexVector<Scalar> z = sigma_z * random_cnormal_vector<Scalar>(n_r, noise_rng);

  ComplexMatrix<Scalar> g_sum = g[0];
  for (size_t k = 1; k < K; ++k) g_sum += g[k];

  TransmissionResult<Scalar> out;
  out.y = g_sum.adjoint() * (received + z) / beta;
  out.err_total = (out.y - target).norm();
  if (!decompose) return out;
  out.y_signal = ComplexVector<Scalar>::Zero(ell);
  out.y_interference = ComplexVector<Scalar>::Zero(ell);
  for (size_t k = 0; k < K; ++k) {
    const ComplexVector<Scalar> own = g[k] * symbols[k];
    out.y_signal += g[k].adjoint() * own / beta;
    out.y_interference += g[k].adjoint() * (received - own) / beta;
  }
  out.y_noise = g_sum.adjoint() * z / beta;
  out.err_signal = (out.y_signal - target).norm();
  out.err_interference = out.y_interference.norm();
  out.err_noise = out.y_noise.norm();
  return out;
}

}  // namespace veccomp
