#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "veccomp/types.hpp"

namespace veccomp {

// Counter-based pseudo-random generator (Philox 4x32, 10 rounds).
//
// Every (seed, trial, node, role) tuple addresses an independent stream whose
// output depends only on that tuple and on the draw index within the stream --
// never on which thread runs a trial or in which order trials execute.  This
// is what makes multi-threaded sweeps bit-identical to single-threaded ones
// and lets any single trial be re-run in isolation.

namespace philox {

inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// One 128-bit block: counter -> 4 output words under a 64-bit key.
inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 4> ctr) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t prod0 = std::uint64_t(kMult0) * ctr[0];
    const std::uint64_t prod1 = std::uint64_t(kMult1) * ctr[2];
    ctr = {std::uint32_t(prod1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(prod1),
           std::uint32_t(prod0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(prod0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace philox

// Stream roles keep draws for different purposes independent within a trial.
enum class Role : std::uint32_t {
  kChannel = 0,     // fading matrix entries
  kBeamformer = 1,  // beamforming matrix entries
  kNoise = 2,       // receiver noise
  kSymbols = 3,     // per-node input selection
  kShared = 4,      // draws common to all nodes (correlated-channel core, kernels)
  kRounding = 5,    // randomized rounding candidates
  kGeneric = 6,
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint32_t trial, std::uint32_t node, Role role)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        prefix_{trial, node | (std::uint32_t(role) << 16)} {}

  std::uint32_t next_u32() {
    if (idx_ == 4) {
      buf_ = philox::block(key_, {std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                  prefix_[0], prefix_[1]});
      ++block_;
      idx_ = 0;
    }
    return buf_[idx_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    return (std::uint64_t(next_u32()) << 32) | lo;
  }

  // Uniform on (0,1): offset keeps 0 out so Box-Muller's log is always finite.
  double uniform() { return (next_u32() + 0.5) * 0x1p-32; }

  // Uniform integer in {0,...,n-1} without modulo bias (Lemire rejection).
  int uniform_int(int n) {
    const auto un = std::uint32_t(n);
    const std::uint32_t threshold = std::uint32_t(-un) % un;
    for (;;) {
      const std::uint64_t m = std::uint64_t(next_u32()) * un;
      if (std::uint32_t(m) >= threshold) return int(m >> 32);
    }
  }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Circularly-symmetric complex normal CN(0,1): variance 1/2 per component.
  std::complex<double> cnormal() {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    const double re = normal() * kInvSqrt2;
    const double im = normal() * kInvSqrt2;
    return {re, im};
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> prefix_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit mix of (seed, a, b), used to derive per-entity sub-seeds
// (e.g. the per-node beamformer seeds regenerated inside a trial).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t a, std::uint32_t b) {
  const auto out = philox::block({std::uint32_t(seed), std::uint32_t(seed >> 32)},
                                 {a, b, 0x5eedbead, 0x1});
  return (std::uint64_t(out[1]) << 32) | out[0];
}

// Fills a dense complex matrix with i.i.d. CN(0,1) entries in storage order.
template <typename Scalar = double>
ComplexMatrix<Scalar> random_cnormal_matrix(int rows, int cols, RngStream& rng) {
  ComplexMatrix<Scalar> m(rows, cols);
  auto* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto z = rng.cnormal();
    data[i] = Complex<Scalar>(Scalar(z.real()), Scalar(z.imag()));
  }
  return m;
}

template <typename Scalar = double>
ComplexVector<Scalar> random_cnormal_vector(int n, RngStream& rng) {
  ComplexVector<Scalar> v(n);
  for (int i = 0; i < n; ++i) {
    const auto z = rng.cnormal();
    v[i] = Complex<Scalar>(Scalar(z.real()), Scalar(z.imag()));
  }
  return v;
}

// Uniform draw from the complex unit sphere in C^n.
template <typename Scalar = double>
ComplexVector<Scalar> random_unit_vector(int n, RngStream& rng) {
  ComplexVector<Scalar> v = random_cnormal_vector<Scalar>(n, rng);
  const Scalar norm = v.norm();
  if (norm > Scalar(0)) v /= norm;
  return v;
}

}  // namespace veccomp
