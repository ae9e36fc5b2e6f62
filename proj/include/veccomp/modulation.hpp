#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "veccomp/errors.hpp"
#include "veccomp/field_function.hpp"
#include "veccomp/rng.hpp"
#include "veccomp/sdp.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Constellation design: produce, per output stream, a stacked symbol vector X
// (one block of Q_k symbols per node) such that superposed node symbols remain
// decodable to the function value.  Two design paths:
//   exact   -- constructive: a vector non-orthogonal to every difference
//              vector separates all pairs (no optimization);
//   inexact -- semidefinite relaxation maximizing the worst weighted
//              separation margin, then randomized rounding.

enum class DesignMode { kExact, kInexact };

template <typename Scalar = double>
struct Constellation {
  int ell = 0;
  ComplexVector<Scalar> X;       // length sum_k Q_k, unit norm (<= 1 + tol)
  Scalar eps_star = Scalar(0);   // achieved worst margin min_c |<a_c,X>|^2/gamma_c
  DesignMode mode = DesignMode::kExact;
};

// Returns a vector that is non-orthogonal to every input vector.
//
// Recursive construction: vectors orthogonal to the head are handled
// recursively, and the head is then mixed in strongly enough that no vector
// from the non-orthogonal part can cancel.  An empty input yields an empty
// (zero) vector; a zero member vector is rejected.
template <typename Scalar = double>
ComplexVector<Scalar> non_orth(const std::vector<ComplexVector<Scalar>>& vectors) {
  if (vectors.empty()) return ComplexVector<Scalar>();
  for (const auto& v : vectors)
    if (v.norm() == Scalar(0))
      throw std::invalid_argument("non_orth: zero member vector");

  struct Rec {
    const std::vector<ComplexVector<Scalar>>& vs;
    ComplexVector<Scalar> run(const std::vector<size_t>& idx) const {
      const auto& v1 = vs[idx.front()];
      std::vector<size_t> orth, non;
      for (size_t i : idx) {
        const Scalar ip = std::abs(vs[i].dot(v1));
        if (ip <= Scalar(kOrthogonalityTol) * vs[i].norm() * v1.norm())
          orth.push_back(i);
        else
          non.push_back(i);
      }
      if (orth.empty()) return v1;
      const ComplexVector<Scalar> y = run(orth);
      Scalar scale = Scalar(1);
      for (size_t i : non)
        scale = std::max(scale, std::abs(vs[i].dot(y)) / std::abs(vs[i].dot(v1)) + Scalar(1));
      return scale * v1 + y;
    }
  };
  std::vector<size_t> all(vectors.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Rec{vectors}.run(all);
}

namespace design_detail {

template <typename Scalar>
std::vector<ComplexVector<Scalar>> complex_alphas(const FunctionTable<Scalar>& table, int ell,
                                                  const OmegaSet<Scalar>& omega) {
  std::vector<ComplexVector<Scalar>> out;
  out.reserve(omega.size());
  for (const auto& a : alpha_vectors(table, ell, omega))
    out.push_back(a.template cast<Complex<Scalar>>());
  return out;
}

}  // namespace design_detail

// Constructive design: any unit vector non-orthogonal to every difference
// vector separates all distinguishable input pairs exactly.
template <typename Scalar = double>
Constellation<Scalar> exact_design(const FunctionTable<Scalar>& table, int ell) {
  const auto omega = build_omega(table, ell);
  if (omega.pairs.empty())
    throw DesignError("exact_design: stream " + std::to_string(ell) +
                      " has no separation constraints (constant function output)");
  const auto alphas = design_detail::complex_alphas(table, ell, omega);
  ComplexVector<Scalar> x = non_orth(alphas);
  x /= x.norm();
  Constellation<Scalar> c;
  c.ell = ell;
  c.X = std::move(x);
  c.mode = DesignMode::kExact;
  c.eps_star = constellation_margin(c.X, alphas, omega.gammas);
  return c;
}

// Rounds a relaxation solution W back to a vector: directly when W is
// numerically rank one, otherwise by ranking random candidates drawn from
// CN(0, W) (plus the top eigenvector) by their worst separation margin.
template <typename Scalar = double>
ComplexVector<Scalar> extract_constellation(const ComplexMatrix<Scalar>& W,
                                            const std::vector<ComplexVector<Scalar>>& alphas,
                                            const std::vector<Scalar>& gammas,
                                            RngStream& rng, int candidates = 100,
                                            Scalar* achieved_margin = nullptr) {
  const int n = int(W.rows());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> eig(W);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("extract_constellation: eigendecomposition failed");
  const auto& lambda = eig.eigenvalues();  // ascending
  const Scalar top = lambda[n - 1];
  if (!(top > Scalar(0)))
    throw DesignError("extract_constellation: relaxation solution is zero");

  ComplexVector<Scalar> best;
  if (n == 1 || lambda[n - 2] / top < Scalar(kRankOneTol)) {
    best = eig.eigenvectors().col(n - 1) * std::sqrt(top);
  } else {
    ComplexMatrix<Scalar> half = eig.eigenvectors();
    for (int i = 0; i < n; ++i)
      half.col(i) *= std::sqrt(std::max(lambda[i], Scalar(0)));
    best = eig.eigenvectors().col(n - 1);  // unit-norm seed candidate
    Scalar best_margin = constellation_margin(best, alphas, gammas);
    for (int c = 0; c < candidates; ++c) {
      ComplexVector<Scalar> cand = half * random_cnormal_vector<Scalar>(n, rng);
      const Scalar norm = cand.norm();
      if (norm == Scalar(0)) continue;
      cand /= norm;
      const Scalar margin = constellation_margin(cand, alphas, gammas);
      if (margin > best_margin) {
        best_margin = margin;
        best = std::move(cand);
      }
    }
  }
  const Scalar margin = constellation_margin(best, alphas, gammas);
  if (!(margin > Scalar(0)))
    throw DesignError("extract_constellation: rounding failed to separate all "
                      "constraints (margin " + std::to_string(double(margin)) + ")");
  if (achieved_margin) *achieved_margin = margin;
  return best;
}

// Relaxation-based design for one output stream.
template <typename Scalar = double>
Constellation<Scalar> sdp_design(const FunctionTable<Scalar>& table, int ell, RngStream& rng,
                                 const SdpOptions<Scalar>& opts = {},
                                 int rounding_candidates = 100) {
  if (table.block_length() > 64)
    throw std::invalid_argument("sdp_design: stacked dimension " +
                                std::to_string(table.block_length()) +
                                " exceeds the supported cap of 64");
  const auto omega = build_omega(table, ell);
  if (omega.pairs.empty())
    throw DesignError("sdp_design: stream " + std::to_string(ell) +
                      " has no separation constraints (constant function output)");
  const auto alphas = design_detail::complex_alphas(table, ell, omega);

  // Distinct difference vectors recur across many input pairs (the same
  // value change in one node block).  Deduplicate exact (alpha, gamma)
  // repeats: the feasible set -- and hence the optimum -- is unchanged.
  std::vector<ComplexVector<Scalar>> ded_alphas;
  std::vector<Scalar> ded_gammas;
  {
    std::map<std::pair<std::vector<int>, Scalar>, bool> seen;
    for (size_t c = 0; c < alphas.size(); ++c) {
      std::vector<int> key(size_t(alphas[c].size()));
      for (int p = 0; p < alphas[c].size(); ++p)
        key[size_t(p)] = int(std::lround(double(alphas[c][p].real())));
      if (seen.emplace(std::make_pair(std::move(key), omega.gammas[c]), true).second) {
        ded_alphas.push_back(alphas[c]);
        ded_gammas.push_back(omega.gammas[c]);
      }
    }
  }

  const auto sol = solve_margin_sdp<Scalar>(ded_alphas, ded_gammas, opts);
  Constellation<Scalar> c;
  c.ell = ell;
  c.mode = DesignMode::kInexact;
  c.X = extract_constellation<Scalar>(sol.W, ded_alphas, ded_gammas, rng,
                                      rounding_candidates, &c.eps_star);
  // Re-verify the rounded vector against the full, un-deduplicated
  // constraint list.
  const Scalar full_margin = constellation_margin(c.X, alphas, omega.gammas);
  if (!(full_margin >= c.eps_star - Scalar(kConstraintTol)))
    throw DesignError("sdp_design: rounded constellation violates a separation "
                      "constraint beyond tolerance");
  return c;
}

// Designs every output stream.  Stream l draws its rounding randomness from
// an independent, seed-addressed stream, so results do not depend on the
// order in which streams are processed.
template <typename Scalar = double>
std::vector<Constellation<Scalar>> design_constellations(const FunctionTable<Scalar>& table,
                                                         DesignMode mode, std::uint64_t seed,
                                                         const SdpOptions<Scalar>& opts = {},
                                                         int rounding_candidates = 100) {
  constexpr std::uint32_t kDesignTrial = 0xFFFFFFFFu;
  std::vector<Constellation<Scalar>> out;
  out.reserve(size_t(table.L));
  for (int ell = 0; ell < table.L; ++ell) {
    if (mode == DesignMode::kExact) {
      out.push_back(exact_design(table, ell));
    } else {
      RngStream rng(seed, kDesignTrial, std::uint32_t(ell), Role::kRounding);
      out.push_back(sdp_design(table, ell, rng, opts, rounding_candidates));
    }
  }
  return out;
}

// Runtime tables for one output stream: per-node encoder symbols plus the
// labeled induced sum constellation for nearest-point decoding.
template <typename Scalar = double>
struct StreamCodec {
  int ell = 0;
  std::vector<ComplexVector<Scalar>> encoders;  // node k -> Q_k symbols
  std::vector<Complex<Scalar>> points;          // deduplicated sum points
  std::vector<Scalar> labels;                   // function value per point
  Scalar dedup_tol = 0;                         // merge radius used at build time
};

// Slices the constellation into per-node encoder tables (E_k(q) = X at node
// k's block offset plus q) and tabulates the labeled sum points.
template <typename Scalar = double>
StreamCodec<Scalar> build_codec(const FunctionTable<Scalar>& table, int ell,
                                const Constellation<Scalar>& constellation) {
  if (constellation.X.size() != table.block_length())
    throw std::invalid_argument("build_codec: constellation size does not match table");
  StreamCodec<Scalar> codec;
  codec.ell = ell;
  codec.encoders.reserve(size_t(table.K));
  for (int k = 0; k < table.K; ++k)
    codec.encoders.push_back(
        constellation.X.segment(table.block_offset(k), table.Q[size_t(k)]));

  const int m = table.rows();
  std::vector<Complex<Scalar>> raw(static_cast<size_t>(m));
  Scalar max_mag = 0;
  for (int i = 0; i < m; ++i) {
    Complex<Scalar> p = 0;
    for (int k = 0; k < table.K; ++k) p += codec.encoders[size_t(k)][table.inputs(i, k)];
    raw[size_t(i)] = p;
    max_mag = std::max(max_mag, std::abs(p));
  }
  const Scalar tol = Scalar(kDedupTolScale) * max_mag;
  codec.dedup_tol = tol;
  for (int i = 0; i < m; ++i) {
    const Scalar label = table.values(i, ell);
    bool merged = false;
    for (size_t r = 0; r < codec.points.size(); ++r) {
      if (std::abs(raw[size_t(i)] - codec.points[r]) <= tol) {
        if (codec.labels[r] != label)
          throw DesignError(
              "build_codec: decoder label collision -- inputs with different values "
              "induce the same sum point (inconsistent design)");
        merged = true;
        break;
      }
    }
    if (!merged) {
      codec.points.push_back(raw[size_t(i)]);
      codec.labels.push_back(label);
    }
  }
  return codec;
}

// Nearest-point decoding; exact distance ties resolve to the lowest index.
template <typename Scalar = double>
Scalar decode(const StreamCodec<Scalar>& codec, Complex<Scalar> y) {
  if (codec.points.empty()) throw std::invalid_argument("decode: empty decoder table");
  size_t best = 0;
  Scalar best_d = std::norm(y - codec.points[0]);
  for (size_t i = 1; i < codec.points.size(); ++i) {
    const Scalar d = std::norm(y - codec.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return codec.labels[best];
}

// All L stream designs assembled into one runtime object: per-node encoder
// matrices E_k (row q holds the length-L symbol vector for input q) and one
// decoder table per stream.
template <typename Scalar = double>
struct DesignedCodec {
  int K = 0;
  int L = 0;
  std::vector<int> Q;                            // per-node input cardinality
  std::vector<ComplexMatrix<Scalar>> encoders;   // node k: Q_k x L
  std::vector<StreamCodec<Scalar>> decoders;     // one per stream
  std::vector<Scalar> eps_star;                  // per-stream achieved margin
  std::vector<DesignMode> modes;                 // per-stream design path

  ComplexVector<Scalar> encode(int k, int s) const {
    return encoders[size_t(k)].row(s).transpose();
  }
};

// Assembles the per-stream constellations into the aggregate codec; requires
// exactly one constellation per output stream.
template <typename Scalar = double>
DesignedCodec<Scalar> build_codec(const FunctionTable<Scalar>& table,
                                  const std::vector<Constellation<Scalar>>& constellations) {
  if (int(constellations.size()) != table.L)
    throw std::invalid_argument("build_codec: need one constellation per output stream");
  DesignedCodec<Scalar> codec;
  codec.K = table.K;
  codec.L = table.L;
  codec.Q = table.Q;
  codec.encoders.assign(size_t(table.K), ComplexMatrix<Scalar>());
  for (int k = 0; k < table.K; ++k)
    codec.encoders[size_t(k)].resize(table.Q[size_t(k)], table.L);
  for (int ell = 0; ell < table.L; ++ell) {
    const auto& cons = constellations[size_t(ell)];
    if (cons.ell != ell)
      throw std::invalid_argument("build_codec: constellation stream index mismatch");
    auto stream = build_codec(table, ell, cons);
    for (int k = 0; k < table.K; ++k)
      for (int q = 0; q < table.Q[size_t(k)]; ++q)
        codec.encoders[size_t(k)](q, ell) = stream.encoders[size_t(k)][q];
    codec.decoders.push_back(std::move(stream));
    codec.eps_star.push_back(cons.eps_star);
    codec.modes.push_back(cons.mode);
  }
  return codec;
}

// Per-stream nearest-point decode of a combined length-L observation.
template <typename Scalar = double>
RealVector<Scalar> decode_vector(const DesignedCodec<Scalar>& codec,
                                 const ComplexVector<Scalar>& y) {
  if (y.size() != codec.L)
    throw std::invalid_argument("decode_vector: observation length mismatch");
  RealVector<Scalar> out(codec.L);
  for (int ell = 0; ell < codec.L; ++ell)
    out[ell] = decode(codec.decoders[size_t(ell)], y[ell]);
  return out;
}

}  // namespace veccomp
