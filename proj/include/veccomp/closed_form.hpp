#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "veccomp/field_function.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Analytic codecs for two structured function families.  Both bypass the
// optimization-based design: the encoder/decoder pair is written in closed
// form, with integer arithmetic end to end; values become floating complex
// only at the channel boundary.

// Affine transform f_l(s) = sum_k A(l,k) s_k + b(l), with inputs s_k in
// {0..Q-1} shared across nodes and coefficients A(l,k) in {0..Q_list[k]-1}.
struct AffineSpec {
  int K = 0;
  int Q = 0;                // input alphabet size
  std::vector<int> Q_list;  // per-node coefficient alphabet sizes
  IntMatrix A;              // L x K coefficient matrix
  IntVector b;              // length-L offsets

  int L() const { return int(A.rows()); }

  void validate() const {
    if (K < 1 || Q < 2) throw std::invalid_argument("affine spec: need K >= 1 and Q >= 2");
    if (int(Q_list.size()) != K)
      throw std::invalid_argument("affine spec: need one coefficient alphabet per node");
    if (A.cols() != K || b.size() != A.rows() || A.rows() < 1)
      throw std::invalid_argument("affine spec: inconsistent A/b shapes");
    for (int k = 0; k < K; ++k) {
      if (Q_list[size_t(k)] < 2)
        throw std::invalid_argument("affine spec: coefficient alphabets must be >= 2");
      for (int l = 0; l < L(); ++l)
        if (A(l, k) < 0 || A(l, k) >= Q_list[size_t(k)])
          throw std::invalid_argument("affine spec: coefficient out of range");
    }
  }

  // Largest value the offset-free sum of products can take.
  std::int64_t sum_range() const {
    std::int64_t r = 0;
    for (int k = 0; k < K; ++k) r += std::int64_t(Q_list[size_t(k)] - 1) * (Q - 1);
    return r;
  }

  // Exact integer evaluation of the transform.
  RealVector<double> evaluate(const std::vector<int>& s) const {
    RealVector<double> f(L());
    for (int l = 0; l < L(); ++l) {
      std::int64_t acc = b[l];
      for (int k = 0; k < K; ++k) acc += std::int64_t(A(l, k)) * s[size_t(k)];
      f[l] = double(acc);
    }
    return f;
  }
};

// Node symbol for coefficient a and input s: the product shifted so the
// per-node constellation is centered, a*s - floor(Q*Q_k/2).
template <typename Scalar = double>
Scalar pam_encode(int a, int s, int Q, int Q_k) {
  if (a < 0 || a >= Q_k) throw std::invalid_argument("pam_encode: coefficient out of range");
  if (s < 0 || s >= Q) throw std::invalid_argument("pam_encode: input out of range");
  return Scalar(std::int64_t(a) * s - std::int64_t(Q) * Q_k / 2);
}

// Recovers f_l from the (noisy) superposition of the K node symbols:
// undo the offsets, round to the integer lattice, clamp to the reachable
// product range, then add the affine offset b_l.
template <typename Scalar = double>
Scalar pam_decode(Scalar y, int ell, const AffineSpec& spec) {
  if (ell < 0 || ell >= spec.L())
    throw std::invalid_argument("pam_decode: output index out of range");
  std::int64_t offset = 0;
  for (int k = 0; k < spec.K; ++k)
    offset += std::int64_t(spec.Q) * spec.Q_list[size_t(k)] / 2;
  const Scalar u = y + Scalar(offset);
  std::int64_t r = std::llround(double(u));
  r = std::max<std::int64_t>(0, std::min(spec.sum_range(), r));
  return Scalar(r + spec.b[ell]);
}

// Convolution family: f_l(s) = sum_k a[l+k-2] s_k (1-based), i.e. the product
// of the Hankel matrix of kernel a with the input vector.
struct ConvSpec {
  std::vector<int> a;  // kernel, entries in {0..Q-1}
  int K = 0;
  int Q = 0;

  int L() const { return int(a.size()) - K + 1; }

  RealVector<double> evaluate(const std::vector<int>& s) const {
    RealVector<double> f(L());
    for (int l = 0; l < L(); ++l) {
      std::int64_t acc = 0;
      for (int k = 0; k < K; ++k) acc += std::int64_t(a[size_t(l + k)]) * s[size_t(k)];
      f[l] = double(acc);
    }
    return f;
  }
};

inline ConvSpec conv_function_spec(std::vector<int> a, int K, int Q) {
  if (K < 1 || Q < 2) throw std::invalid_argument("conv spec: need K >= 1 and Q >= 2");
  if (int(a.size()) < K)
    throw std::invalid_argument("conv spec: kernel shorter than the node count");
  for (int v : a)
    if (v < 0 || v >= Q) throw std::invalid_argument("conv spec: kernel entry out of range");
  ConvSpec spec;
  spec.a = std::move(a);
  spec.K = K;
  spec.Q = Q;
  return spec;
}

// Constant-antidiagonal matrix H with H(l,k) = a[l+k] (0-based).
inline IntMatrix hankel_matrix(const ConvSpec& spec) {
  IntMatrix h(spec.L(), spec.K);
  for (int l = 0; l < spec.L(); ++l)
    for (int k = 0; k < spec.K; ++k) h(l, k) = spec.a[size_t(l + k)];
  return h;
}

// Maps an integer product v = a*s onto a square-QAM point: base-Q digits of v
// become the in-phase/quadrature components, centered on the origin.
template <typename Scalar = double>
Complex<Scalar> qam_encode(std::int64_t v, int Q) {
  if (Q < 2) throw std::invalid_argument("qam_encode: Q must be >= 2");
  if (v < 0 || v > std::int64_t(Q - 1) * (Q - 1))
    throw std::invalid_argument("qam_encode: value " + std::to_string(v) +
                                " outside [0, (Q-1)^2]");
  const std::int64_t hi = v / Q;
  const std::int64_t lo = v - Q * hi;
  // Components are integers shifted by (1-Q)/2; with Q even these are exact
  // half-integers, which doubles represent exactly.
  return {Scalar(2 * lo + 1 - Q) / Scalar(2), Scalar(2 * hi + 1 - Q) / Scalar(2)};
}

// Recovers the integer sum of K superposed products from a (noisy) complex
// observation: de-offset both components, round, clamp to the reachable digit
// ranges, and reassemble base-Q.
template <typename Scalar = double>
Scalar qam_decode(Complex<Scalar> y, int Q, int K) {
  if (Q < 2 || K < 1) throw std::invalid_argument("qam_decode: need Q >= 2 and K >= 1");
  const Scalar offset = Scalar(K) * Scalar(Q - 1) / Scalar(2);
  std::int64_t re = std::llround(double(y.real() + offset));
  std::int64_t im = std::llround(double(y.imag() + offset));
  re = std::max<std::int64_t>(0, std::min<std::int64_t>(std::int64_t(K) * (Q - 1), re));
  im = std::max<std::int64_t>(0, std::min<std::int64_t>(std::int64_t(K) * (Q - 2), im));
  return Scalar(re + Q * im);
}

// Channel symbol for node k on stream l under a convolution spec.
template <typename Scalar = double>
Complex<Scalar> conv_encode(const ConvSpec& spec, int ell, int k, int s) {
  if (ell < 0 || ell >= spec.L() || k < 0 || k >= spec.K)
    throw std::invalid_argument("conv_encode: index out of range");
  if (s < 0 || s >= spec.Q) throw std::invalid_argument("conv_encode: input out of range");
  return qam_encode<Scalar>(std::int64_t(spec.a[size_t(ell + k)]) * s, spec.Q);
}

// Tabulates the affine transform as a FunctionTable (small domains only).
inline FunctionTable<double> tabulate_affine(const AffineSpec& spec,
                                             std::int64_t max_rows = 1000000) {
  spec.validate();
  return tabulate_function<double>(
      [&spec](const std::vector<int>& s) {
        const auto f = spec.evaluate(s);
        return std::vector<double>(f.data(), f.data() + f.size());
      },
      spec.K, std::vector<int>(size_t(spec.K), spec.Q), spec.L(), max_rows);
}

// Tabulates the convolution transform as a FunctionTable (small domains only).
inline FunctionTable<double> tabulate_conv(const ConvSpec& spec,
                                           std::int64_t max_rows = 1000000) {
  return tabulate_function<double>(
      [&spec](const std::vector<int>& s) {
        const auto f = spec.evaluate(s);
        return std::vector<double>(f.data(), f.data() + f.size());
      },
      spec.K, std::vector<int>(size_t(spec.K), spec.Q), spec.L(), max_rows);
}

}  // namespace veccomp
