#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "veccomp/closed_form.hpp"
#include "veccomp/field_function.hpp"

using namespace veccomp;

namespace {

AffineSpec make_affine(int K, int Q, int Q_k, const std::vector<int>& coeffs,
                       const std::vector<int>& offsets) {
  AffineSpec spec;
  spec.K = K;
  spec.Q = Q;
  spec.Q_list.assign(size_t(K), Q_k);
  const int L = int(coeffs.size()) / K;
  spec.A.resize(L, K);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) spec.A(l, k) = coeffs[size_t(l * K + k)];
  spec.b.resize(L);
  for (int l = 0; l < L; ++l) spec.b[l] = offsets[size_t(l)];
  spec.validate();
  return spec;
}

}  // namespace

TEST_CASE("pam_encode matches the closed form") {
  CHECK(pam_encode<double>(2, 3, 4, 4) == -2.0);
  for (int s = 0; s < 4; ++s) CHECK(pam_encode<double>(0, s, 4, 4) == -8.0);
  CHECK(pam_encode<double>(1, 0, 4, 4) == -8.0);
  CHECK_THROWS_AS(pam_encode<double>(4, 0, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(pam_encode<double>(0, 4, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(pam_encode<double>(-1, 0, 4, 4), std::invalid_argument);
}

TEST_CASE("pam_decode de-offsets, rounds, and clamps") {
  const auto spec = make_affine(1, 4, 4, {2}, {0});
  CHECK(pam_decode<double>(-2.0, 0, spec) == 6.0);   // noiseless point a*s = 6
  CHECK(pam_decode<double>(-1.7, 0, spec) == 6.0);   // inside the +-0.5 cell
  CHECK(pam_decode<double>(-100.0, 0, spec) == 0.0); // lower clamp
  CHECK(pam_decode<double>(100.0, 0, spec) == 9.0);  // upper clamp (Q_k-1)(Q-1)

  const auto with_offset = make_affine(1, 4, 4, {2}, {5});
  CHECK(pam_decode<double>(-100.0, 0, with_offset) == 5.0);
}

TEST_CASE("conv_function_spec builds the Hankel matrix") {
  const auto impulse = conv_function_spec({1, 0}, 1, 2);
  CHECK(impulse.L() == 2);
  CHECK(impulse.evaluate({1})[0] == 1.0);
  CHECK(impulse.evaluate({1})[1] == 0.0);

  const auto ones = conv_function_spec({1, 1, 1}, 2, 2);
  const auto h1 = hankel_matrix(ones);
  CHECK(h1 == IntMatrix::Ones(2, 2));
  CHECK(ones.evaluate({1, 1})[0] == 2.0);

  const auto ramp = conv_function_spec({0, 1, 2}, 2, 3);
  const auto h2 = hankel_matrix(ramp);
  REQUIRE(h2.rows() == 2);
  CHECK(h2(0, 0) == 0);
  CHECK(h2(0, 1) == 1);
  CHECK(h2(1, 0) == 1);
  CHECK(h2(1, 1) == 2);

  CHECK_THROWS_AS(conv_function_spec({1}, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(conv_function_spec({2}, 1, 2), std::invalid_argument);
}

TEST_CASE("qam_encode maps base-Q digits to centered components") {
  CHECK(qam_encode<double>(5, 4) == std::complex<double>(-0.5, -0.5));
  CHECK(qam_encode<double>(0, 4) == std::complex<double>(-1.5, -1.5));
  CHECK(qam_encode<double>(9, 4) == std::complex<double>(-0.5, 0.5));
  CHECK_THROWS_AS(qam_encode<double>(10, 4), std::invalid_argument);  // > (Q-1)^2
  CHECK_THROWS_AS(qam_encode<double>(-1, 4), std::invalid_argument);
}

TEST_CASE("qam_decode recovers superposed sums") {
  CHECK(qam_decode<double>({-0.5, -0.5}, 4, 1) == 5.0);
  CHECK(qam_decode<double>({-1.5, -1.5}, 4, 1) == 0.0);
  const std::complex<double> two_nodes =
      qam_encode<double>(5, 4) + qam_encode<double>(3, 4);
  CHECK(two_nodes == std::complex<double>(1.0, -2.0));
  CHECK(qam_decode<double>(two_nodes, 4, 2) == 8.0);
}

TEST_CASE("pam roundtrip is exact over sampled spec grids") {
  for (int K = 1; K <= 3; ++K) {
    for (int Q : {2, 4, 5}) {
      for (int Q_k : {2, 3, 5}) {
        // All coefficient choices for stream 0, all inputs, exhaustively.
        std::vector<int> a(size_t(K), 0);
        for (;;) {
          AffineSpec spec;
          spec.K = K;
          spec.Q = Q;
          spec.Q_list.assign(size_t(K), Q_k);
          spec.A.resize(1, K);
          for (int k = 0; k < K; ++k) spec.A(0, k) = a[size_t(k)];
          spec.b = IntVector::Constant(1, 3);
          spec.validate();

          for_each_input(std::vector<int>(size_t(K), Q),
                         [&](std::int64_t, const std::vector<int>& s) {
                           double y = 0;
                           for (int k = 0; k < K; ++k)
                             y += pam_encode<double>(spec.A(0, k), s[size_t(k)], Q, Q_k);
                           CHECK(pam_decode<double>(y, 0, spec) == spec.evaluate(s)[0]);
                         });

          int pos = K - 1;
          while (pos >= 0 && ++a[size_t(pos)] == Q_k) {
            a[size_t(pos)] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
}

TEST_CASE("qam roundtrip is exact over sampled kernel grids") {
  for (int K = 1; K <= 3; ++K) {
    for (int Q : {2, 4, 5}) {
      std::vector<int> kernel(size_t(K), 0);  // L = 1 kernels, exhaustively
      for (;;) {
        const auto spec = conv_function_spec(kernel, K, Q);
        for_each_input(std::vector<int>(size_t(K), Q),
                       [&](std::int64_t, const std::vector<int>& s) {
                         std::complex<double> y = 0;
                         for (int k = 0; k < K; ++k) y += conv_encode<double>(spec, 0, k, s[size_t(k)]);
                         CHECK(qam_decode<double>(y, Q, K) == spec.evaluate(s)[0]);
                       });
        int pos = K - 1;
        while (pos >= 0 && ++kernel[size_t(pos)] == Q) {
          kernel[size_t(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
  }
  // Multi-stream spot check.
  const auto spec = conv_function_spec({0, 1, 2, 3}, 2, 4);
  for_each_input({4, 4}, [&](std::int64_t, const std::vector<int>& s) {
    for (int l = 0; l < spec.L(); ++l) {
      std::complex<double> y = 0;
      for (int k = 0; k < 2; ++k) y += conv_encode<double>(spec, l, k, s[size_t(k)]);
      CHECK(qam_decode<double>(y, 4, 2) == spec.evaluate(s)[l]);
    }
  });
}

TEST_CASE("pam decode survives perturbations below half the cell width") {
  const auto spec = make_affine(2, 4, 4, {2, 3}, {1});
  for (double delta : {-0.49, -0.25, 0.0, 0.25, 0.49}) {
    for_each_input({4, 4}, [&](std::int64_t, const std::vector<int>& s) {
      double y = delta;
      for (int k = 0; k < 2; ++k)
        y += pam_encode<double>(spec.A(0, k), s[size_t(k)], 4, 4);
      CHECK(pam_decode<double>(y, 0, spec) == spec.evaluate(s)[0]);
    });
  }
}

TEST_CASE("closed-form encoders satisfy every separation constraint") {
  // The induced per-stream constellation must separate every input pair with
  // distinct function values -- the same feasibility the designed codecs
  // guarantee by optimization.
  const auto affine = make_affine(2, 3, 4, {2, 1, 3, 2}, {0, 1});
  const auto affine_table = tabulate_affine(affine);
  for (int l = 0; l < affine.L(); ++l) {
    ComplexVector<double> x(affine_table.block_length());
    for (int k = 0; k < affine.K; ++k)
      for (int q = 0; q < affine.Q; ++q)
        x[affine_table.block_offset(k) + q] =
            pam_encode<double>(affine.A(l, k), q, affine.Q, affine.Q_list[size_t(k)]);
    const auto omega = build_omega(affine_table, l);
    for (const auto& alpha : alpha_vectors(affine_table, l, omega))
      CHECK(std::abs(alpha.cast<std::complex<double>>().dot(x)) > 0.0);
  }

  const auto conv = conv_function_spec({1, 2, 0, 3}, 2, 4);
  const auto conv_table = tabulate_conv(conv);
  for (int l = 0; l < conv.L(); ++l) {
    ComplexVector<double> x(conv_table.block_length());
    for (int k = 0; k < conv.K; ++k)
      for (int q = 0; q < conv.Q; ++q)
        x[conv_table.block_offset(k) + q] = conv_encode<double>(conv, l, k, q);
    const auto omega = build_omega(conv_table, l);
    for (const auto& alpha : alpha_vectors(conv_table, l, omega))
      CHECK(std::abs(alpha.cast<std::complex<double>>().dot(x)) > 0.0);
  }
}
