// Acceptance gate: one criterion per invocation, one PASS/FAIL line each.
// Usage: acceptance <1..9>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "veccomp/bounds.hpp"
#include "veccomp/channel.hpp"
#include "veccomp/closed_form.hpp"
#include "veccomp/codec.hpp"
#include "veccomp/field_function.hpp"
#include "veccomp/modulation.hpp"
#include "veccomp/sdp.hpp"
#include "veccomp/sim.hpp"

using namespace veccomp;

namespace {

struct CritResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// --- 1. Noiseless exactness of designed codecs -----------------------------
// Every function in {sum, product, max, sum-of-squares, random tabulated}
// with Q <= 4, K <= 3, L <= 4: SDP- and exact-designed codecs decode all Q^K
// inputs exactly over a noiseless channel.
CritResult criterion1() {
  long designs = 0, tuples = 0;
  auto check_table = [&](const FunctionTable<double>& table) -> bool {
    for (DesignMode mode : {DesignMode::kExact, DesignMode::kInexact}) {
      auto codec = make_table_codec(table, design_constellations(table, mode, 1));
      ++designs;
      for (int row = 0; row < table.rows(); ++row) {
        std::vector<int> s(static_cast<size_t>(table.K));
        for (int k = 0; k < table.K; ++k) s[static_cast<size_t>(k)] = table.inputs(row, k);
        ComplexVector<double> y = ComplexVector<double>::Zero(table.L);
        for (int k = 0; k < table.K; ++k) y += codec->encode(k, s[static_cast<size_t>(k)]);
        RealVector<double> f_hat = codec->decode(y);
        ++tuples;
        for (int l = 0; l < table.L; ++l) {
          if (f_hat[l] != table.values(row, l)) return false;
        }
      }
    }
    return true;
  };

  RngStream rng(0xacce901, 0, 0, Role::kGeneric);
  for (int K = 1; K <= 3; ++K) {
    for (int Q = 2; Q <= 4; ++Q) {
      for (const char* name : {"sum", "product", "max", "sum-of-squares"}) {
        if (!check_table(tabulate_named<double>(name, K, Q))) {
          return {false, std::string("decode mismatch for ") + name + " K=" +
                             std::to_string(K) + " Q=" + std::to_string(Q)};
        }
      }
      const int ell = K == 3 ? 2 : 4;  // vector-valued random tables, L <= 4
      // The design contract rejects constant output streams (nothing to
      // separate), so redraw the rare degenerate tables.
      FunctionTable<double> table = tabulate_random<double>(K, Q, ell, rng, 5);
      for (int attempt = 0; attempt < 100; ++attempt) {
        bool degenerate = false;
        for (int l = 0; l < table.L; ++l) {
          if (table.values.col(l).minCoeff() == table.values.col(l).maxCoeff())
            degenerate = true;
        }
        if (!degenerate) break;
        table = tabulate_random<double>(K, Q, ell, rng, 5);
      }
      if (!check_table(table)) {
        return {false, "decode mismatch for random table K=" + std::to_string(K) +
                           " Q=" + std::to_string(Q) + " L=" + std::to_string(ell)};
      }
    }
  }
  return {true, std::to_string(designs) + " designs, " + std::to_string(tuples) +
                    " noiseless decodes, all exact"};
}

// --- 2. Closed-form roundtrips --------------------------------------------
// PAM-affine and QAM-convolution exact over the noiseless MAC, exhaustively
// for Q, Q_k <= 8 and K <= 3 (all coefficient tuples / kernels, all inputs).
CritResult criterion2() {
  long checks = 0;
  // Affine family: every coefficient row a in [0,Q_k)^K.
  for (int K = 1; K <= 3; ++K) {
    for (int Q = 2; Q <= 8; ++Q) {
      for (int Qk = 2; Qk <= 8; ++Qk) {
        AffineSpec spec;
        spec.K = K;
        spec.Q = Q;
        spec.Q_list.assign(static_cast<size_t>(K), Qk);
        spec.A = IntMatrix::Zero(1, K);
        spec.b = IntVector::Zero(1);
        std::vector<int> a(static_cast<size_t>(K), 0);
        for (;;) {
          for (int k = 0; k < K; ++k) spec.A(0, k) = a[static_cast<size_t>(k)];
          bool ok = true;
          for_each_input(std::vector<int>(static_cast<size_t>(K), Q),
                         [&](std::int64_t, const std::vector<int>& s) {
                           double y = 0;
                           for (int k = 0; k < K; ++k) {
                             y += pam_encode<double>(a[static_cast<size_t>(k)],
                                                     s[static_cast<size_t>(k)], Q, Qk);
                           }
                           ++checks;
                           if (pam_decode<double>(y, 0, spec) != spec.evaluate(s)[0]) ok = false;
                         });
          if (!ok) {
            return {false, "pam mismatch at K=" + std::to_string(K) + " Q=" +
                               std::to_string(Q) + " Qk=" + std::to_string(Qk)};
          }
          int pos = K - 1;
          while (pos >= 0 && ++a[static_cast<size_t>(pos)] == Qk) {
            a[static_cast<size_t>(pos)] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
  // Convolution family: every kernel in [0,Q)^K (L = 1, exhaustive) plus
  // longer kernels L = 2 sampled exhaustively for Q <= 4.
  for (int K = 1; K <= 3; ++K) {
    for (int Q = 2; Q <= 8; ++Q) {
      for (int extra : {0, 1}) {
        if (extra == 1 && Q > 4) continue;  // keep the kernel space exhaustive yet bounded
        const int len = K + extra;
        std::vector<int> kernel(static_cast<size_t>(len), 0);
        for (;;) {
          const ConvSpec spec = conv_function_spec(kernel, K, Q);
          bool ok = true;
          for_each_input(std::vector<int>(static_cast<size_t>(K), Q),
                         [&](std::int64_t, const std::vector<int>& s) {
                           for (int l = 0; l < spec.L(); ++l) {
                             std::complex<double> y = 0;
                             for (int k = 0; k < K; ++k) {
                               y += conv_encode<double>(spec, l, k, s[static_cast<size_t>(k)]);
                             }
                             ++checks;
                             if (qam_decode<double>(y, Q, K) != spec.evaluate(s)[l]) ok = false;
                           }
                         });
          if (!ok) {
            return {false, "qam mismatch at K=" + std::to_string(K) + " Q=" +
                               std::to_string(Q) + " len=" + std::to_string(len)};
          }
          int pos = len - 1;
          while (pos >= 0 && ++kernel[static_cast<size_t>(pos)] == Q) {
            kernel[static_cast<size_t>(pos)] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
  return {true, std::to_string(checks) + " roundtrips, all exact"};
}

// --- helpers for the sweep criteria ----------------------------------------
bool monotone_non_increasing(const std::vector<SweepPoint>& points, double slack_sigmas,
                             std::string* why) {
  for (size_t i = 1; i < points.size(); ++i) {
    const auto& prev = points[i - 1].estimate;
    const auto& cur = points[i].estimate;
    if (cur.mean > prev.mean + slack_sigmas * (prev.stderror + cur.stderror)) {
      *why = "rise at axis=" + fmt(points[i].axis_value) + " (" + fmt(prev.mean) +
             " -> " + fmt(cur.mean) + ")";
      return false;
    }
  }
  return true;
}

// --- 3. Many-node NMSE drop with the array size ---------------------------
CritResult criterion3() {
  SweepResult result = run_sweep(get_preset("fig2").spec, 0);
  const auto& points = result.sections.front().points;
  const double first = points.front().estimate.mean;   // N_r = 10
  const double last = points.back().estimate.mean;     // N_r = 50
  const double reduction = 1.0 - last / first;
  std::string why;
  const bool mono = monotone_non_increasing(points, 2.0, &why);
  const bool drop = reduction >= 0.60;
  std::string detail = "nmse(N_r=10)=" + fmt(first) + ", nmse(N_r=50)=" + fmt(last) +
                       ", reduction=" + fmt(100 * reduction) + "% (need >=60%)";
  if (!mono) detail += "; not monotone within 2 SE: " + why;
  return {drop && mono, detail};
}

// --- 4. Flatness of NMSE in the node count --------------------------------
CritResult criterion4() {
  SweepResult result = run_sweep(get_preset("fig3").spec, 0);
  const auto& points = result.sections.front().points;
  double lo = points.front().estimate.mean, hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.estimate.mean);
    hi = std::max(hi, p.estimate.mean);
  }
  const double ratio = hi / lo;
  std::string detail = "max/min NMSE ratio over K in {4..32} = " + fmt(ratio) +
                       " (bound 1.15); the cross-node interference term (K-1)L/N_r "
                       "grows from " + fmt(3.0 * 4 / 512) + " to " + fmt(31.0 * 4 / 512) +
                       " against a self-interference floor near L/N_t=1, so the exact "
                       "second moments already put the ratio near 1.21";
  return {ratio <= 1.15, detail};
}

// --- 5. Antenna-count sufficiency -----------------------------------------
// At the sufficient N_r for (eps=0.5, delta=0.1, K=2, L=2, unit symbols,
// N_t = max{sigma_z^2, L}): empirical P(||r - r_hat|| <= eps) >= 1 - delta
// minus 3 sigma of binomial slack, over >= 500 trials.
CritResult criterion5() {
  BoundInputs inputs;
  inputs.L = 2;
  inputs.K = 2;
  inputs.gamma1 = 2.0;  // ||sum of K unit-norm symbol vectors|| <= K
  inputs.gamma2 = 2.0;
  inputs.epsilon = 0.5;
  inputs.delta = 0.1;
  inputs.sigma_z = 1.0;
  const long long n_r = min_receive_antennas(inputs);

  TailScenario scenario;
  scenario.K = 2;
  scenario.n_r = static_cast<int>(n_r);
  scenario.n_t = 2;  // max{sigma_z^2, L}
  scenario.ell = 2;
  scenario.sigma_h = 1.0;
  scenario.sigma_z = 1.0;
  scenario.corr = 0.0;
  scenario.mode = BeamformerMode::kIsometric;
  scenario.seed = 1;
  const int trials = 500;
  TailReport report = empirical_tail_probability(scenario, inputs.epsilon, trials);
  const double target = 1.0 - inputs.delta;
  const double slack = 3.0 * std::sqrt(inputs.delta * (1.0 - inputs.delta) / trials);
  const bool pass = report.p_total >= target - slack;
  return {pass, "N_r=" + std::to_string(n_r) + ": P(err<=0.5)=" + fmt(report.p_total) +
                    " vs threshold " + fmt(target - slack) + " (" +
                    std::to_string(trials) + " trials)"};
}

// --- 6. Convolution-codec SNR behaviour -----------------------------------
CritResult criterion6() {
  SweepResult result = run_sweep(get_preset("fig6").spec, 0);
  // Per-curve monotonicity in SNR.
  for (const auto& section : result.sections) {
    std::string why;
    if (!monotone_non_increasing(section.points, 2.0, &why)) {
      return {false, "curve Q=" + fmt(section.curve_value) + " not monotone: " + why};
    }
  }
  // Ordering: higher modulation order never beats a lower one beyond 2 SE.
  for (size_t c = 1; c < result.sections.size(); ++c) {
    const auto& lo = result.sections[c - 1];
    const auto& hi = result.sections[c];
    for (size_t i = 0; i < lo.points.size(); ++i) {
      const auto& a = lo.points[i].estimate;
      const auto& b = hi.points[i].estimate;
      if (b.mean < a.mean - 2.0 * (a.stderror + b.stderror)) {
        return {false, "ordering violated at snr=" + fmt(lo.points[i].axis_value) +
                           ": Q=" + fmt(hi.curve_value) + " below Q=" +
                           fmt(lo.curve_value)};
      }
    }
  }
  return {true, "3 curves x 6 SNR points: monotone and ordered within 2 SE"};
}

// --- 7. Concentration of the combined channel ------------------------------
CritResult criterion7() {
  EigenReport eig = eigen_concentration_check(2000, 8, 1.0, 200, 1);
  if (!eig.eigen_ok || !eig.cross_ok) {
    return {false, "eigen check failed: lambda in [" + fmt(eig.lambda_min) + "," +
                       fmt(eig.lambda_max) + "] vs [" + fmt(eig.envelope_low) + "," +
                       fmt(eig.envelope_high) + "], cross " + fmt(eig.cross_norm) +
                       " vs " + fmt(eig.cross_threshold)};
  }
  // Interference terms have zero mean: estimate over independent trials and
  // require the empirical mean to vanish within 4 sigma.
  const int trials = 2000, k_nodes = 2, n_r = 256, n_t = 8, ell = 4;
  ComplexVector<double> inter_mean = ComplexVector<double>::Zero(ell);
  double inter_power = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto channels = draw_channels<double>(k_nodes, n_r, n_t, {1.0, 1.0}, 0.0, 77, t);
    std::vector<std::uint64_t> seeds = {derive_seed(77, t, 0), derive_seed(77, t, 1)};
    auto beams = draw_beamformers<double>(n_t, ell, {1.0, 1.0},
                                          BeamformerMode::kIsometric, seeds);
    std::vector<ComplexVector<double>> symbols;
    for (int k = 0; k < k_nodes; ++k) {
      RngStream rng(77, t, static_cast<std::uint32_t>(k), Role::kSymbols);
      symbols.push_back(random_unit_vector<double>(ell, rng));
    }
    RngStream noise(77, t, 0, Role::kNoise);
    auto rx = transmit_and_combine<double>(channels, beams, symbols, 1.0, noise);
    inter_mean += rx.y_interference;
    inter_power += rx.y_interference.squaredNorm();
  }
  inter_mean /= trials;
  inter_power /= trials;
  const double bound = 4.0 * std::sqrt(inter_power / trials);
  const bool zero_mean = inter_mean.norm() <= bound;
  return {zero_mean, "eigen ok (lambda [" + fmt(eig.lambda_min) + "," +
                         fmt(eig.lambda_max) + "] in [" + fmt(eig.envelope_low) + "," +
                         fmt(eig.envelope_high) + "], cross " + fmt(eig.cross_norm) +
                         " <= " + fmt(eig.cross_threshold) + "); ||mean interference|| " +
                         fmt(inter_mean.norm()) + " <= 4 sigma bound " + fmt(bound)};
}

// --- 8. Margin SDP against closed forms and its own constraints ------------
CritResult criterion8() {
  // Single constraint |<alpha, x>|^2 >= E * gamma with tr W <= 1 has the
  // closed-form optimum E* = ||alpha||^2 / gamma.
  ComplexVector<double> alpha(3);
  alpha << std::complex<double>(1, 1), std::complex<double>(0, -2),
      std::complex<double>(2, 0);
  const double gamma = 3.0;
  auto single = solve_margin_sdp<double>({alpha}, {gamma});
  const double closed = alpha.squaredNorm() / gamma;
  if (std::abs(single.eps_star - closed) > 0.01 * closed) {
    return {false, "single-constraint eps*=" + fmt(single.eps_star) +
                       " vs closed form " + fmt(closed) + " (>1%)"};
  }

  // Multi-constraint instances: re-verify every solver output against its own
  // constraint set at tolerance 1e-6.
  struct Instance {
    const char* name;
    FunctionTable<double> table;
  };
  RngStream rng(0xacce908, 0, 0, Role::kGeneric);
  std::vector<Instance> instances;
  instances.push_back({"sum22", tabulate_named<double>("sum", 2, 2)});
  instances.push_back({"max23", tabulate_named<double>("max", 2, 3)});
  instances.push_back({"product23", tabulate_named<double>("product", 2, 3)});
  instances.push_back({"sum32", tabulate_named<double>("sum", 3, 2)});
  instances.push_back({"random24", tabulate_random<double>(2, 4, 2, rng, 5)});
  int verified = 0;
  for (const auto& inst : instances) {
    for (int ell = 0; ell < inst.table.L; ++ell) {
      const auto omega = build_omega(inst.table, ell);
      const auto alphas = design_detail::complex_alphas(inst.table, ell, omega);
      auto sol = solve_margin_sdp<double>(alphas, omega.gammas);
      // Trace feasibility.
      if (sol.W.trace().real() > 1.0 + 1e-6) {
        return {false, std::string(inst.name) + ": trace " + fmt(sol.W.trace().real()) +
                           " > 1 + 1e-6"};
      }
      // PSD within tolerance.
      Eigen::SelfAdjointEigenSolver<ComplexMatrix<double>> es(sol.W);
      if (es.eigenvalues().minCoeff() < -1e-6) {
        return {false, std::string(inst.name) + ": negative eigenvalue " +
                           fmt(es.eigenvalues().minCoeff())};
      }
      // Every constraint achieves the reported margin.
      const double margin = sdp_margin(sol.W, alphas, omega.gammas);
      if (margin < sol.eps_star - 1e-6) {
        return {false, std::string(inst.name) + ": constraint margin " + fmt(margin) +
                           " below eps* " + fmt(sol.eps_star) + " - 1e-6"};
      }
      ++verified;
    }
  }
  return {true, "single-constraint eps* within " +
                    fmt(100 * std::abs(single.eps_star - closed) / closed) +
                    "% of closed form; " + std::to_string(verified) +
                    " multi-constraint solves re-verified at 1e-6"};
}

// --- 9. Byte determinism of preset sweeps ---------------------------------
CritResult criterion9() {
  for (const char* name : {"fig6", "fig5-caption"}) {
    Preset preset = get_preset(name);
    std::string one = sweep_to_csv(run_sweep(preset.spec, 1));
    std::string eight = sweep_to_csv(run_sweep(preset.spec, 8));
    std::string again = sweep_to_csv(run_sweep(preset.spec, 8));
    if (one != eight) {
      return {false, std::string(name) + ": thread counts 1 and 8 disagree"};
    }
    if (eight != again) {
      return {false, std::string(name) + ": repeated run changed bytes"};
    }
  }
  return {true, "fig6 and fig5-caption: repeated runs and thread counts 1/8 "
                "byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
    return 2;
  }
  const int crit = std::atoi(argv[1]);
  if (crit < 1 || crit > 9) {
    std::fprintf(stderr, "criterion must be 1..9\n");
    return 2;
  }
  // Wall-clock budgets pinned by the criteria (seconds; 0 = unbudgeted).
  const double budgets[10] = {0, 120, 60, 600, 900, 1200, 900, 120, 0, 0};

  const auto t0 = std::chrono::steady_clock::now();
  CritResult result;
  try {
    switch (crit) {
      case 1: result = criterion1(); break;
      case 2: result = criterion2(); break;
      case 3: result = criterion3(); break;
      case 4: result = criterion4(); break;
      case 5: result = criterion5(); break;
      case 6: result = criterion6(); break;
      case 7: result = criterion7(); break;
      case 8: result = criterion8(); break;
      case 9: result = criterion9(); break;
    }
  } catch (const std::exception& err) {
    result = {false, std::string("exception: ") + err.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double budget = budgets[crit];
  if (budget > 0 && elapsed > budget) {
    result.pass = false;
    result.detail += "; exceeded the " + fmt(budget) + "s budget";
  }
  std::printf("criterion %d: %s — %s (%.1fs%s)\n", crit, result.pass ? "PASS" : "FAIL",
              result.detail.c_str(), elapsed,
              budget > 0 ? (std::string(" / budget ") + fmt(budget) + "s").c_str() : "");
  return result.pass ? 0 : 1;
}
