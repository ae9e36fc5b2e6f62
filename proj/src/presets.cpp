#include "veccomp/sim.hpp"

namespace veccomp {
namespace {

ScenarioConfig raw_sum_base() {
  ScenarioConfig cfg;
  cfg.codec = "raw-sum";
  cfg.q_list = {2};  // unused by raw-sum; kept so the config is complete
  cfg.seed = 1;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig5-text", "fig5-caption", "fig6"};
}

Preset get_preset(const std::string& name) {
  Preset preset;
  preset.name = name;
  if (name == "fig2") {
    // NMSE of the superposed-vector estimate vs receive antennas: many nodes,
    // fixed streams, moderate SNR.
    ScenarioConfig cfg = raw_sum_base();
    cfg.K = 100;
    cfg.L = 4;
    cfg.n_t = 4;
    cfg.n_r = 10;
    cfg.snr_db = 20.0;
    cfg.trials = 1000;
    cfg.beamformer = "gaussian";
    preset.description = "estimation NMSE vs receive antennas (K=100, N_t=L=4, 20 dB)";
    preset.spec.base = cfg;
    preset.spec.axis = "N_r";
    preset.spec.axis_values = {10, 20, 30, 40, 50};
    return preset;
  }
  if (name == "fig3") {
    // NMSE vs number of nodes at a large receive array; the curve should stay
    // nearly flat as interference averages out.
    ScenarioConfig cfg = raw_sum_base();
    cfg.K = 4;
    cfg.L = 4;
    cfg.n_t = 4;
    cfg.n_r = 512;
    cfg.snr_db = 5.0;
    cfg.trials = 10000;
    cfg.beamformer = "gaussian";
    preset.description = "estimation NMSE vs node count (N_r=512, N_t=L=4, 5 dB)";
    preset.spec.base = cfg;
    preset.spec.axis = "K";
    preset.spec.axis_values = {4, 8, 12, 16, 20, 24, 28, 32};
    return preset;
  }
  if (name == "fig5-text" || name == "fig5-caption") {
    // Computation NMSE vs SNR for the affine closed-form codec at several
    // modulation orders.  The figure's text and caption disagree on (K, L),
    // so both variants ship; curve values are the common input/coefficient
    // cardinality Q (aggregate constellation order Q*Q_k = Q^2).
    ScenarioConfig cfg;
    cfg.codec = "pam-affine";
    cfg.seed = 1;
    cfg.trials = 10000;
    if (name == "fig5-text") {
      cfg.K = 50;
      cfg.L = 5;
      preset.description =
          "affine-codec NMSE vs SNR (K=50, L=5; curves Q=Qk in {4,8,16,32})";
      preset.spec.curve_values = {4, 8, 16, 32};
    } else {
      cfg.K = 10;
      cfg.L = 10;
      preset.description =
          "affine-codec NMSE vs SNR (K=10, L=10; curves Q=Qk in {8,16,32})";
      preset.spec.curve_values = {8, 16, 32};
    }
    cfg.q_list = {4};  // placeholder; the curve key overwrites it
    cfg.snr_db = 0.0;
    preset.spec.base = cfg;
    preset.spec.axis = "snr_db";
    preset.spec.axis_values = {0, 5, 10, 15, 20, 25, 30};
    preset.spec.curve_key = "Q";
    return preset;
  }
  if (name == "fig6") {
    // Computation NMSE vs SNR for the convolution codec; per-node
    // constellation size is Q^2, curves Q in {4,8,16}.  The kernel is drawn
    // once from the seed (nonzero digits, length L+K-1).
    ScenarioConfig cfg;
    cfg.codec = "qam-conv";
    cfg.seed = 1;
    cfg.K = 2;
    cfg.L = 4;
    cfg.q_list = {4};
    cfg.snr_db = 5.0;
    cfg.trials = 10000;
    preset.description =
        "convolution-codec NMSE vs SNR (K=2, L=4; curves Q in {4,8,16})";
    preset.spec.base = cfg;
    preset.spec.axis = "snr_db";
    preset.spec.axis_values = {5, 10, 15, 20, 25, 30};
    preset.spec.curve_key = "Q";
    preset.spec.curve_values = {4, 8, 16};
    return preset;
  }
  throw ConfigError("unknown preset '" + name +
                    "' (available: fig2, fig3, fig5-text, fig5-caption, fig6)");
}

}  // namespace veccomp
