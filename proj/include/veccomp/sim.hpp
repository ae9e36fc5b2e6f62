#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "veccomp/codec.hpp"
#include "veccomp/config.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// One Monte Carlo trial.  For codec scenarios f_true/f_hat hold the target
// function value and its decoded estimate; for raw-sum scenarios they hold
// the real/imaginary stacking of r and r_hat, so the squared error equals
// ||r - r_hat||^2 in every case.  r is the noiseless sum of the raw
// (pre-scaling) symbol vectors and r_hat the receiver's estimate of it.
struct TrialRecord {
  RealVector<double> f_true;
  RealVector<double> f_hat;
  ComplexVector<double> r;
  ComplexVector<double> r_hat;
  double sum_power = 0.0;  // ||sum_k x_k||^2 of the power-normalized symbols
};

enum class Normalization { kSumSymbolPower, kFunctionPower };

const char* to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

// A config bound to its designed codec and power normalization, ready to run.
// symbol_scale = 1/sqrt(mean per-node symbol-vector energy) puts the average
// transmit energy at 1 so snr_db means SNR = 1/sigma_z^2.
struct Scenario {
  ScenarioConfig config;
  std::shared_ptr<const Codec> codec;  // null for raw-sum
  double symbol_scale = 1.0;
  double sigma_z = 0.0;  // per-entry noise std in the scaled domain
};

// Builds the codec for the configured family (designing constellations or
// drawing kernel/coefficients from the seed where needed) and freezes the
// derived constants.  Throws ConfigError for inconsistent requests and
// propagates design/solver failures.
Scenario prepare_scenario(const ScenarioConfig& config);

// Runs trial `trial` of the scenario.  Deterministic in (config.seed, trial):
// every random draw comes from a stream addressed by those values, never from
// shared mutable state.
TrialRecord run_trial(const Scenario& scenario, long trial);

// Runs trials [0, config.trials) across `threads` workers (0 = pick a
// sensible default).  The record vector is identical for every thread count.
std::vector<TrialRecord> run_trials(const Scenario& scenario, int threads = 0);

struct NmseEstimate {
  double mean = 0.0;
  double stderror = 0.0;
  long trials = 0;
};

// Ratio-of-means estimate: mean ||target - estimate||^2 over mean normalizer,
// where the normalizer is the scaled symbol-sum power or ||f_true||^2.  The
// standard error treats the denominator as a constant.
NmseEstimate nmse(const std::vector<TrialRecord>& records, Normalization normalization);

// Sweeps: one section per curve (single-curve sweeps have exactly one), one
// row per axis value.
struct SweepPoint {
  double axis_value = 0.0;
  NmseEstimate estimate;
};

struct SweepSection {
  ScenarioConfig config;  // fully resolved config for this curve
  std::string curve_key;  // second sweep dimension, "" when absent
  double curve_value = 0.0;
  std::string axis;
  std::vector<SweepPoint> points;
  std::map<std::string, std::string> extra_metadata;  // e.g. channel_uses
};

struct SweepResult {
  std::vector<SweepSection> sections;
};

struct SweepSpec {
  ScenarioConfig base;
  std::string axis;  // config key varied along rows: N_r | N_t | K | L | Q | snr_db
  std::vector<double> axis_values;
  std::string curve_key;  // optional second dimension (one CSV section per value)
  std::vector<double> curve_values;
};

// Applies one sweep key to a config ("Q" also retargets pam coefficient
// alphabets so aggregate order Q*Q_k tracks the axis; "N_r" keeps N_t).
ScenarioConfig apply_sweep_value(ScenarioConfig config, const std::string& key,
                                 double value);

SweepResult run_sweep(const SweepSpec& spec, int threads = 0);

// Single-point convenience used by `simulate`: one section, axis snr_db.
SweepResult run_single(const ScenarioConfig& config, int threads = 0);

// Orthogonal per-node AWGN reference: each node gets its own noisy channel
// use (K uses total, recorded in metadata), the receiver decodes every
// node's input individually and applies the function to the decoded tuple.
SweepResult baseline_wideband(const ScenarioConfig& config, int threads = 0);

// CSV emission: per section, `#key=value` header lines covering every config
// field plus sweep metadata, then `axis,nmse_mean,nmse_stderr,trials` rows
// with 17-significant-digit decimals.  No timestamps; byte-stable.
std::string sweep_to_csv(const SweepResult& result);

// Named experiment presets (fig2, fig3, fig5-text, fig5-caption, fig6).
struct Preset {
  std::string name;
  std::string description;
  SweepSpec spec;
  bool baseline = false;  // run the orthogonal reference instead of the MAC
};

std::vector<std::string> preset_names();
Preset get_preset(const std::string& name);

}  // namespace veccomp
