#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veccomp/bounds.hpp"
#include "veccomp/errors.hpp"

namespace veccomp {

// Flat key = value configuration files: `#` starts a comment, blank lines are
// ignored, lists are comma separated.  Parsers apply documented defaults,
// validate cross-field constraints, and report precise errors (unknown keys
// by name, missing keys all at once, type mismatches with line numbers).

// One Monte Carlo experiment.  N_r = 0 selects the codec-only protocol
// (y = sum_k x_k + z with no fading); N_r > 0 runs the full multi-antenna
// channel and then requires N_t and L <= min{N_r, N_t}.
struct ScenarioConfig {
  std::string codec;             // sdp | exact | pam-affine | qam-conv | raw-sum
  int K = 0;                     // nodes
  int L = 0;                     // output streams
  std::vector<int> q_list;       // per-node input cardinalities
  double snr_db = 0.0;           // SNR = 1 / sigma_z^2, in dB
  long trials = 0;
  std::uint64_t seed = 0;
  int n_r = 0;                   // receive antennas; 0 = codec-only protocol
  int n_t = 0;                   // transmit antennas; required when n_r > 0
  double alpha_corr = 0.0;       // shared-fading weight in [0, 1)
  double sigma_h = 1.0;          // large-scale channel std (common to all nodes)
  std::string beamformer = "isometric";  // isometric | gaussian
  std::string normalization = "sum-symbol-power";  // or function-power
  std::string function = "sum";  // table-codec function name, or "random"
  std::string function_file;     // alternative: load a tabulated function
  int value_range = 5;           // label range for function = random
  std::vector<int> kernel;       // qam-conv kernel; empty = draw from seed
  std::vector<int> coeff_cardinalities;  // pam-affine coefficient alphabets
  bool baseline = false;         // orthogonal per-node AWGN baseline

  bool operator==(const ScenarioConfig&) const = default;

  // Cross-field checks shared by the parser and programmatic construction.
  void validate() const;
};

ScenarioConfig parse_scenario_config(const std::string& text);
std::string serialize_scenario_config(const ScenarioConfig& config);

// Antenna-bound calculator inputs (for the `bound` subcommand).
BoundInputs parse_bound_config(const std::string& text);
std::string serialize_bound_config(const BoundInputs& inputs);

// Eigenvalue concentration check inputs (for `check eigen`).
struct EigenCheckConfig {
  int n_r = 0;
  int n_t = 0;
  double sigma = 1.0;
  int trials = 200;
  std::uint64_t seed = 1;

  bool operator==(const EigenCheckConfig&) const = default;
};

EigenCheckConfig parse_eigen_check_config(const std::string& text);

// Tail-probability check inputs (for `check tail`).
struct TailCheckConfig {
  TailScenario scenario;
  double epsilon = 0.5;
  int trials = 500;

  bool operator==(const TailCheckConfig& other) const {
    return epsilon == other.epsilon && trials == other.trials &&
           scenario.K == other.scenario.K && scenario.n_r == other.scenario.n_r &&
           scenario.n_t == other.scenario.n_t && scenario.ell == other.scenario.ell &&
           scenario.sigma_h == other.scenario.sigma_h &&
           scenario.sigma_z == other.scenario.sigma_z &&
           scenario.corr == other.scenario.corr && scenario.mode == other.scenario.mode &&
           scenario.seed == other.scenario.seed;
  }
};

TailCheckConfig parse_tail_check_config(const std::string& text);

// Small file helper shared by the CLI and tests.
std::string read_text_file(const std::string& path);

}  // namespace veccomp
