#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <string>

#include "veccomp/config.hpp"

using namespace veccomp;

namespace {

// Smallest config that parses: the seven required keys.
const char* kMinimal =
    "codec = raw-sum\n"
    "K = 2\n"
    "Q = 2\n"
    "L = 1\n"
    "snr_db = 20\n"
    "trials = 10\n"
    "seed = 1\n";

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& err) {
    return err.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  ScenarioConfig cfg = parse_scenario_config(kMinimal);
  CHECK(cfg.codec == "raw-sum");
  CHECK(cfg.K == 2);
  CHECK(cfg.L == 1);
  CHECK(cfg.q_list == std::vector<int>{2, 2});  // single Q broadcast across nodes
  CHECK(cfg.snr_db == 20.0);
  CHECK(cfg.trials == 10);
  CHECK(cfg.seed == 1);
  CHECK(cfg.n_r == 0);  // codec-only protocol by default
  CHECK(cfg.n_t == 0);
  CHECK(cfg.alpha_corr == 0.0);
  CHECK(cfg.sigma_h == 1.0);
  CHECK(cfg.beamformer == "isometric");
  CHECK(cfg.normalization == "sum-symbol-power");
  CHECK(cfg.function == "sum");
  CHECK(cfg.baseline == false);
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
  std::string text =
      "# scenario file\n"
      "\n"
      "codec=raw-sum   # trailing comment\n"
      "  K =   3\n"
      "Q = 2, 3 ,4\n"
      "L=1\n"
      "snr_db = -2.5\n"
      "trials = 1\n"
      "seed = 42\n";
  ScenarioConfig cfg = parse_scenario_config(text);
  CHECK(cfg.K == 3);
  CHECK(cfg.q_list == std::vector<int>{2, 3, 4});
  CHECK(cfg.snr_db == -2.5);
  CHECK(cfg.seed == 42);
}

TEST_CASE("serialize/parse round-trips equal configs") {
  // Codec-only scenario with per-node coefficient cardinalities.
  ScenarioConfig a = parse_scenario_config(
      "codec = pam-affine\nK = 3\nQ = 4\nL = 2\nsnr_db = 12.5\ntrials = 100\n"
      "seed = 7\ncoeff_cardinalities = 4,8,4\nnormalization = function-power\n");
  CHECK(a.coeff_cardinalities == std::vector<int>{4, 8, 4});
  CHECK(parse_scenario_config(serialize_scenario_config(a)) == a);

  // Per-node input cardinalities round-trip on the table-design codecs.
  ScenarioConfig a2 = parse_scenario_config(
      "codec = exact\nK = 3\nQ = 4,8,4\nL = 2\nsnr_db = 12.5\ntrials = 100\n"
      "seed = 7\nfunction = random\n");
  CHECK(parse_scenario_config(serialize_scenario_config(a2)) == a2);

  // Full channel scenario with correlation and an explicit gaussian beamformer.
  ScenarioConfig b = parse_scenario_config(
      "codec = sdp\nK = 2\nQ = 2\nL = 2\nsnr_db = 20\ntrials = 50\nseed = 9\n"
      "N_r = 16\nN_t = 4\nalpha_corr = 0.3\nsigma_h = 2.5\nbeamformer = gaussian\n"
      "function = max\n");
  CHECK(parse_scenario_config(serialize_scenario_config(b)) == b);

  // Convolution codec with an explicit kernel, plus a random-table scenario
  // whose value_range must survive the round trip.
  ScenarioConfig c = parse_scenario_config(
      "codec = qam-conv\nK = 2\nQ = 4\nL = 3\nsnr_db = 15\ntrials = 10\nseed = 3\n"
      "kernel = 1,0,3,2\n");
  CHECK(parse_scenario_config(serialize_scenario_config(c)) == c);

  ScenarioConfig d = parse_scenario_config(
      "codec = exact\nK = 2\nQ = 3\nL = 1\nsnr_db = 10\ntrials = 10\nseed = 5\n"
      "function = random\nvalue_range = 7\nbaseline = true\n");
  CHECK(parse_scenario_config(serialize_scenario_config(d)) == d);

  ScenarioConfig e = parse_scenario_config(
      "codec = sdp\nK = 2\nQ = 2\nL = 1\nsnr_db = 0\ntrials = 10\nseed = 1\n"
      "function_file = /tmp/table.txt\n");
  CHECK(parse_scenario_config(serialize_scenario_config(e)) == e);

  // Fractional doubles survive exactly (17 significant digits).
  ScenarioConfig f = a;
  f.snr_db = 1.0 / 3.0;
  f.alpha_corr = 0.1;
  f.sigma_h = 0.77777777777777779;
  CHECK(parse_scenario_config(serialize_scenario_config(f)) == f);
}

TEST_CASE("unknown keys are rejected by name with their line") {
  std::string text = std::string(kMinimal) + "bogus_key = 5\n";
  std::string msg =
      message_of([&] { (void)parse_scenario_config(text); });
  CHECK(msg.find("unknown key 'bogus_key'") != std::string::npos);
  CHECK(msg.find("line 8") != std::string::npos);

  // Multiple unknown keys are all named.
  std::string two = std::string(kMinimal) + "first_bad = 1\nsecond_bad = 2\n";
  std::string msg2 = message_of([&] { (void)parse_scenario_config(two); });
  CHECK(msg2.find("first_bad") != std::string::npos);
  CHECK(msg2.find("second_bad") != std::string::npos);
}

TEST_CASE("missing required keys are listed together") {
  std::string msg = message_of(
      [] { (void)parse_scenario_config("codec = raw-sum\nL = 1\nsnr_db = 0\n"); });
  CHECK(msg.find("missing:") != std::string::npos);
  CHECK(msg.find("K") != std::string::npos);
  CHECK(msg.find("Q") != std::string::npos);
  CHECK(msg.find("trials") != std::string::npos);
  CHECK(msg.find("seed") != std::string::npos);
  // Keys that were present are not listed.
  CHECK(msg.find("snr_db") == std::string::npos);
  CHECK(msg.find("L,") == std::string::npos);
}

TEST_CASE("a channel run without N_t reports exactly that key") {
  std::string text = std::string(kMinimal) + "N_r = 8\n";
  std::string msg = message_of([&] { (void)parse_scenario_config(text); });
  CHECK(msg == "missing: N_t");
}

TEST_CASE("type mismatches carry the offending line number") {
  std::string text =
      "codec = raw-sum\n"
      "K = 2\n"
      "Q = 2\n"
      "L = 1\n"
      "snr_db = 20\n"
      "trials = lots\n"
      "seed = 1\n";
  std::string msg = message_of([&] { (void)parse_scenario_config(text); });
  CHECK(msg.find("line 6") != std::string::npos);
  CHECK(msg.find("trials") != std::string::npos);
  CHECK(msg.find("lots") != std::string::npos);

  std::string bad_bool = std::string(kMinimal) + "baseline = yes\n";
  std::string msg2 = message_of([&] { (void)parse_scenario_config(bad_bool); });
  CHECK(msg2.find("line 8") != std::string::npos);
  CHECK(msg2.find("baseline") != std::string::npos);

  std::string bad_double =
      "codec = raw-sum\nK = 2\nQ = 2\nL = 1\nsnr_db = tall\ntrials = 1\nseed = 1\n";
  std::string msg3 = message_of([&] { (void)parse_scenario_config(bad_double); });
  CHECK(msg3.find("line 5") != std::string::npos);

  std::string negative_seed =
      "codec = raw-sum\nK = 2\nQ = 2\nL = 1\nsnr_db = 0\ntrials = 1\nseed = -4\n";
  std::string msg4 = message_of([&] { (void)parse_scenario_config(negative_seed); });
  CHECK(msg4.find("line 7") != std::string::npos);
  CHECK(msg4.find("seed") != std::string::npos);
}

TEST_CASE("stream count above min{N_r, N_t} is rejected with the constraint") {
  std::string text =
      "codec = raw-sum\nK = 2\nQ = 2\nL = 8\nsnr_db = 0\ntrials = 1\nseed = 1\n"
      "N_r = 16\nN_t = 4\n";
  std::string msg = message_of([&] { (void)parse_scenario_config(text); });
  CHECK(msg.find("L=8") != std::string::npos);
  CHECK(msg.find("min{N_r, N_t}=4") != std::string::npos);
  CHECK(msg.find("stream") != std::string::npos);
}

TEST_CASE("malformed lines and duplicates are rejected") {
  CHECK_THROWS_AS((void)parse_scenario_config("codec raw-sum\n"), ConfigError);
  std::string dup = std::string(kMinimal) + "K = 5\n";
  std::string msg = message_of([&] { (void)parse_scenario_config(dup); });
  CHECK(msg.find("duplicate key 'K'") != std::string::npos);
  CHECK(msg.find("line 8") != std::string::npos);
}

TEST_CASE("scenario cross-field validation") {
  // alpha_corr = 1 is outside the supported correlation domain.
  std::string corr = std::string(kMinimal) + "alpha_corr = 1.0\n";
  CHECK_THROWS_AS((void)parse_scenario_config(corr), ConfigError);

  // Kernel length must match L + K - 1.
  std::string short_kernel =
      "codec = qam-conv\nK = 2\nQ = 4\nL = 3\nsnr_db = 0\ntrials = 1\nseed = 1\n"
      "kernel = 1,2\n";
  std::string msg = message_of([&] { (void)parse_scenario_config(short_kernel); });
  CHECK(msg.find("kernel length 2") != std::string::npos);

  // Kernel entries must be digits of the common alphabet.
  std::string big_entry =
      "codec = qam-conv\nK = 2\nQ = 4\nL = 1\nsnr_db = 0\ntrials = 1\nseed = 1\n"
      "kernel = 1,9\n";
  CHECK_THROWS_AS((void)parse_scenario_config(big_entry), ConfigError);

  // The convolution codec needs one common Q.
  std::string mixed_q =
      "codec = qam-conv\nK = 2\nQ = 4,8\nL = 2\nsnr_db = 0\ntrials = 1\nseed = 1\n";
  CHECK_THROWS_AS((void)parse_scenario_config(mixed_q), ConfigError);

  // Baseline needs a decodable codec; raw-sum has none.
  std::string base = std::string(kMinimal) + "baseline = true\n";
  CHECK_THROWS_AS((void)parse_scenario_config(base), ConfigError);

  // Q entries below 2 and a Q list of the wrong length.
  std::string tiny_q =
      "codec = raw-sum\nK = 2\nQ = 1\nL = 1\nsnr_db = 0\ntrials = 1\nseed = 1\n";
  CHECK_THROWS_AS((void)parse_scenario_config(tiny_q), ConfigError);
  std::string wrong_len =
      "codec = raw-sum\nK = 3\nQ = 2,2\nL = 1\nsnr_db = 0\ntrials = 1\nseed = 1\n";
  CHECK_THROWS_AS((void)parse_scenario_config(wrong_len), ConfigError);

  // Unsupported enum values.
  std::string bad_codec =
      "codec = turbo\nK = 2\nQ = 2\nL = 1\nsnr_db = 0\ntrials = 1\nseed = 1\n";
  CHECK_THROWS_AS((void)parse_scenario_config(bad_codec), ConfigError);
  std::string bad_beam = std::string(kMinimal) + "beamformer = zero-forcing\n";
  CHECK_THROWS_AS((void)parse_scenario_config(bad_beam), ConfigError);
  std::string bad_norm = std::string(kMinimal) + "normalization = per-node\n";
  CHECK_THROWS_AS((void)parse_scenario_config(bad_norm), ConfigError);
  std::string bad_fn =
      "codec = sdp\nK = 2\nQ = 2\nL = 1\nsnr_db = 0\ntrials = 1\nseed = 1\n"
      "function = median\n";
  CHECK_THROWS_AS((void)parse_scenario_config(bad_fn), ConfigError);
}

TEST_CASE("bound config parses with defaults and validation") {
  BoundInputs b = parse_bound_config("L = 2\nK = 2\nepsilon = 0.5\ndelta = 0.1\n");
  CHECK(b.L == 2);
  CHECK(b.K == 2);
  CHECK(b.epsilon == 0.5);
  CHECK(b.delta == 0.1);
  CHECK(b.gamma1 == 2.0);  // defaults to K (sum of unit-norm symbol vectors)
  CHECK(b.gamma2 == 2.0);
  CHECK(b.sigma_z == 1.0);
  CHECK(b.c0 == 2.0);

  BoundInputs c = parse_bound_config(serialize_bound_config(b));
  CHECK(c.gamma1 == b.gamma1);
  CHECK(c.epsilon == b.epsilon);

  // Validation failures surface as config errors, not bare invalid_argument.
  CHECK_THROWS_AS((void)parse_bound_config("L = 2\nK = 2\nepsilon = 0\ndelta = 0.1\n"),
                  ConfigError);
  std::string msg = message_of([] {
    (void)parse_bound_config("L = 2\nepsilon = 0.5\n");
  });
  CHECK(msg.find("missing:") != std::string::npos);
  CHECK(msg.find("K") != std::string::npos);
  CHECK(msg.find("delta") != std::string::npos);
}

TEST_CASE("eigen check config") {
  EigenCheckConfig cfg = parse_eigen_check_config("N_r = 256\nN_t = 8\n");
  CHECK(cfg.n_r == 256);
  CHECK(cfg.n_t == 8);
  CHECK(cfg.sigma == 1.0);
  CHECK(cfg.trials == 200);
  CHECK(cfg.seed == 1);

  EigenCheckConfig full = parse_eigen_check_config(
      "N_r = 64\nN_t = 4\nsigma = 2.0\ntrials = 10\nseed = 5\n");
  CHECK(full.sigma == 2.0);
  CHECK(full.trials == 10);
  CHECK(full.seed == 5);

  CHECK_THROWS_AS((void)parse_eigen_check_config("N_r = 4\nN_t = 8\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_eigen_check_config("N_r = 8\nN_t = 4\ntrials = 0\n"),
                  ConfigError);
}

TEST_CASE("tail check config") {
  TailCheckConfig cfg = parse_tail_check_config(
      "K = 2\nN_r = 613\nN_t = 2\nL = 2\nepsilon = 0.5\n");
  CHECK(cfg.scenario.K == 2);
  CHECK(cfg.scenario.n_r == 613);
  CHECK(cfg.scenario.n_t == 2);
  CHECK(cfg.scenario.ell == 2);
  CHECK(cfg.epsilon == 0.5);
  CHECK(cfg.trials == 500);
  CHECK(cfg.scenario.mode == BeamformerMode::kIsometric);

  TailCheckConfig gauss = parse_tail_check_config(
      "K = 2\nN_r = 64\nN_t = 4\nL = 2\nepsilon = 1.0\nbeamformer = gaussian\n"
      "trials = 200\nsigma_z = 0.5\nseed = 11\n");
  CHECK(gauss.scenario.mode == BeamformerMode::kGaussian);
  CHECK(gauss.scenario.sigma_z == 0.5);
  CHECK(gauss.trials == 200);

  // Stream-count constraint applies here too.
  std::string msg = message_of([] {
    (void)parse_tail_check_config("K = 2\nN_r = 8\nN_t = 2\nL = 4\nepsilon = 0.5\n");
  });
  CHECK(msg.find("min{N_r, N_t}=2") != std::string::npos);
  CHECK_THROWS_AS((void)parse_tail_check_config(
                      "K = 2\nN_r = 8\nN_t = 2\nL = 2\nepsilon = 0.5\ntrials = 50\n"),
                  ConfigError);
}
