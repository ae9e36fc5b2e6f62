// Command-line driver: design codecs, run simulations and sweeps, evaluate
// antenna-count bounds, and execute statistical self-checks.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "veccomp/bounds.hpp"
#include "veccomp/codec.hpp"
#include "veccomp/config.hpp"
#include "veccomp/field_function.hpp"
#include "veccomp/modulation.hpp"
#include "veccomp/sdp.hpp"
#include "veccomp/sim.hpp"

namespace {

using namespace veccomp;

// Exit codes: 0 success, 1 runtime/check failure, 2 configuration error,
// 3 solver non-convergence, 4 design infeasibility.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigExit = 2;
constexpr int kSolverExit = 3;
constexpr int kDesignExit = 4;

struct GlobalOptions {
  bool seed_set = false;
  std::uint64_t seed = 0;
  int threads = 0;
  int verbosity = 0;
};

// Output paths resolve against $VECCOMP_OUT_DIR unless they already carry a
// directory component.
std::string resolve_output(const std::string& requested, const std::string& fallback) {
  std::string name = requested.empty() ? fallback : requested;
  if (name.find('/') != std::string::npos) return name;
  const char* dir = std::getenv("VECCOMP_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return name;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed to write output file: " + path);
}

ScenarioConfig load_scenario(const std::string& path, const GlobalOptions& global) {
  ScenarioConfig cfg = parse_scenario_config(read_text_file(path));
  if (global.seed_set) cfg.seed = global.seed;
  return cfg;
}

int cmd_design(const std::string& table_path, const std::string& method,
               const std::string& out_path, const GlobalOptions& global) {
  FunctionTable<double> table = read_function_table_file(table_path);
  DesignMode mode = method == "exact" ? DesignMode::kExact : DesignMode::kInexact;
  std::uint64_t seed = global.seed_set ? global.seed : 1;
  auto designs = design_constellations(table, mode, seed);
  auto codec = make_table_codec(table, designs);
  std::string resolved = resolve_output(out_path, "codec.json");
  save_codec(*codec, resolved);
  if (global.verbosity > 0) {
    for (const auto& d : designs) {
      std::fprintf(stderr, "stream %d: margin %.6g (%s)\n", d.ell, double(d.eps_star),
                   d.mode == DesignMode::kExact ? "exact" : "sdp");
    }
  }
  std::printf("wrote %s (K=%d, L=%d, %s design)\n", resolved.c_str(), table.K, table.L,
              mode == DesignMode::kExact ? "exact" : "sdp");
  return kOk;
}

int cmd_simulate(const std::string& cfg_path, const std::string& out_path,
                 const GlobalOptions& global) {
  ScenarioConfig cfg = load_scenario(cfg_path, global);
  if (global.verbosity > 0) {
    std::fputs(serialize_scenario_config(cfg).c_str(), stderr);
  }
  SweepResult result = run_single(cfg, global.threads);
  std::string resolved = resolve_output(out_path, "simulate.csv");
  write_file(resolved, sweep_to_csv(result));
  const auto& est = result.sections.front().points.front().estimate;
  std::printf("wrote %s (nmse %.6g +- %.2g over %ld trials)\n", resolved.c_str(),
              est.mean, est.stderror, est.trials);
  return kOk;
}

int cmd_sweep(const std::string& preset_name, const std::string& out_path,
              const GlobalOptions& global) {
  Preset preset = get_preset(preset_name);
  if (global.seed_set) preset.spec.base.seed = global.seed;
  if (global.verbosity > 0) {
    std::fprintf(stderr, "preset %s: %s\n", preset.name.c_str(),
                 preset.description.c_str());
  }
  SweepResult result = run_sweep(preset.spec, global.threads);
  std::string resolved = resolve_output(out_path, preset_name + ".csv");
  write_file(resolved, sweep_to_csv(result));
  size_t rows = 0;
  for (const auto& section : result.sections) rows += section.points.size();
  std::printf("wrote %s (%zu section(s), %zu points)\n", resolved.c_str(),
              result.sections.size(), rows);
  return kOk;
}

int cmd_bound(const std::string& cfg_path) {
  BoundInputs inputs = parse_bound_config(read_text_file(cfg_path));
  std::printf("receive_antennas_required = %lld\n",
              static_cast<long long>(min_receive_antennas(inputs)));
  std::printf("receive_antenna_bound_value = %.17g\n",
              receive_antenna_bound_value(inputs));
  std::printf("antenna_product_required = %lld\n",
              static_cast<long long>(min_antenna_product(inputs)));
  std::printf("antenna_product_bound_value = %.17g\n", antenna_product_bound_value(inputs));
  return kOk;
}

int cmd_check(const std::string& what, const std::string& cfg_path,
              const GlobalOptions& global) {
  std::string text = read_text_file(cfg_path);
  if (what == "eigen") {
    EigenCheckConfig cfg = parse_eigen_check_config(text);
    if (global.seed_set) cfg.seed = global.seed;
    EigenReport report =
        eigen_concentration_check(cfg.n_r, cfg.n_t, cfg.sigma, cfg.trials, cfg.seed);
    std::printf("lambda_min = %.17g (envelope_low = %.17g)\n", report.lambda_min,
                report.envelope_low);
    std::printf("lambda_max = %.17g (envelope_high = %.17g)\n", report.lambda_max,
                report.envelope_high);
    std::printf("cross_norm = %.17g (threshold = %.17g)\n", report.cross_norm,
                report.cross_threshold);
    std::printf("trials = %d\n", report.trials);
    std::printf("result = %s\n", report.eigen_ok && report.cross_ok ? "PASS" : "FAIL");
    return report.eigen_ok && report.cross_ok ? kOk : kFailure;
  }
  TailCheckConfig cfg = parse_tail_check_config(text);
  if (global.seed_set) cfg.scenario.seed = global.seed;
  TailReport report = empirical_tail_probability(cfg.scenario, cfg.epsilon, cfg.trials);
  std::printf("p_total = %.17g\n", report.p_total);
  std::printf("p_signal = %.17g\n", report.p_signal);
  std::printf("p_interference = %.17g\n", report.p_interference);
  std::printf("p_noise = %.17g\n", report.p_noise);
  std::printf("trials = %d\n", report.trials);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digital over-the-air computation: codec design, channel simulation, "
               "antenna bounds"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "override the config/preset seed")
      ->each([&global](const std::string&) { global.seed_set = true; });
  app.add_option("--threads", global.threads,
                 "worker threads (0 = auto; results are thread-count invariant)");
  app.add_flag("-v,--verbose", global.verbosity, "extra progress output on stderr");

  auto* design = app.add_subcommand("design", "design a codec for a tabulated function");
  std::string design_table, design_method = "sdp", design_out;
  design->add_option("-f,--function", design_table, "function table file")
      ->required()
      ->check(CLI::ExistingFile);
  design->add_option("-m,--method", design_method, "design method")
      ->check(CLI::IsMember({"sdp", "exact"}));
  design->add_option("-o,--output", design_out, "output codec JSON path");

  auto* simulate = app.add_subcommand("simulate", "run one configured scenario");
  std::string sim_cfg, sim_out;
  simulate->add_option("-c,--config", sim_cfg, "scenario config file")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("-o,--output", sim_out, "output CSV path");

  auto* sweep = app.add_subcommand("sweep", "run a named experiment preset");
  std::string sweep_preset, sweep_out;
  sweep->add_option("--preset", sweep_preset, "preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  sweep->add_option("-o,--output", sweep_out, "output CSV path");

  auto* bound = app.add_subcommand("bound", "evaluate antenna-count bounds");
  std::string bound_cfg;
  bound->add_option("-c,--config", bound_cfg, "bound config file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "statistical self-checks");
  std::string check_what, check_cfg;
  check->add_option("what", check_what, "which check to run")
      ->required()
      ->check(CLI::IsMember({"eigen", "tail"}));
  check->add_option("-c,--config", check_cfg, "check config file")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigExit;
  }

  try {
    if (design->parsed()) return cmd_design(design_table, design_method, design_out, global);
    if (simulate->parsed()) return cmd_simulate(sim_cfg, sim_out, global);
    if (sweep->parsed()) return cmd_sweep(sweep_preset, sweep_out, global);
    if (bound->parsed()) return cmd_bound(bound_cfg);
    if (check->parsed()) return cmd_check(check_what, check_cfg, global);
  } catch (const ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kConfigExit;
  } catch (const SdpNonConvergence& err) {
    std::fprintf(stderr, "solver did not converge: %s\n", err.what());
    return kSolverExit;
  } catch (const DesignError& err) {
    std::fprintf(stderr, "design infeasible: %s\n", err.what());
    return kDesignExit;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kFailure;
  }
  return kOk;
}
