#include "veccomp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "veccomp/channel.hpp"
#include "veccomp/closed_form.hpp"
#include "veccomp/field_function.hpp"
#include "veccomp/modulation.hpp"
#include "veccomp/rng.hpp"
#include "veccomp/sdp.hpp"

namespace veccomp {
namespace {

// Design-time randomness (random tables, kernels, coefficient matrices) lives
// at a trial index no Monte Carlo run ever uses.
constexpr std::uint32_t kDesignTrial = 0xFFFFFFFFu;

std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

RealVector<double> stack_complex(const ComplexVector<double>& v) {
  RealVector<double> out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
  return out;
}

FunctionTable<double> build_function_table(const ScenarioConfig& cfg) {
  if (!cfg.function_file.empty()) {
    FunctionTable<double> table = read_function_table_file(cfg.function_file);
    if (table.K != cfg.K || table.L != cfg.L || table.Q != cfg.q_list) {
      throw ConfigError("function table in '" + cfg.function_file +
                        "' does not match the scenario: table has K=" +
                        std::to_string(table.K) + ", L=" + std::to_string(table.L) +
                        "; config asks K=" + std::to_string(cfg.K) + ", L=" +
                        std::to_string(cfg.L));
    }
    return table;
  }
  if (cfg.function == "random") {
    RngStream rng(cfg.seed, kDesignTrial, kSharedNode, Role::kShared);
    auto f = [&](const std::vector<int>&) {
      std::vector<double> out(static_cast<size_t>(cfg.L));
      for (auto& v : out) v = double(rng.uniform_int(cfg.value_range));
      return out;
    };
    return tabulate_function<double>(f, cfg.K, cfg.q_list, cfg.L);
  }
  // The named reductions are scalar functions.
  if (cfg.L != 1) {
    throw ConfigError("function '" + cfg.function +
                      "' is scalar; set L = 1 (or use function = random / a "
                      "function_file for vector outputs)");
  }
  auto reduce = [&cfg](const std::vector<int>& s) -> std::vector<double> {
    if (cfg.function == "sum") {
      double acc = 0;
      for (int v : s) acc += v;
      return {acc};
    }
    if (cfg.function == "product") {
      double acc = 1;
      for (int v : s) acc *= v;
      return {acc};
    }
    if (cfg.function == "max") {
      double acc = s.front();
      for (int v : s) acc = std::max(acc, double(v));
      return {acc};
    }
    // validate() restricts the name set, so this is sum-of-squares.
    double acc = 0;
    for (int v : s) acc += double(v) * v;
    return {acc};
  };
  return tabulate_function<double>(reduce, cfg.K, cfg.q_list, 1);
}

std::shared_ptr<const Codec> build_codec_for(const ScenarioConfig& cfg) {
  if (cfg.codec == "raw-sum") return nullptr;
  if (cfg.codec == "sdp" || cfg.codec == "exact") {
    FunctionTable<double> table = build_function_table(cfg);
    DesignMode mode = cfg.codec == "exact" ? DesignMode::kExact : DesignMode::kInexact;
    auto designs = design_constellations(table, mode, cfg.seed);
    return std::shared_ptr<const Codec>(make_table_codec(table, designs));
  }
  if (cfg.codec == "pam-affine") {
    AffineSpec spec;
    spec.K = cfg.K;
    spec.Q = cfg.q_list.front();
    spec.Q_list = cfg.coeff_cardinalities.empty() ? cfg.q_list : cfg.coeff_cardinalities;
    if (spec.Q_list.size() == 1 && cfg.K > 1) {
      spec.Q_list.assign(static_cast<size_t>(cfg.K), spec.Q_list.front());
    }
    // Coefficients are part of the experiment definition, drawn once from the
    // seed's design stream.
    RngStream rng(cfg.seed, kDesignTrial, kSharedNode, Role::kShared);
    spec.A = IntMatrix(cfg.L, cfg.K);
    for (int l = 0; l < cfg.L; ++l) {
      for (int k = 0; k < cfg.K; ++k) {
        spec.A(l, k) = rng.uniform_int(spec.Q_list[static_cast<size_t>(k)]);
      }
    }
    spec.b = IntVector::Zero(cfg.L);
    spec.validate();
    return std::shared_ptr<const Codec>(make_affine_codec(std::move(spec)));
  }
  // qam-conv: explicit kernel, or nonzero digits drawn from the design stream.
  std::vector<int> kernel = cfg.kernel;
  if (kernel.empty()) {
    RngStream rng(cfg.seed, kDesignTrial, kSharedNode, Role::kShared);
    kernel.resize(static_cast<size_t>(cfg.L + cfg.K - 1));
    for (auto& a : kernel) a = 1 + rng.uniform_int(cfg.q_list.front() - 1);
  }
  ConvSpec spec = conv_function_spec(std::move(kernel), cfg.K, cfg.q_list.front());
  return std::shared_ptr<const Codec>(make_conv_codec(std::move(spec)));
}

// Context-tagging rethrow that preserves the error category (and therefore
// the CLI exit code).
[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ConfigError& err) {
    throw ConfigError(context + err.what());
  } catch (const DesignError& err) {
    throw DesignError(context + err.what());
  } catch (const SdpNonConvergence& err) {
    throw SdpNonConvergence(context + err.what(), err.best());
  } catch (const std::exception& err) {
    throw std::runtime_error(context + err.what());
  }
}

}  // namespace

const char* to_string(Normalization n) {
  return n == Normalization::kSumSymbolPower ? "sum-symbol-power" : "function-power";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "sum-symbol-power") return Normalization::kSumSymbolPower;
  if (s == "function-power") return Normalization::kFunctionPower;
  throw ConfigError("unknown normalization '" + s + "'");
}

Scenario prepare_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario sc;
  sc.config = config;
  // Expand single-entry lists so downstream indexing is uniform.
  if (sc.config.q_list.size() == 1 && config.K > 1) {
    sc.config.q_list.assign(static_cast<size_t>(config.K), config.q_list.front());
  }
  sc.codec = build_codec_for(sc.config);
  if (sc.codec) {
    double energy = sc.codec->average_symbol_energy();
    if (!(energy > 0)) {
      throw DesignError("codec has zero average symbol energy; cannot normalize power");
    }
    sc.symbol_scale = 1.0 / std::sqrt(energy);
  }
  sc.sigma_z = std::pow(10.0, -config.snr_db / 20.0);
  return sc;
}

TrialRecord run_trial(const Scenario& scenario, long trial) {
  const ScenarioConfig& cfg = scenario.config;
  const auto t = static_cast<std::uint32_t>(trial);
  const int K = cfg.K;
  const int L = cfg.L;
  TrialRecord rec;

  // Inputs and raw symbol vectors.
  std::vector<ComplexVector<double>> symbols(static_cast<size_t>(K));
  std::vector<int> inputs(static_cast<size_t>(K), 0);
  ComplexVector<double> r = ComplexVector<double>::Zero(L);
  for (int k = 0; k < K; ++k) {
    RngStream rng(cfg.seed, t, static_cast<std::uint32_t>(k), Role::kSymbols);
    if (scenario.codec) {
      inputs[static_cast<size_t>(k)] = rng.uniform_int(scenario.codec->input_cardinality(k));
      symbols[static_cast<size_t>(k)] = scenario.codec->encode(k, inputs[static_cast<size_t>(k)]);
    } else {
      symbols[static_cast<size_t>(k)] = random_unit_vector<double>(L, rng);
    }
    r += symbols[static_cast<size_t>(k)];
  }
  const double scale = scenario.symbol_scale;
  std::vector<ComplexVector<double>> scaled(symbols);
  for (auto& x : scaled) x *= scale;
  rec.r = r;
  rec.sum_power = r.squaredNorm() * scale * scale;

  if (scenario.codec && cfg.baseline) {
    // Orthogonal reference: one AWGN use per node, decode each input, then
    // apply the function to the decoded tuple.
    std::vector<int> decoded(static_cast<size_t>(K), 0);
    ComplexVector<double> r_hat = ComplexVector<double>::Zero(L);
    for (int k = 0; k < K; ++k) {
      RngStream noise(cfg.seed, t, static_cast<std::uint32_t>(k), Role::kNoise);
      ComplexVector<double> y =
          scaled[static_cast<size_t>(k)] +
          scenario.sigma_z * random_cnormal_vector<double>(L, noise);
      decoded[static_cast<size_t>(k)] = scenario.codec->nearest_input(k, y / scale);
      r_hat += scenario.codec->encode(k, decoded[static_cast<size_t>(k)]);
    }
    rec.r_hat = r_hat;
    rec.f_true = scenario.codec->evaluate(inputs);
    rec.f_hat = scenario.codec->evaluate(decoded);
    return rec;
  }

  // Superposed transmission: full channel when N_r is set, otherwise the
  // codec-only protocol y = sum_k x_k + z.
  ComplexVector<double> y;
  if (cfg.n_r > 0) {
    auto channels = draw_channels<double>(
        K, cfg.n_r, cfg.n_t, std::vector<double>(static_cast<size_t>(K), cfg.sigma_h),
        cfg.alpha_corr, cfg.seed, t);
    std::vector<std::uint64_t> beam_seeds(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
      beam_seeds[static_cast<size_t>(k)] = derive_seed(cfg.seed, t, static_cast<std::uint32_t>(k));
    }
    auto beams = draw_beamformers<double>(
        cfg.n_t, L, std::vector<double>(static_cast<size_t>(K), 1.0 / cfg.sigma_h),
        beamformer_mode_from_string(cfg.beamformer), beam_seeds);
    RngStream noise(cfg.seed, t, 0, Role::kNoise);
    y = transmit_and_combine<double>(channels, beams, scaled, scenario.sigma_z, noise,
                                     1e6, /*decompose=*/false)
            .y;
  } else {
    RngStream noise(cfg.seed, t, 0, Role::kNoise);
    ComplexVector<double> sum = ComplexVector<double>::Zero(L);
    for (const auto& x : scaled) sum += x;
    y = sum + scenario.sigma_z * random_cnormal_vector<double>(L, noise);
  }

  rec.r_hat = scenario.codec ? ComplexVector<double>(y / scale) : y;
  if (scenario.codec) {
    rec.f_true = scenario.codec->evaluate(inputs);
    rec.f_hat = scenario.codec->decode(rec.r_hat);
  } else {
    rec.f_true = stack_complex(rec.r);
    rec.f_hat = stack_complex(rec.r_hat);
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const Scenario& scenario, int threads) {
  const long total = scenario.config.trials;
  std::vector<TrialRecord> records(static_cast<size_t>(total));
  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::clamp(hw, 1u, 8u));
  }
  threads = static_cast<int>(std::min<long>(threads, total));
  if (threads <= 1) {
    for (long i = 0; i < total; ++i) records[static_cast<size_t>(i)] = run_trial(scenario, i);
    return records;
  }
  // Contiguous index blocks per worker; record i only ever depends on i, so
  // the assembled vector is identical for every thread count.
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    const long begin = total * w / threads;
    const long end = total * (w + 1) / threads;
    pool.emplace_back([&, begin, end] {
      try {
        for (long i = begin; i < end; ++i) {
          records[static_cast<size_t>(i)] = run_trial(scenario, i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

NmseEstimate nmse(const std::vector<TrialRecord>& records, Normalization normalization) {
  if (records.empty()) throw std::invalid_argument("nmse: need at least one record");
  const auto n = static_cast<double>(records.size());
  double err_sum = 0.0;
  double norm_sum = 0.0;
  for (const auto& rec : records) {
    err_sum += (rec.f_true - rec.f_hat).squaredNorm();
    norm_sum += normalization == Normalization::kSumSymbolPower ? rec.sum_power
                                                                : rec.f_true.squaredNorm();
  }
  const double norm_mean = norm_sum / n;
  if (!(norm_mean > 0)) {
    throw std::invalid_argument("nmse: normalizer is zero over the record set");
  }
  const double err_mean = err_sum / n;
  NmseEstimate out;
  out.mean = err_mean / norm_mean;
  out.trials = static_cast<long>(records.size());
  if (records.size() > 1) {
    double var = 0.0;
    for (const auto& rec : records) {
      const double e = (rec.f_true - rec.f_hat).squaredNorm() - err_mean;
      var += e * e;
    }
    var /= (n - 1.0);
    out.stderror = std::sqrt(var / n) / norm_mean;
  }
  return out;
}

ScenarioConfig apply_sweep_value(ScenarioConfig config, const std::string& key,
                                 double value) {
  auto as_int = [&](const char* what) {
    const double rounded = std::nearbyint(value);
    if (rounded != value || rounded < 0) {
      throw ConfigError(std::string("sweep value for ") + what +
                        " must be a non-negative integer, got " + format17(value));
    }
    return static_cast<int>(rounded);
  };
  if (key == "N_r") {
    config.n_r = as_int("N_r");
  } else if (key == "N_t") {
    config.n_t = as_int("N_t");
  } else if (key == "K") {
    const int k = as_int("K");
    auto retarget = [&](std::vector<int>& list, const char* name) {
      if (list.empty()) return;
      for (int q : list) {
        if (q != list.front()) {
          throw ConfigError(std::string("sweeping K requires a uniform ") + name);
        }
      }
      list.assign(static_cast<size_t>(k), list.front());
    };
    retarget(config.q_list, "Q");
    retarget(config.coeff_cardinalities, "coeff_cardinalities");
    config.K = k;
  } else if (key == "L") {
    config.L = as_int("L");
  } else if (key == "Q") {
    const int q = as_int("Q");
    config.q_list.assign(config.q_list.empty() ? 1 : config.q_list.size(), q);
    // Aggregate-order mapping: the coefficient alphabet tracks Q.
    if (!config.coeff_cardinalities.empty()) {
      config.coeff_cardinalities.assign(config.coeff_cardinalities.size(), q);
    }
  } else if (key == "snr_db") {
    config.snr_db = value;
  } else if (key == "trials") {
    config.trials = as_int("trials");
  } else {
    throw ConfigError("unknown sweep axis '" + key +
                      "' (supported: N_r, N_t, K, L, Q, snr_db, trials)");
  }
  return config;
}

namespace {

SweepSection run_section(const ScenarioConfig& section_config, const std::string& axis,
                         const std::vector<double>& axis_values, int threads) {
  SweepSection section;
  section.config = section_config;
  section.axis = axis;
  section.extra_metadata["channel_uses"] =
      section_config.baseline ? std::to_string(section_config.K) : "1";
  for (double value : axis_values) {
    try {
      ScenarioConfig point_config = apply_sweep_value(section_config, axis, value);
      Scenario scenario = prepare_scenario(point_config);
      auto records = run_trials(scenario, threads);
      SweepPoint point;
      point.axis_value = value;
      point.estimate =
          nmse(records, normalization_from_string(point_config.normalization));
      section.points.push_back(point);
    } catch (...) {
      rethrow_with_context("at " + axis + "=" + format17(value) + ": ");
    }
  }
  return section;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  if (spec.axis_values.empty()) {
    throw ConfigError("sweep needs at least one axis value");
  }
  SweepResult result;
  if (spec.curve_key.empty()) {
    result.sections.push_back(
        run_section(spec.base, spec.axis, spec.axis_values, threads));
    return result;
  }
  if (spec.curve_values.empty()) {
    throw ConfigError("curve sweep needs at least one curve value");
  }
  for (double curve : spec.curve_values) {
    ScenarioConfig section_config;
    try {
      section_config = apply_sweep_value(spec.base, spec.curve_key, curve);
    } catch (...) {
      rethrow_with_context("at " + spec.curve_key + "=" + format17(curve) + ": ");
    }
    SweepSection section =
        run_section(section_config, spec.axis, spec.axis_values, threads);
    section.curve_key = spec.curve_key;
    section.curve_value = curve;
    result.sections.push_back(std::move(section));
  }
  return result;
}

SweepResult run_single(const ScenarioConfig& config, int threads) {
  SweepSpec spec;
  spec.base = config;
  spec.axis = "snr_db";
  spec.axis_values = {config.snr_db};
  return run_sweep(spec, threads);
}

SweepResult baseline_wideband(const ScenarioConfig& config, int threads) {
  ScenarioConfig cfg = config;
  cfg.baseline = true;
  return run_single(cfg, threads);
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out;
  bool first = true;
  for (const auto& section : result.sections) {
    if (!first) out += "\n";
    first = false;
    out += "#axis=" + section.axis + "\n";
    if (!section.curve_key.empty()) {
      out += "#curve_key=" + section.curve_key + "\n";
      out += "#curve_value=" + format17(section.curve_value) + "\n";
    }
    // Every config field, one #key=value line each.
    std::string serialized = serialize_scenario_config(section.config);
    size_t pos = 0;
    while (pos < serialized.size()) {
      size_t eol = serialized.find('\n', pos);
      std::string line = serialized.substr(pos, eol - pos);
      size_t eq = line.find(" = ");
      out += "#" + line.substr(0, eq) + "=" + line.substr(eq + 3) + "\n";
      pos = eol + 1;
    }
    for (const auto& [key, value] : section.extra_metadata) {
      out += "#" + key + "=" + value + "\n";
    }
    out += "axis,nmse_mean,nmse_stderr,trials\n";
    for (const auto& point : section.points) {
      out += format17(point.axis_value) + "," + format17(point.estimate.mean) + "," +
             format17(point.estimate.stderror) + "," +
             std::to_string(point.estimate.trials) + "\n";
    }
  }
  return out;
}

}  // namespace veccomp
