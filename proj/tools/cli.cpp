#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirinfo/config.hpp"
#include "dirinfo/decomposition.hpp"
#include "dirinfo/design.hpp"
#include "dirinfo/errors.hpp"
#include "dirinfo/montecarlo.hpp"

namespace dirinfo::cli {

namespace {

using nlohmann::json;

constexpr double kResidualTolerance = 1e-8;

struct GlobalFlags {
  std::optional<std::size_t> grid;
  bool bits = false;
  std::string output;
  std::optional<std::uint64_t> seed;
};

struct Context {
  GlobalFlags flags;
  std::ostream& out;
  std::ostream& err;

  // Applies command-line overrides on top of the config's options.
  RunOptions options(RunOptions base) const {
    if (flags.grid) base.grid_points = *flags.grid;
    if (flags.bits) base.log_base = LogBase::bits;
    if (flags.seed) base.seed = *flags.seed;
    return base;
  }

  FrequencyGrid grid(const RunOptions& opt) const { return FrequencyGrid(opt.grid_points); }

  // Writes the primary output to --output if given, else to out.
  void emit(const std::string& text) const {
    if (flags.output.empty()) {
      out << text;
      return;
    }
    std::ofstream file(flags.output);
    if (!file) throw InvalidInput("cannot write output file " + flags.output);
    file << text;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::ofstream open_for_write(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write file " + path);
  return file;
}

int cmd_analyze(const Context& ctx, const std::string& path, const std::string& integrands) {
  const LoopConfig cfg = load_loop_config(path);
  const RunOptions opt = ctx.options(cfg.options);
  const RateInputs inputs{cfg.model, ctx.grid(opt)};
  const DecompositionReport report = decompose(inputs);
  if (!integrands.empty()) {
    std::ofstream file = open_for_write(integrands);
    write_integrands_csv(file, inputs);
  }
  json j;
  j["stabilizing"] = true;
  j.update(report_to_json(report, opt.log_base));
  ctx.emit(dump(j));
  return kSuccess;
}

int cmd_verify(const Context& ctx, const std::string& path, std::optional<std::size_t> random,
               const std::vector<std::string>& controllers) {
  if (path.empty() && !random) throw InvalidInput("verify: give a config file or --random N");
  json j;
  bool ok = true;

  if (random) {
    const RunOptions opt = ctx.options(RunOptions{});
    const FrequencyGrid grid = ctx.grid(opt);
    std::size_t passed = 0;
    double worst = 0.0;
    json failures = json::array();
    for (std::size_t i = 0; i < *random; ++i) {
      const std::uint64_t seed = opt.seed + i;
      const DecompositionReport r = decompose({random_stabilized_loop(seed), grid});
      worst = std::max(worst, std::abs(r.residual));
      if (std::abs(r.residual) < kResidualTolerance) {
        ++passed;
      } else {
        failures.push_back({{"seed", seed}, {"residual", round_report(r.residual)}});
      }
    }
    ok = ok && passed == *random;
    j["random_suite"] = {{"cases", *random},
                         {"passed", passed},
                         {"max_abs_residual", round_report(worst)},
                         {"tolerance", kResidualTolerance},
                         {"failures", failures}};
    if (*random == 0) j["random_suite"]["note"] = "0 cases";
  }

  if (!path.empty()) {
    const LoopConfig cfg = load_loop_config(path);
    const RunOptions opt = ctx.options(cfg.options);
    const FrequencyGrid grid = ctx.grid(opt);
    const double s = rate_scale(opt.log_base);
    const DecompositionReport r = decompose({cfg.model, grid});
    const bool identity = std::abs(r.residual) < kResidualTolerance;
    ok = ok && identity;
    j["log_base"] = to_string(opt.log_base);
    j["identity"] = {{"total_rate", round_report(s * r.total_rate)},
                     {"control_term", round_report(s * r.control_term)},
                     {"disturbance_term", round_report(s * r.disturbance_term)},
                     {"residual", round_report(s * r.residual)},
                     {"pass", identity}};
    if (!controllers.empty()) {
      std::vector<TransferFunction> ks;
      for (std::size_t i = 0; i < controllers.size(); ++i) {
        json parsed;
        try {
          parsed = json::parse(controllers[i]);
        } catch (const json::parse_error& e) {
          throw ConfigError("--controller #" + std::to_string(i) + ": " + e.what(),
                            "controller");
        }
        ks.push_back(parse_transfer_function(parsed, "--controller #" + std::to_string(i)));
      }
      const IndependenceReport ind = controller_independence_check(cfg.model, ks, grid);
      json terms = json::array();
      for (double d : ind.disturbance_terms) terms.push_back(round_report(s * d));
      ok = ok && ind.pass;
      j["independence"] = {{"disturbance_terms", terms},
                           {"max_deviation", round_report(s * ind.max_deviation)},
                           {"tolerance", kIndependenceTolerance},
                           {"pass", ind.pass}};
    }
  }
  j["pass"] = ok;
  ctx.emit(dump(j));
  return ok ? kSuccess : kToleranceFailure;
}

int cmd_simulate(const Context& ctx, const std::string& path, double tolerance,
                 const std::string& trajectory) {
  const LoopConfig cfg = load_loop_config(path);
  const RunOptions opt = ctx.options(cfg.options);
  SimulationConfig sim;
  sim.model = cfg.model;
  sim.seed = opt.seed;
  sim.n_samples = opt.n_samples;
  const ComparisonRecord record = compare_report(sim, WelchParams{}, tolerance, ctx.grid(opt));
  if (!trajectory.empty()) {
    std::ofstream file = open_for_write(trajectory);
    write_trajectory_csv(file, simulate_loop(sim));
  }
  ctx.emit(dump(comparison_to_json(record, opt.log_base)));
  if (!record.pass) {
    ctx.err << "simulate: gap " << std::setprecision(12) << record.abs_gap
            << " exceeds tolerance " << tolerance << "\n";
  }
  return record.pass ? kSuccess : kToleranceFailure;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || !std::isfinite(v)) {
      throw InvalidInput("sweep: invalid value '" + item + "' in --values");
    }
    values.push_back(v);
  }
  return values;
}

int cmd_sweep(const Context& ctx, const std::string& path, const std::string& param,
              const std::string& values_text) {
  if (param != "sigma_v2" && param != "sigma_w2") {
    throw InvalidInput("sweep: unknown parameter '" + param + "' (use sigma_v2 or sigma_w2)");
  }
  const LoopConfig cfg = load_loop_config(path);
  const RunOptions opt = ctx.options(cfg.options);
  const FrequencyGrid grid = ctx.grid(opt);
  const double s = rate_scale(opt.log_base);
  const std::vector<double> values = parse_values(values_text);

  std::ostringstream csv;
  csv << std::setprecision(12) << "value,total,control,disturbance\n";
  for (double v : values) {
    LoopModel m = cfg.model;
    if (param == "sigma_v2") {
      m.output_disturbance.variance = v;
    } else {
      if (!(v > 0.0)) throw InvalidInput("sweep: sigma_w2 values must be > 0");
      m.channel_noise.variance = v;
    }
    const DecompositionReport r = decompose({m, grid});
    csv << v << ',' << round_report(s * r.total_rate) << ',' << round_report(s * r.control_term)
        << ',' << round_report(s * r.disturbance_term) << '\n';
  }
  ctx.emit(csv.str());
  return kSuccess;
}

std::string describe_poles(const std::vector<std::complex<double>>& poles) {
  std::ostringstream msg;
  msg << std::setprecision(12);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    msg << (i ? ", " : "") << poles[i].real();
    if (poles[i].imag() != 0.0) msg << (poles[i].imag() < 0 ? " - " : " + ") << std::abs(poles[i].imag()) << "j";
  }
  return msg.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed-information analysis of noisy linear feedback loops", "dirinfo"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--grid", flags.grid, "Frequency grid points (power of two >= 64)");
  app.add_flag("--bits", flags.bits, "Report rates in bits instead of nats");
  app.add_option("--output", flags.output, "Write the report to this file");
  app.add_option("--seed", flags.seed, "Random seed");

  std::string config;
  std::string integrands;
  auto* analyze = app.add_subcommand("analyze", "Rate decomposition of one loop");
  analyze->add_option("config", config, "Loop config (JSON)")->required();
  analyze->add_option("--integrands", integrands, "Write per-frequency integrands CSV");

  std::optional<std::size_t> random;
  std::vector<std::string> controllers;
  auto* verify = app.add_subcommand("verify", "Check the decomposition identity and controller independence");
  verify->add_option("config", config, "Loop config (JSON)");
  verify->add_option("--random", random, "Run the identity on N random stabilized loops");
  verify->add_option("--controller", controllers, "Alternative controller as {\"num\":[..],\"den\":[..]}")
      ->allow_extra_args(false);

  double tolerance = kDefaultComparisonTolerance;
  std::string trajectory;
  auto* simulate = app.add_subcommand("simulate", "Compare the analytic rate with a simulated estimate");
  simulate->add_option("config", config, "Loop config (JSON)")->required();
  simulate->add_option("--tolerance", tolerance, "Absolute tolerance on the rate gap")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--trajectory", trajectory, "Write the simulated signals CSV");

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Decomposition across a noise variance");
  sweep->add_option("config", config, "Loop config (JSON)")->required();
  sweep->add_option("--param", param, "sigma_v2 or sigma_w2")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsageError;
  }

  const Context ctx{flags, out, err};
  try {
    if (*analyze) return cmd_analyze(ctx, config, integrands);
    if (*verify) return cmd_verify(ctx, config, random, controllers);
    if (*simulate) return cmd_simulate(ctx, config, tolerance, trajectory);
    return cmd_sweep(ctx, config, param, values);
  } catch (const ConfigError& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " [field " << e.field() << "]";
    err << "\n";
    return kUsageError;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.offending_poles().empty()) {
      err << "offending poles: " << describe_poles(e.offending_poles()) << "\n";
    }
    return kStabilityError;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kStabilityError;
  } catch (const DegenerateLoop& e) {
    err << "error: " << e.what() << "\n";
    return kStabilityError;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kToleranceFailure;
  } catch (const Error& e) {
    // Spectral singularities: the loop sits on the stability boundary.
    err << "error: " << e.what() << "\n";
    return kStabilityError;
  }
}

}  // namespace dirinfo::cli
