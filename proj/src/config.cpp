#include "dirinfo/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dirinfo {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& field,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> required) {
  if (!j.is_object()) throw ConfigError(field + ": expected an object", field);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      const std::string path = field.empty() ? key : field + "." + key;
      throw ConfigError(path + ": unknown key", path);
    }
  }
  for (std::string_view key : required) {
    if (!j.contains(key)) {
      const std::string path = field.empty() ? std::string(key) : field + "." + std::string(key);
      throw ConfigError(path + ": missing required key", path);
    }
  }
}

std::string join(const std::string& field, std::string_view key) {
  return field.empty() ? std::string(key) : field + "." + std::string(key);
}

std::vector<double> parse_coeffs(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field + ": expected a nonempty array of numbers", field);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = field + "[" + std::to_string(k) + "]";
    if (!j[k].is_number()) throw ConfigError(path + ": expected a number", path);
    const double v = j[k].get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + ": non-finite coefficient", path);
    out.push_back(v);
  }
  return out;
}

double parse_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number", field);
  return j.get<double>();
}

std::uint64_t parse_unsigned(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(field + ": expected a nonnegative integer", field);
  }
  return j.get<std::uint64_t>();
}

NoiseSpec parse_noise(const json& j, const std::string& field) {
  require_keys(j, field, {"kind", "variance", "shaping"}, {"kind", "variance"});
  NoiseSpec spec;
  const json& kind = j.at("kind");
  if (kind == "white") {
    spec.kind = NoiseKind::white;
  } else if (kind == "colored") {
    spec.kind = NoiseKind::colored;
  } else {
    throw ConfigError(join(field, "kind") + ": expected \"white\" or \"colored\"",
                      join(field, "kind"));
  }
  spec.variance = parse_number(j.at("variance"), join(field, "variance"));
  if (j.contains("shaping")) {
    spec.shaping = parse_transfer_function(j.at("shaping"), join(field, "shaping"));
  }
  try {
    spec.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(field + ": " + e.what(), field);
  }
  return spec;
}

json noise_to_json(const NoiseSpec& spec) {
  json j;
  j["kind"] = spec.kind == NoiseKind::white ? "white" : "colored";
  j["variance"] = spec.variance;
  if (spec.shaping) j["shaping"] = transfer_function_to_json(*spec.shaping);
  return j;
}

RunOptions parse_options(const json& j, const std::string& field) {
  require_keys(j, field, {"grid_points", "log_base", "seed", "n_samples"}, {});
  RunOptions opt;
  if (j.contains("grid_points")) {
    opt.grid_points = parse_unsigned(j.at("grid_points"), join(field, "grid_points"));
    try {
      FrequencyGrid{opt.grid_points};
    } catch (const InvalidInput& e) {
      throw ConfigError(join(field, "grid_points") + ": " + e.what(), join(field, "grid_points"));
    }
  }
  if (j.contains("log_base")) {
    const json& b = j.at("log_base");
    if (b == "nats") {
      opt.log_base = LogBase::nats;
    } else if (b == "bits") {
      opt.log_base = LogBase::bits;
    } else {
      throw ConfigError(join(field, "log_base") + ": expected \"nats\" or \"bits\"",
                        join(field, "log_base"));
    }
  }
  if (j.contains("seed")) opt.seed = parse_unsigned(j.at("seed"), join(field, "seed"));
  if (j.contains("n_samples")) {
    opt.n_samples = parse_unsigned(j.at("n_samples"), join(field, "n_samples"));
  }
  return opt;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json complex_list(const std::vector<std::complex<double>>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back({round_report(v.real()), round_report(v.imag())});
  return arr;
}

}  // namespace

double rate_scale(LogBase base) noexcept {
  return base == LogBase::bits ? 1.0 / std::numbers::ln2 : 1.0;
}

const char* to_string(LogBase base) noexcept {
  return base == LogBase::bits ? "bits" : "nats";
}

TransferFunction parse_transfer_function(const json& j, const std::string& field) {
  require_keys(j, field, {"num", "den"}, {"num", "den"});
  const Polynomial num(parse_coeffs(j.at("num"), join(field, "num")));
  const Polynomial den(parse_coeffs(j.at("den"), join(field, "den")));
  if (den.is_zero() || den[0] == 0.0) {
    throw ConfigError(join(field, "den") + ": constant term must be nonzero (causal system)",
                      join(field, "den"));
  }
  const Reduction red = reduce_fraction(num, den);
  for (const auto& r : red.cancelled) {
    if (std::abs(r) >= kStabilityMargin) {
      std::ostringstream msg;
      msg << field << ": unstable pole/zero cancellation at " << r;
      throw ConfigError(msg.str(), field);
    }
  }
  return {num, den};
}

json transfer_function_to_json(const TransferFunction& tf) {
  return {{"num", tf.num().coeffs()}, {"den", tf.den().coeffs()}};
}

LoopConfig parse_loop_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte);
    throw ConfigError("line " + std::to_string(line) + ": " + e.what(), "", line);
  }
  require_keys(j, "",
               {"plant", "controller", "feedback_filter", "channel_noise", "output_disturbance",
                "initial_state", "options"},
               {"plant", "controller", "channel_noise", "output_disturbance"});

  LoopConfig cfg;
  LoopModel& m = cfg.model;
  m.plant = parse_transfer_function(j.at("plant"), "plant");
  m.controller = parse_transfer_function(j.at("controller"), "controller");
  if (j.contains("feedback_filter")) {
    m.feedback_filter = parse_transfer_function(j.at("feedback_filter"), "feedback_filter");
  }
  m.channel_noise = parse_noise(j.at("channel_noise"), "channel_noise");
  m.output_disturbance = parse_noise(j.at("output_disturbance"), "output_disturbance");
  if (j.contains("initial_state")) {
    const json& x0 = j.at("initial_state");
    if (!x0.is_array()) throw ConfigError("initial_state: expected an array", "initial_state");
    if (!x0.empty()) m.initial_state = parse_coeffs(x0, "initial_state");
  }
  if (j.contains("options")) cfg.options = parse_options(j.at("options"), "options");

  try {
    m.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what(), "");
  }
  return cfg;
}

LoopConfig load_loop_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_loop_config(text.str());
}

json loop_config_to_json(const LoopConfig& config) {
  const LoopModel& m = config.model;
  json j;
  j["plant"] = transfer_function_to_json(m.plant);
  j["controller"] = transfer_function_to_json(m.controller);
  j["feedback_filter"] = transfer_function_to_json(m.feedback_filter);
  j["channel_noise"] = noise_to_json(m.channel_noise);
  j["output_disturbance"] = noise_to_json(m.output_disturbance);
  j["initial_state"] = m.initial_state;
  j["options"] = {{"grid_points", config.options.grid_points},
                  {"log_base", to_string(config.options.log_base)},
                  {"seed", config.options.seed},
                  {"n_samples", config.options.n_samples}};
  return j;
}

double round_report(double value) {
  if (value == 0.0) return 0.0;
  if (!std::isfinite(value)) return value;
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", value);
  return std::strtod(buf.data(), nullptr);
}

json report_to_json(const DecompositionReport& r, LogBase base) {
  const double s = rate_scale(base);
  json j;
  j["log_base"] = to_string(base);
  j["units"] = std::string(to_string(base)) + "/sample";
  j["total_rate"] = round_report(s * r.total_rate);
  j["control_term"] = round_report(s * r.control_term);
  j["disturbance_term"] = round_report(s * r.disturbance_term);
  j["disturbance_term_simplified"] = round_report(s * r.disturbance_term_simplified);
  j["residual"] = round_report(s * r.residual);
  j["bode_analytic"] = round_report(s * r.bode_analytic);
  j["bode_loop_analytic"] = round_report(s * r.bode_loop_analytic);
  j["bode_literal_sum"] = round_report(r.bode_literal_sum);
  j["bode_literal_differs"] = r.bode_literal_differs;
  j["grid_points"] = r.grid_points;
  j["convergence_estimate"] = round_report(s * r.convergence_estimate);
  j["plant_poles"] = complex_list(r.plant_poles);
  j["closed_loop_poles"] = complex_list(r.closed_loop_poles);
  j["warnings"] = r.warnings;
  return j;
}

json comparison_to_json(const ComparisonRecord& r, LogBase base) {
  const double s = rate_scale(base);
  json j;
  j["log_base"] = to_string(base);
  j["analytic_rate"] = round_report(s * r.analytic_rate);
  j["empirical_rate"] = round_report(s * r.empirical_rate);
  j["abs_gap"] = round_report(s * r.abs_gap);
  j["rel_gap"] = r.rel_gap ? json(round_report(*r.rel_gap)) : json(nullptr);
  j["tolerance"] = round_report(s * r.tolerance);
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["n_samples"] = r.n_samples;
  j["burn_in"] = r.burn_in;
  j["grid_points"] = r.grid_points;
  j["segment_length"] = r.segment_length;
  j["overlap_fraction"] = round_report(r.overlap_fraction);
  j["floored_bins"] = r.floored_bins;
  return j;
}

}  // namespace dirinfo
