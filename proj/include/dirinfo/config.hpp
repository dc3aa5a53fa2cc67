#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dirinfo/decomposition.hpp"
#include "dirinfo/errors.hpp"
#include "dirinfo/lti.hpp"
#include "dirinfo/montecarlo.hpp"

namespace dirinfo {

enum class LogBase { nats, bits };

/// Conversion factor from nats to the given base.
double rate_scale(LogBase base) noexcept;
const char* to_string(LogBase base) noexcept;

struct RunOptions {
  std::size_t grid_points = FrequencyGrid::kDefaultPoints;
  LogBase log_base = LogBase::nats;
  std::uint64_t seed = 1;
  std::size_t n_samples = std::size_t{1} << 17;

  friend bool operator==(const RunOptions&, const RunOptions&) = default;
};

/// A loop description plus run options, as stored in a JSON config file:
///
///   {
///     "plant":              {"num": [0, 1], "den": [1, -2]},
///     "controller":         {"num": [-2],   "den": [1]},
///     "feedback_filter":    {"num": [1],    "den": [1]},
///     "channel_noise":      {"kind": "white", "variance": 1},
///     "output_disturbance": {"kind": "colored", "variance": 1,
///                            "shaping": {"num": [1], "den": [1, -0.5]}},
///     "initial_state":      [0],
///     "options": {"grid_points": 4096, "log_base": "nats",
///                 "seed": 1, "n_samples": 131072}
///   }
///
/// feedback_filter, initial_state and options are optional.
struct LoopConfig {
  LoopModel model;
  RunOptions options;

  friend bool operator==(const LoopConfig&, const LoopConfig&) = default;
};

/// Parse failure with the offending field path ("plant.den[1]") and, for
/// syntax errors, the 1-based line.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& what, std::string field, std::size_t line = 0)
      : InvalidInput(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

LoopConfig parse_loop_config(std::string_view text);
LoopConfig load_loop_config(const std::filesystem::path& path);
nlohmann::json loop_config_to_json(const LoopConfig& config);
/// Parses one {"num": [...], "den": [...]} object; field names the path for
/// diagnostics.
TransferFunction parse_transfer_function(const nlohmann::json& j, const std::string& field);
nlohmann::json transfer_function_to_json(const TransferFunction& tf);

/// Rounds to 12 significant digits, the precision of every printed report.
double round_report(double value);

nlohmann::json report_to_json(const DecompositionReport& report, LogBase base);
nlohmann::json comparison_to_json(const ComparisonRecord& record, LogBase base);

}  // namespace dirinfo
