#pragma once

// Scenario configuration. A run starts from a named preset, then applies the
// keys of an optional JSON file, then command-line flags. Lengths, times,
// temperatures and frequencies carry their unit in the key name
// ("sigma0_mm", "temperature_uK", "t1_ms", ...) and are stored as SI.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aiexp/compensation.hpp"
#include "aiexp/core_physics.hpp"
#include "aiexp/interferometer.hpp"

namespace aiexp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario = "normal";

  // cloud
  double sigma0 = 3e-3;
  double temperature = 7e-6;
  double mass = rb87_mass;

  // beam
  double w = 20e-3;
  double omega_max0 = default_omega_max0;
  std::optional<LaserParameters<double>> laser;

  // sequence
  double t1 = 0.130;
  double interval_T = 0.260;
  std::array<double, 3> pulse_areas_pi{0.5, 1.0, 0.5};
  std::array<double, 3> phases{0.0, 0.0, 0.0};

  QuadratureSettings quadrature{};
  CompensationOptions compensation{};

  // Monte Carlo: 0 samples disables the optional comparison in `fringe`.
  long long mc_samples = 0;
  std::uint64_t seed = 20240517;
  unsigned workers = 1;

  static ScenarioConfig preset(std::string_view name);

  RamanBeam<double> beam() const;
  AtomCloud<double> cloud() const;
  MzSequence sequence() const;

  void validate() const;

  /// Fully resolved configuration, SI units.
  nlohmann::json to_json() const;
};

/// Applies the keys of a JSON document on top of `base`. Unknown keys and
/// wrong types are reported with their dotted path.
void apply_config_json(ScenarioConfig& base, const nlohmann::json& doc);

/// Parses config text. The scenario named by `scenario_override`, else the
/// document's "scenario" key, else "normal", selects the preset. Syntax
/// errors carry line and column.
ScenarioConfig parse_config(std::string_view text, const std::optional<std::string>& scenario_override = {});

ScenarioConfig load_config(const std::optional<std::string>& path,
                           const std::optional<std::string>& scenario_override = {});

}  // namespace aiexp
