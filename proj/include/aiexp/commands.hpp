#pragma once

// Subcommand bodies of the `aiexp` tool. Each returns the complete text of
// its output so that runs are easy to compare byte for byte.
//
// CSV conventions: comma separated, '.' decimal point, '#'-prefixed metadata
// lines first (tool, command, resolved config as one-line JSON), then a
// header row.

#include <optional>
#include <string>
#include <vector>

#include "aiexp/config.hpp"

namespace aiexp {

enum class OutputFormat { csv, json };

struct CommandOutput {
  std::string body;
  /// Secondary JSON summary (fringe), empty when not produced.
  std::string summary;
};

std::string format_number(double x);

/// Cloud width (mm) and diameter ratio against time for each scenario.
CommandOutput cmd_expansion(const std::vector<ScenarioConfig>& scenarios, double t_max, int n_points,
                            OutputFormat format);

struct RabiRequest {
  /// Pulse numbers 1..3 of the configured sequence.
  std::vector<int> pulses;
  /// Explicit diameter ratios, evaluated in addition to `pulses`.
  std::vector<double> ratios;
  double tau_max_over_tau0 = 3.0;
  int n_points = 301;
  bool compensated = false;
};

CommandOutput cmd_rabi(const ScenarioConfig& cfg, const RabiRequest& request, OutputFormat format);

CommandOutput cmd_fringe(const ScenarioConfig& cfg, bool compensated, int n_points, OutputFormat format);

enum class SweepKind { fidelity_vs_t, contrast_vs_T };

std::optional<SweepKind> parse_sweep_kind(const std::string& name);

CommandOutput cmd_sweep(const ScenarioConfig& cfg, SweepKind kind, double lo, double hi, int n_points,
                        bool compensated, OutputFormat format);

CommandOutput cmd_plan(const ScenarioConfig& cfg, OutputFormat format);

/// Quadrature against the Monte Carlo reference: single pi pulse at t1 and
/// the three-pulse contrast.
CommandOutput cmd_mc_check(const ScenarioConfig& cfg, OutputFormat format);

}  // namespace aiexp
