// aiexp: contrast loss from cloud expansion in Raman-pulse atom
// interferometers, and per-pulse intensity compensation.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aiexp/commands.hpp"

namespace {

constexpr int exit_config_error = 2;
constexpr int exit_numerical_error = 3;

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atom interferometer expansion-induced contrast loss and intensity compensation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, scenario, out_path;
  std::optional<std::string> format_name;
  bool compensated = false;
  std::optional<long long> mc_samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--scenario", scenario, "Preset: normal, better, ideal, custom");
  app.add_option("--out", out_path, "Write output here instead of stdout");
  app.add_option("--format", format_name, "Output format (plan and mc-check default to json)")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--compensated", compensated, "Apply per-pulse intensity compensation");
  app.add_option("--mc-samples", mc_samples, "Monte Carlo samples");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* expansion = app.add_subcommand("expansion", "Cloud width and diameter ratio against time");
  double t_max = 1.0;
  int expansion_points = 101;
  expansion->add_option("--t-max", t_max, "Last time, s");
  expansion->add_option("--points", expansion_points, "Number of rows");

  auto* rabi = app.add_subcommand("rabi", "Ensemble Rabi curves at chosen diameter ratios");
  aiexp::RabiRequest rabi_request;
  rabi->add_option("--pulse", rabi_request.pulses, "Pulse number(s) 1..3 of the sequence");
  rabi->add_option("--ratio", rabi_request.ratios, "Explicit diameter ratio(s) s = w / sigma");
  rabi->add_option("--tau-max", rabi_request.tau_max_over_tau0, "Longest duration in units of pi/Omega_max0");
  rabi->add_option("--points", rabi_request.n_points, "Samples per curve");

  auto* fringe = app.add_subcommand("fringe", "Fringe against the third pulse phase, with its contrast");
  int fringe_points = 73;
  std::optional<std::string> summary_path;
  fringe->add_option("--points", fringe_points, "Phase samples over [0, 2 pi]");
  fringe->add_option("--summary", summary_path, "Summary JSON path (default: <out>.summary.json or stderr)");

  auto* sweep = app.add_subcommand("sweep", "Pi fidelity against t, or contrast against T");
  std::string sweep_kind_name;
  double sweep_from = 0, sweep_to = 0;
  int sweep_points = 25;
  sweep->add_option("--kind", sweep_kind_name, "fidelity_vs_t or contrast_vs_T")
      ->required()
      ->check(CLI::IsMember({"fidelity_vs_t", "contrast_vs_T"}));
  sweep->add_option("--from", sweep_from, "Range start, s")->required();
  sweep->add_option("--to", sweep_to, "Range end, s")->required();
  sweep->add_option("--points", sweep_points, "Number of points");

  auto* plan = app.add_subcommand("plan", "Per-pulse compensation factors with fidelities and contrasts");
  auto* mc_check = app.add_subcommand("mc-check", "Quadrature model against Monte Carlo trajectories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  try {
    auto resolve = [&](const std::optional<std::string>& name) {
      aiexp::ScenarioConfig cfg = aiexp::load_config(config_path, name);
      if (mc_samples) cfg.mc_samples = *mc_samples;
      if (seed) cfg.seed = *seed;
      if (workers) cfg.workers = *workers;
      cfg.validate();
      return cfg;
    };
    auto format_or = [&](aiexp::OutputFormat fallback) {
      if (!format_name) return fallback;
      return *format_name == "json" ? aiexp::OutputFormat::json : aiexp::OutputFormat::csv;
    };
    const auto format = format_or(aiexp::OutputFormat::csv);

    aiexp::CommandOutput result;
    if (*expansion) {
      std::vector<aiexp::ScenarioConfig> scenarios;
      if (!config_path && !scenario) {
        scenarios = {resolve("normal"), resolve("better")};
      } else {
        scenarios = {resolve(scenario)};
      }
      result = aiexp::cmd_expansion(scenarios, t_max, expansion_points, format);
    } else if (*rabi) {
      rabi_request.compensated = compensated;
      result = aiexp::cmd_rabi(resolve(scenario), rabi_request, format);
    } else if (*fringe) {
      result = aiexp::cmd_fringe(resolve(scenario), compensated, fringe_points, format);
    } else if (*sweep) {
      result = aiexp::cmd_sweep(resolve(scenario), *aiexp::parse_sweep_kind(sweep_kind_name), sweep_from, sweep_to,
                                sweep_points, compensated, format);
    } else if (*plan) {
      result = aiexp::cmd_plan(resolve(scenario), format_or(aiexp::OutputFormat::json));
    } else if (*mc_check) {
      result = aiexp::cmd_mc_check(resolve(scenario), format_or(aiexp::OutputFormat::json));
    }

    if (out_path) {
      if (!write_text(*out_path, result.body)) {
        std::cerr << "error: cannot write '" << *out_path << "'\n";
        return 1;
      }
    } else {
      std::cout << result.body;
    }
    if (!result.summary.empty()) {
      const std::optional<std::string> target =
          summary_path ? summary_path : (out_path ? std::optional(*out_path + ".summary.json") : std::nullopt);
      if (target) {
        if (!write_text(*target, result.summary)) {
          std::cerr << "error: cannot write '" << *target << "'\n";
          return 1;
        }
      } else {
        std::cerr << result.summary;
      }
    }
    return 0;
  } catch (const aiexp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const aiexp::IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << " (estimate " << e.estimate() << ", error bound "
              << e.error_bound() << ")\n";
    return exit_numerical_error;
  } catch (const aiexp::OptimizationError& e) {
    std::cerr << "optimization error: " << e.what() << "\n";
    return exit_numerical_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
