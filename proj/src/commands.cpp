#include "aiexp/commands.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "aiexp/compensation.hpp"
#include "aiexp/constants.hpp"
#include "aiexp/montecarlo.hpp"
#include "aiexp/parallel.hpp"

namespace aiexp {

using nlohmann::json;

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

constexpr long long default_mc_check_samples = 1'000'000;

class CsvWriter {
 public:
  CsvWriter(const std::string& command, const std::vector<json>& configs) {
    out_ << "# aiexp " << command << "\n";
    for (const auto& c : configs) out_ << "# config: " << c.dump() << "\n";
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << "\n";
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

CommandOutput cmd_expansion(const std::vector<ScenarioConfig>& scenarios, double t_max, int n_points,
                            OutputFormat format) {
  if (scenarios.empty()) throw std::invalid_argument("expansion: no scenario selected");
  if (!(t_max > 0)) throw std::invalid_argument("expansion: t_max must be positive");
  const auto ts = linspace(0.0, t_max, n_points);

  std::vector<std::vector<double>> sigma_mm(scenarios.size()), ratio(scenarios.size());
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const auto beam = scenarios[k].beam();
    const auto cloud = scenarios[k].cloud();
    for (double t : ts) {
      sigma_mm[k].push_back(cloud_sigma(cloud, t) * 1e3);
      ratio[k].push_back(diameter_ratio(beam, cloud, t));
    }
  }

  if (format == OutputFormat::json) {
    json j;
    j["t_s"] = ts;
    for (std::size_t k = 0; k < scenarios.size(); ++k)
      j["scenarios"][scenarios[k].scenario] = {
          {"config", scenarios[k].to_json()}, {"sigma_mm", sigma_mm[k]}, {"ratio", ratio[k]}};
    return {dump(j), {}};
  }

  std::vector<json> configs;
  std::vector<std::string> columns{"t_s"};
  for (const auto& s : scenarios) {
    configs.push_back(s.to_json());
    columns.push_back("sigma_" + s.scenario + "_mm");
    columns.push_back("ratio_" + s.scenario);
  }
  CsvWriter csv("expansion", configs);
  csv.header(columns);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> row{ts[i]};
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      row.push_back(sigma_mm[k][i]);
      row.push_back(ratio[k][i]);
    }
    csv.row(row);
  }
  return {csv.str(), {}};
}

CommandOutput cmd_rabi(const ScenarioConfig& cfg, const RabiRequest& request, OutputFormat format) {
  if (request.n_points < 2) throw std::invalid_argument("rabi: need at least two points");
  if (!(request.tau_max_over_tau0 > 0)) throw std::invalid_argument("rabi: tau range must be positive");

  struct Curve {
    std::string label;
    double ratio;
    double gamma;
    double peak_tau_over_tau0;
    double peak_p2;
  };

  const MzSequence seq = cfg.sequence();
  const auto seq_ratios = seq.ratios();
  std::vector<Curve> curves;
  std::vector<int> pulses = request.pulses;
  if (pulses.empty() && request.ratios.empty()) pulses = {1, 2, 3};
  for (int p : pulses) {
    if (p < 1 || p > 3) throw std::invalid_argument("rabi: pulse index must be 1, 2 or 3");
    curves.push_back({"pulse" + std::to_string(p), seq_ratios[static_cast<std::size_t>(p - 1)], 1.0, 0, 0});
  }
  for (double s : request.ratios) {
    if (!(s > 0)) throw std::invalid_argument("rabi: diameter ratio must be positive");
    curves.push_back({"s=" + format_number(s), s, 1.0, 0, 0});
  }

  for (auto& c : curves) {
    const double g_opt = optimal_gamma_at_ratio(c.ratio, cfg.compensation.search, cfg.quadrature);
    if (request.compensated) c.gamma = g_opt;
    c.peak_tau_over_tau0 = g_opt / c.gamma;
    c.peak_p2 = pi_fidelity_at_ratio(c.ratio, g_opt, cfg.quadrature);
  }

  const auto xs = linspace(0.0, request.tau_max_over_tau0, request.n_points);
  const std::size_t n = xs.size();
  const auto values = parallel_map<double>(curves.size() * n, cfg.workers, [&](std::size_t k) {
    const auto& c = curves[k / n];
    return single_pulse_p2_at_ratio(c.ratio, c.gamma * pi * xs[k % n], cfg.quadrature);
  });

  if (format == OutputFormat::json) {
    json j;
    j["config"] = cfg.to_json();
    j["compensated"] = request.compensated;
    j["tau_over_tau0"] = xs;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      j["curves"].push_back({{"label", curves[c].label},
                             {"ratio", curves[c].ratio},
                             {"gamma", curves[c].gamma},
                             {"peak_tau_over_tau0", curves[c].peak_tau_over_tau0},
                             {"peak_p2", curves[c].peak_p2},
                             {"p2", std::vector<double>(values.begin() + c * n, values.begin() + (c + 1) * n)}});
    }
    return {dump(j), {}};
  }

  CsvWriter csv("rabi", {cfg.to_json()});
  std::vector<std::string> columns{"tau_over_tau0"};
  for (const auto& c : curves) {
    csv.comment(c.label + ": ratio=" + format_number(c.ratio) + " gamma=" + format_number(c.gamma) +
                " peak_tau_over_tau0=" + format_number(c.peak_tau_over_tau0) +
                " peak_p2=" + format_number(c.peak_p2));
    columns.push_back("P2_" + c.label);
  }
  csv.header(columns);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row{xs[i]};
    for (std::size_t c = 0; c < curves.size(); ++c) row.push_back(values[c * n + i]);
    csv.row(row);
  }
  return {csv.str(), {}};
}

CommandOutput cmd_fringe(const ScenarioConfig& cfg, bool compensated, int n_points, OutputFormat format) {
  MzSequence seq = cfg.sequence();
  if (compensated) seq = seq.with_gammas(compensation_gammas(seq, cfg.compensation, cfg.quadrature));
  const FringeResult fringe = fringe_scan(seq, n_points, cfg.quadrature, cfg.workers);

  json summary;
  summary["scenario"] = cfg.scenario;
  summary["compensated"] = compensated;
  summary["contrast"] = fringe.contrast;
  summary["p0"] = fringe.p_at_0;
  summary["ppi"] = fringe.p_at_pi;
  summary["gammas"] = seq.gammas();
  summary["ratios"] = seq.ratios();
  if (cfg.mc_samples > 0) {
    const McContrast mc = mc_contrast(seq, {cfg.mc_samples, cfg.seed, cfg.workers});
    summary["monte_carlo"] = {{"samples", cfg.mc_samples},
                              {"seed", cfg.seed},
                              {"rng", std::string(mc_rng_algorithm)},
                              {"contrast", mc.contrast},
                              {"contrast_std_error", mc.std_error},
                              {"p0", mc.p_at_0.mean},
                              {"ppi", mc.p_at_pi.mean}};
  }

  if (format == OutputFormat::json) {
    json j;
    j["config"] = cfg.to_json();
    j["summary"] = summary;
    for (const auto& [phi, p] : fringe.phi3_samples) j["samples"].push_back({phi, p});
    return {dump(j), {}};
  }

  CsvWriter csv("fringe", {cfg.to_json()});
  csv.comment("contrast=" + format_number(fringe.contrast) + " p0=" + format_number(fringe.p_at_0) +
              " ppi=" + format_number(fringe.p_at_pi));
  csv.header({"phi3_rad", "P2"});
  for (const auto& [phi, p] : fringe.phi3_samples) csv.row({phi, p});
  return {csv.str(), dump(summary)};
}

std::optional<SweepKind> parse_sweep_kind(const std::string& name) {
  if (name == "fidelity_vs_t") return SweepKind::fidelity_vs_t;
  if (name == "contrast_vs_T") return SweepKind::contrast_vs_T;
  return std::nullopt;
}

CommandOutput cmd_sweep(const ScenarioConfig& cfg, SweepKind kind, double lo, double hi, int n_points,
                        bool compensated, OutputFormat format) {
  if (!(lo >= 0) || !(hi > lo)) throw std::invalid_argument("sweep: invalid range");
  const auto xs = linspace(lo, hi, n_points);
  const MzSequence seq = cfg.sequence();
  const QuadratureSettings& q = cfg.quadrature;

  std::vector<double> plain(xs.size()), comp;
  std::string x_name, value_name;
  if (kind == SweepKind::fidelity_vs_t) {
    x_name = "t_s";
    value_name = "fidelity";
    const auto beam = cfg.beam();
    const auto cloud = cfg.cloud();
    const auto rows = parallel_map<std::pair<double, double>>(xs.size(), cfg.workers, [&](std::size_t i) {
      const double s = diameter_ratio(beam, cloud, xs[i]);
      const double f0 = pi_fidelity_at_ratio(s, 1.0, q);
      if (!compensated) return std::pair{f0, 0.0};
      return std::pair{f0, pi_fidelity_at_ratio(s, optimal_gamma_at_ratio(s, cfg.compensation.search, q), q)};
    });
    for (std::size_t i = 0; i < xs.size(); ++i) plain[i] = rows[i].first;
    if (compensated)
      for (const auto& r : rows) comp.push_back(r.second);
  } else {
    x_name = "T_s";
    value_name = "contrast";
    const auto a = contrast_vs_interval(seq, lo, hi, n_points, {}, q, cfg.workers);
    for (std::size_t i = 0; i < xs.size(); ++i) plain[i] = a[i].second;
    if (compensated)
      for (const auto& r : contrast_vs_interval(seq, lo, hi, n_points, compensator(cfg.compensation, q), q, cfg.workers))
        comp.push_back(r.second);
  }

  if (format == OutputFormat::json) {
    json j;
    j["config"] = cfg.to_json();
    j["x_name"] = x_name;
    j["x"] = xs;
    j[value_name + "_uncompensated"] = plain;
    if (compensated) j[value_name + "_compensated"] = comp;
    return {dump(j), {}};
  }

  CsvWriter csv("sweep", {cfg.to_json()});
  std::vector<std::string> columns{x_name, value_name + "_uncompensated"};
  if (compensated) columns.push_back(value_name + "_compensated");
  csv.header(columns);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> row{xs[i], plain[i]};
    if (compensated) row.push_back(comp[i]);
    csv.row(row);
  }
  return {csv.str(), {}};
}

CommandOutput cmd_plan(const ScenarioConfig& cfg, OutputFormat format) {
  const MzSequence seq = cfg.sequence();
  const CompensationPlan plan = build_plan(seq, cfg.compensation, cfg.quadrature);
  const double T = seq.interval_T > 0 ? seq.interval_T : 1.0;
  const double gain = relative_sensitivity_gain(plan.contrast_before, plan.contrast_after, T, T);

  if (format == OutputFormat::csv) {
    CsvWriter csv("plan", {cfg.to_json()});
    csv.comment("contrast_before=" + format_number(plan.contrast_before) +
                " contrast_after=" + format_number(plan.contrast_after) + " sensitivity_gain=" + format_number(gain));
    csv.header({"pulse", "t_fire_s", "ratio", "gamma", "fidelity_before", "fidelity_after"});
    for (std::size_t i = 0; i < 3; ++i)
      csv.row({double(i + 1), seq.pulses[i].t_fire, plan.ratio[i], plan.gamma[i], plan.fidelity_before[i],
               plan.fidelity_after[i]});
    return {csv.str(), {}};
  }

  json j;
  j["config"] = cfg.to_json();
  j["gammas"] = plan.gamma;
  for (std::size_t i = 0; i < 3; ++i)
    j["pulses"].push_back({{"pulse", i + 1},
                           {"t_fire_s", seq.pulses[i].t_fire},
                           {"ratio", plan.ratio[i]},
                           {"gamma", plan.gamma[i]},
                           {"relative_drive_intensity", plan.gamma[i]},
                           {"fidelity_before", plan.fidelity_before[i]},
                           {"fidelity_after", plan.fidelity_after[i]}});
  j["contrast_before"] = plan.contrast_before;
  j["contrast_after"] = plan.contrast_after;
  j["contrast_improvement"] = plan.contrast_after - plan.contrast_before;
  j["sensitivity_gain"] = gain;
  j["joint_optimization"] = cfg.compensation.joint;
  return {dump(j), {}};
}

CommandOutput cmd_mc_check(const ScenarioConfig& cfg, OutputFormat format) {
  const MzSequence seq = cfg.sequence();
  const McSettings mc{cfg.mc_samples > 0 ? cfg.mc_samples : default_mc_check_samples, cfg.seed, cfg.workers};
  const auto beam = cfg.beam();
  const auto cloud = cfg.cloud();

  const double single_quad = single_pulse_p2(beam, cloud, seq.t1, seq.tau0(), 1.0, cfg.quadrature);
  const McEstimate single_mc = mc_single_pulse_p2(beam, cloud, seq.t1, seq.tau0(), 1.0, mc);
  const double single_z = (single_mc.mean - single_quad) / single_mc.std_error;

  const double p0 = three_pulse_p2(seq, 0.0, cfg.quadrature);
  const double ppi = three_pulse_p2(seq, pi, cfg.quadrature);
  const double contrast_quad = fringe_contrast(ppi, p0);
  const McContrast contrast_mc = mc_contrast(seq, mc);
  const double contrast_z = (contrast_mc.contrast - contrast_quad) / contrast_mc.std_error;

  struct Row {
    const char* name;
    double quad, mean, se;
  };
  const Row rows[] = {
      {"single_pulse_p2_t1", single_quad, single_mc.mean, single_mc.std_error},
      {"p2_phi3_0", p0, contrast_mc.p_at_0.mean, contrast_mc.p_at_0.std_error},
      {"p2_phi3_pi", ppi, contrast_mc.p_at_pi.mean, contrast_mc.p_at_pi.std_error},
      {"contrast", contrast_quad, contrast_mc.contrast, contrast_mc.std_error},
  };

  if (format == OutputFormat::csv) {
    CsvWriter csv("mc-check", {cfg.to_json()});
    csv.comment("samples=" + std::to_string(mc.n) + " seed=" + std::to_string(mc.seed) +
                " rng=" + std::string(mc_rng_algorithm));
    csv.header({"quantity", "quadrature", "mc_mean", "mc_std_error", "z_score"});
    std::string body = csv.str();
    for (const auto& r : rows)
      body += std::string(r.name) + "," + format_number(r.quad) + "," + format_number(r.mean) + "," +
              format_number(r.se) + "," + format_number((r.mean - r.quad) / r.se) + "\n";
    return {body, {}};
  }

  json j;
  j["config"] = cfg.to_json();
  j["samples"] = mc.n;
  j["seed"] = mc.seed;
  j["rng"] = std::string(mc_rng_algorithm);
  for (const auto& r : rows)
    j["quantities"][r.name] = {{"quadrature", r.quad},
                               {"mc_mean", r.mean},
                               {"mc_std_error", r.se},
                               {"z_score", (r.mean - r.quad) / r.se}};
  j["single_pulse_agrees_within_3se"] = std::abs(single_z) <= 3.0;
  j["contrast_agrees_within_3se"] = std::abs(contrast_z) <= 3.0;
  j["comoving_model_gap"] = contrast_mc.contrast - contrast_quad;
  return {dump(j), {}};
}

}  // namespace aiexp
