#include "aiexp/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "aiexp/montecarlo.hpp"

namespace aiexp {

using nlohmann::json;

namespace {

using Setter = std::function<void(const json&, const std::string&)>;

void apply_section(const json& obj, const std::string& path, const std::map<std::string, Setter>& setters) {
  if (!obj.is_object()) throw ConfigError("field '" + path + "': expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown field '" + field + "'");
    it->second(value, field);
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("field '" + path + "': expected a number");
  return v.get<double>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError("field '" + path + "': expected true or false");
  return v.get<bool>();
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError("field '" + path + "': expected an integer");
  return v.get<long long>();
}

std::array<double, 3> triple(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("field '" + path + "': expected an array of three numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

// Setter storing `scale * value` into `target`.
Setter scaled(double& target, double scale) {
  return [&target, scale](const json& v, const std::string& p) { target = number(v, p) * scale; };
}

LaserParameters<double>& laser_of(ScenarioConfig& cfg) {
  constexpr double unset = std::numeric_limits<double>::quiet_NaN();
  if (!cfg.laser) cfg.laser = LaserParameters<double>{unset, unset, unset, unset};
  return *cfg.laser;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ScenarioConfig ScenarioConfig::preset(std::string_view name) {
  ScenarioConfig cfg;
  cfg.scenario = std::string(name);
  if (name == "normal" || name == "custom") {
    cfg.temperature = 7e-6;
    cfg.w = 20e-3;
  } else if (name == "better") {
    cfg.temperature = 3e-6;
    cfg.w = 30e-3;
  } else if (name == "ideal") {
    // No expansion and a beam 100 cloud widths across: s = 100 at every pulse.
    cfg.temperature = 0.0;
    cfg.w = 100 * cfg.sigma0;
  } else {
    throw ConfigError("unknown scenario '" + std::string(name) + "' (expected normal, better, ideal or custom)");
  }
  return cfg;
}

RamanBeam<double> ScenarioConfig::beam() const {
  if (laser) return RamanBeam<double>::from_laser(*laser, w);
  return RamanBeam<double>(w, omega_max0);
}

AtomCloud<double> ScenarioConfig::cloud() const { return AtomCloud<double>(sigma0, temperature, mass); }

MzSequence ScenarioConfig::sequence() const {
  MzSequence seq = MzSequence::standard(beam(), cloud(), t1, interval_T);
  const double tau0 = seq.tau0();
  for (std::size_t i = 0; i < 3; ++i) {
    seq.pulses[i].tau = pulse_areas_pi[i] * tau0;
    seq.pulses[i].phi = phases[i];
  }
  seq.validate();
  return seq;
}

void ScenarioConfig::validate() const {
  if (laser && (std::isnan(laser->gamma_nat) || std::isnan(laser->i_sat) || std::isnan(laser->p0) ||
                std::isnan(laser->detuning_single)))
    throw ConfigError("field 'beam.laser': linewidth, saturation intensity, power and detuning are all required");
  try {
    (void)sequence();
    quadrature.grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (quadrature.detection && !(quadrature.detection->rho > 0))
    throw ConfigError("field 'quadrature.detection_rho': must be positive");
  if (mc_samples < 0) throw ConfigError("field 'monte_carlo.samples': must be non-negative");
  if (workers < 1) throw ConfigError("field 'workers': must be at least 1");
  if (compensation.search.grid_points < 3) throw ConfigError("field 'compensation.grid_points': must be at least 3");
  if (!(compensation.search.hi > compensation.search.lo) || !(compensation.search.lo > 0))
    throw ConfigError("fields 'compensation.gamma_lo/gamma_hi': invalid range");
  if (!(compensation.search.tolerance > 0)) throw ConfigError("field 'compensation.tolerance': must be positive");
}

json ScenarioConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["cloud"] = {{"sigma0_m", sigma0}, {"temperature_K", temperature}, {"mass_kg", mass}};
  j["beam"] = {{"w_m", w}, {"omega_max0_rad_s", beam().omega_max}};
  if (laser)
    j["beam"]["laser"] = {{"gamma_nat_rad_s", laser->gamma_nat},
                          {"i_sat_W_m2", laser->i_sat},
                          {"p0_W", laser->p0},
                          {"detuning_rad_s", laser->detuning_single}};
  j["sequence"] = {{"t1_s", t1}, {"T_s", interval_T}, {"pulse_areas_pi", pulse_areas_pi}, {"phases_rad", phases}};
  j["quadrature"] = {{"rho_max", quadrature.grid.rho_max},
                     {"tolerance", quadrature.grid.tolerance},
                     {"max_subdivisions", quadrature.grid.max_subdivisions},
                     {"detection_rho", quadrature.detection ? json(quadrature.detection->rho) : json(nullptr)},
                     {"detection_renormalize", quadrature.detection ? quadrature.detection->renormalize : true}};
  j["compensation"] = {{"compensate_first", compensation.compensate_first},
                       {"joint", compensation.joint},
                       {"gamma_lo", compensation.search.lo},
                       {"gamma_hi", compensation.search.hi},
                       {"grid_points", compensation.search.grid_points},
                       {"tolerance", compensation.search.tolerance}};
  j["monte_carlo"] = {{"samples", mc_samples}, {"seed", seed}, {"rng", std::string(mc_rng_algorithm)}};
  j["workers"] = workers;
  return j;
}

void apply_config_json(ScenarioConfig& cfg, const json& doc) {
  // Resolved after the whole document, since object keys arrive sorted.
  std::optional<bool> renormalize;
  const std::map<std::string, Setter> cloud{
      {"sigma0_m", scaled(cfg.sigma0, 1.0)},
      {"sigma0_mm", scaled(cfg.sigma0, 1e-3)},
      {"temperature_K", scaled(cfg.temperature, 1.0)},
      {"temperature_uK", scaled(cfg.temperature, 1e-6)},
      {"mass_kg", scaled(cfg.mass, 1.0)},
  };

  auto laser_field = [&cfg](double LaserParameters<double>::*field, double scale) -> Setter {
    return [&cfg, field, scale](const json& v, const std::string& p) { laser_of(cfg).*field = number(v, p) * scale; };
  };
  const std::map<std::string, Setter> laser{
      {"gamma_nat_rad_s", laser_field(&LaserParameters<double>::gamma_nat, 1.0)},
      {"gamma_nat_MHz", laser_field(&LaserParameters<double>::gamma_nat, two_pi * 1e6)},
      {"i_sat_W_m2", laser_field(&LaserParameters<double>::i_sat, 1.0)},
      {"p0_W", laser_field(&LaserParameters<double>::p0, 1.0)},
      {"p0_mW", laser_field(&LaserParameters<double>::p0, 1e-3)},
      {"detuning_rad_s", laser_field(&LaserParameters<double>::detuning_single, 1.0)},
      {"detuning_GHz", laser_field(&LaserParameters<double>::detuning_single, two_pi * 1e9)},
  };
  const std::map<std::string, Setter> beam{
      {"w_m", scaled(cfg.w, 1.0)},
      {"w_mm", scaled(cfg.w, 1e-3)},
      {"omega_max0_rad_s", scaled(cfg.omega_max0, 1.0)},
      {"omega_max0_kHz", scaled(cfg.omega_max0, two_pi * 1e3)},
      {"laser", [&](const json& v, const std::string& p) { apply_section(v, p, laser); }},
  };
  const std::map<std::string, Setter> sequence{
      {"t1_s", scaled(cfg.t1, 1.0)},
      {"t1_ms", scaled(cfg.t1, 1e-3)},
      {"T_s", scaled(cfg.interval_T, 1.0)},
      {"T_ms", scaled(cfg.interval_T, 1e-3)},
      {"pulse_areas_pi", [&](const json& v, const std::string& p) { cfg.pulse_areas_pi = triple(v, p); }},
      {"phases_rad", [&](const json& v, const std::string& p) { cfg.phases = triple(v, p); }},
  };
  const std::map<std::string, Setter> quadrature{
      {"rho_max", scaled(cfg.quadrature.grid.rho_max, 1.0)},
      {"tolerance", scaled(cfg.quadrature.grid.tolerance, 1.0)},
      {"max_subdivisions",
       [&](const json& v, const std::string& p) { cfg.quadrature.grid.max_subdivisions = int(integer(v, p)); }},
      {"detection_rho",
       [&](const json& v, const std::string& p) {
         if (v.is_null()) {
           cfg.quadrature.detection.reset();
           return;
         }
         const bool renorm = cfg.quadrature.detection ? cfg.quadrature.detection->renormalize : true;
         cfg.quadrature.detection = DetectionZone{number(v, p), renorm};
       }},
      {"detection_renormalize",
       [&](const json& v, const std::string& p) { renormalize = boolean(v, p); }},
  };
  const std::map<std::string, Setter> compensation{
      {"compensate_first",
       [&](const json& v, const std::string& p) { cfg.compensation.compensate_first = boolean(v, p); }},
      {"joint", [&](const json& v, const std::string& p) { cfg.compensation.joint = boolean(v, p); }},
      {"gamma_lo", scaled(cfg.compensation.search.lo, 1.0)},
      {"gamma_hi", scaled(cfg.compensation.search.hi, 1.0)},
      {"grid_points",
       [&](const json& v, const std::string& p) { cfg.compensation.search.grid_points = int(integer(v, p)); }},
      {"tolerance", scaled(cfg.compensation.search.tolerance, 1.0)},
  };
  const std::map<std::string, Setter> monte_carlo{
      {"samples", [&](const json& v, const std::string& p) { cfg.mc_samples = integer(v, p); }},
      {"seed",
       [&](const json& v, const std::string& p) {
         if (!v.is_number_unsigned()) throw ConfigError("field '" + p + "': expected a non-negative integer");
         cfg.seed = v.get<std::uint64_t>();
       }},
  };
  const std::map<std::string, Setter> root{
      {"scenario",
       [](const json& v, const std::string& p) {
         if (!v.is_string()) throw ConfigError("field '" + p + "': expected a string");
       }},
      {"cloud", [&](const json& v, const std::string& p) { apply_section(v, p, cloud); }},
      {"beam", [&](const json& v, const std::string& p) { apply_section(v, p, beam); }},
      {"sequence", [&](const json& v, const std::string& p) { apply_section(v, p, sequence); }},
      {"quadrature", [&](const json& v, const std::string& p) { apply_section(v, p, quadrature); }},
      {"compensation", [&](const json& v, const std::string& p) { apply_section(v, p, compensation); }},
      {"monte_carlo", [&](const json& v, const std::string& p) { apply_section(v, p, monte_carlo); }},
      {"workers",
       [&](const json& v, const std::string& p) {
         const long long n = integer(v, p);
         if (n < 1) throw ConfigError("field '" + p + "': must be at least 1");
         cfg.workers = static_cast<unsigned>(n);
       }},
  };
  apply_section(doc, "", root);
  if (renormalize) {
    if (cfg.quadrature.detection)
      cfg.quadrature.detection->renormalize = *renormalize;
    else if (!*renormalize)
      throw ConfigError("field 'quadrature.detection_renormalize': requires detection_rho");
  }
}

ScenarioConfig parse_config(std::string_view text, const std::optional<std::string>& scenario_override) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  std::string name = "normal";
  if (auto it = doc.find("scenario"); it != doc.end() && it->is_string()) name = it->get<std::string>();
  if (scenario_override) name = *scenario_override;

  ScenarioConfig cfg = ScenarioConfig::preset(name);
  apply_config_json(cfg, doc);
  cfg.scenario = name;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::optional<std::string>& path, const std::optional<std::string>& scenario_override) {
  if (!path) {
    ScenarioConfig cfg = ScenarioConfig::preset(scenario_override.value_or("normal"));
    cfg.validate();
    return cfg;
  }
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config file '" + *path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), scenario_override);
  } catch (const ConfigError& e) {
    throw ConfigError(*path + ": " + e.what());
  }
}

}  // namespace aiexp
