#include "aiexp/interferometer.hpp"

#include <cmath>
#include <stdexcept>

#include "aiexp/constants.hpp"
#include "aiexp/parallel.hpp"

namespace aiexp {

void RamanPulse::validate() const {
  if (!(tau >= 0)) throw std::invalid_argument("RamanPulse: duration must be non-negative");
  if (!(gamma > 0)) throw std::invalid_argument("RamanPulse: gamma must be positive");
  if (!(t_fire >= 0)) throw std::invalid_argument("RamanPulse: firing time must be non-negative");
}

MzSequence MzSequence::standard(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t1,
                                double interval_T) {
  const double tau0 = pi / beam.omega_max;
  MzSequence seq{beam,
                 cloud,
                 t1,
                 interval_T,
                 {RamanPulse{tau0 / 2, 1.0, 0.0, t1}, RamanPulse{tau0, 1.0, 0.0, t1 + interval_T},
                  RamanPulse{tau0 / 2, 1.0, 0.0, t1 + 2 * interval_T}}};
  seq.validate();
  return seq;
}

double MzSequence::tau0() const { return pi / beam.omega_max; }

std::array<double, 3> MzSequence::ratios() const {
  std::array<double, 3> s{};
  for (std::size_t i = 0; i < 3; ++i) s[i] = diameter_ratio(beam, cloud, pulses[i].t_fire);
  return s;
}

std::array<double, 3> MzSequence::gammas() const { return {pulses[0].gamma, pulses[1].gamma, pulses[2].gamma}; }

MzSequence MzSequence::with_interval(double T) const {
  if (!(T >= 0)) throw std::invalid_argument("MzSequence: interval must be non-negative");
  MzSequence out = *this;
  out.interval_T = T;
  for (std::size_t i = 0; i < 3; ++i) out.pulses[i].t_fire = t1 + static_cast<double>(i) * T;
  return out;
}

MzSequence MzSequence::with_gammas(const std::array<double, 3>& g) const {
  MzSequence out = *this;
  for (std::size_t i = 0; i < 3; ++i) out.pulses[i].gamma = g[i];
  out.validate();
  return out;
}

MzSequence MzSequence::as_duration_scaled() const {
  MzSequence out = *this;
  for (auto& p : out.pulses) {
    p.tau *= p.gamma;
    p.gamma = 1.0;
  }
  return out;
}

void MzSequence::validate() const {
  if (!(t1 >= 0)) throw std::invalid_argument("MzSequence: first pulse time must be non-negative");
  if (!(interval_T >= 0)) throw std::invalid_argument("MzSequence: interval must be non-negative");
  for (const auto& p : pulses) p.validate();
  for (std::size_t i = 1; i < 3; ++i)
    if (pulses[i].t_fire < pulses[i - 1].t_fire)
      throw std::invalid_argument("MzSequence: firing times must be non-decreasing");
}

double fringe_contrast(double p_at_pi, double p_at_0) {
  const double sum = p_at_pi + p_at_0;
  if (sum <= 0) return 0.0;
  return (p_at_pi - p_at_0) / sum;
}

double single_pulse_p2_at_ratio(double ratio, double pulse_area, const QuadratureSettings& q) {
  if (!(ratio > 0)) throw std::invalid_argument("single_pulse_p2: diameter ratio must be positive");
  if (!(pulse_area >= 0)) throw std::invalid_argument("single_pulse_p2: pulse area must be non-negative");
  if (pulse_area == 0) return 0.0;

  const double inv_two_s2 = 1.0 / (2 * ratio * ratio);
  auto p2 = [=](double rho) {
    return transfer_matrix(pulse_area * std::exp(-rho * rho * inv_two_s2), 1.0).transition_probability();
  };
  return radial_average(p2, q.grid, q.detection);
}

double single_pulse_p2(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double tau,
                       double gamma, const QuadratureSettings& q) {
  if (!(tau >= 0)) throw std::domain_error("single_pulse_p2: duration must be non-negative");
  if (!(gamma > 0)) throw std::domain_error("single_pulse_p2: gamma must be positive");
  return single_pulse_p2_at_ratio(diameter_ratio(beam, cloud, t), gamma * beam.omega_max * tau, q);
}

std::vector<std::pair<double, double>> rabi_curve(const RamanBeam<double>& beam, const AtomCloud<double>& cloud,
                                                  double t, double tau_lo, double tau_hi, int n_points,
                                                  double gamma, const QuadratureSettings& q) {
  if (n_points < 2) throw std::invalid_argument("rabi_curve: need at least two points");
  if (!(tau_lo >= 0) || !(tau_hi > tau_lo)) throw std::invalid_argument("rabi_curve: invalid duration range");

  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(n_points));
  for (double tau : linspace(tau_lo, tau_hi, n_points))
    curve.emplace_back(tau, single_pulse_p2(beam, cloud, t, tau, gamma, q));
  return curve;
}

double pi_fidelity(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double gamma,
                   const QuadratureSettings& q) {
  return single_pulse_p2(beam, cloud, t, pi / beam.omega_max, gamma, q);
}

double pi_fidelity_at_ratio(double ratio, double gamma, const QuadratureSettings& q) {
  if (!(gamma > 0)) throw std::domain_error("pi_fidelity: gamma must be positive");
  return single_pulse_p2_at_ratio(ratio, gamma * pi, q);
}

namespace {

struct PulseAtRadius {
  double rabi;  // gamma * Omega_max
  double inv_two_s2;
  double tau;
  double t_fire;
  double phi;
};

std::array<PulseAtRadius, 3> prepare(const MzSequence& seq, double phi3) {
  const auto s = seq.ratios();
  std::array<PulseAtRadius, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = seq.pulses[i];
    out[i] = {p.gamma * seq.beam.omega_max, 1.0 / (2 * s[i] * s[i]), p.tau, p.t_fire, i == 2 ? phi3 : p.phi};
  }
  return out;
}

TwoLevelState<double> propagate(const std::array<PulseAtRadius, 3>& pulses, double rho) {
  auto state = TwoLevelState<double>::ground();
  const double rho2 = rho * rho;
  for (const auto& p : pulses) {
    const auto m = transfer_matrix(p.rabi * std::exp(-rho2 * p.inv_two_s2), p.tau, 0.0, p.t_fire, p.phi);
    state = apply_transfer(m, state);
  }
  return state;
}

}  // namespace

TwoLevelState<double> three_pulse_state(const MzSequence& seq, double rho, double phi3) {
  if (!(rho >= 0)) throw std::domain_error("three_pulse_state: radius must be non-negative");
  return propagate(prepare(seq, phi3), rho);
}

double three_pulse_p2(const MzSequence& seq, double phi3, const QuadratureSettings& q) {
  seq.validate();
  const auto pulses = prepare(seq, phi3);
  return radial_average([&](double rho) { return propagate(pulses, rho).p2(); }, q.grid, q.detection);
}

FringeResult fringe_scan(const MzSequence& seq, int n_points, const QuadratureSettings& q, unsigned workers) {
  if (n_points < 2) throw std::invalid_argument("fringe_scan: need at least two points");
  const auto phis = linspace(0.0, two_pi, n_points);
  FringeResult r;
  r.phi3_samples = parallel_map<std::pair<double, double>>(
      phis.size(), workers, [&](std::size_t i) { return std::pair{phis[i], three_pulse_p2(seq, phis[i], q)}; });
  r.p_at_0 = three_pulse_p2(seq, 0.0, q);
  r.p_at_pi = three_pulse_p2(seq, pi, q);
  r.contrast = fringe_contrast(r.p_at_pi, r.p_at_0);
  return r;
}

std::vector<std::pair<double, double>> contrast_vs_interval(const MzSequence& seq, double T_lo, double T_hi,
                                                            int n_points, const SequenceTransform& compensate,
                                                            const QuadratureSettings& q, unsigned workers) {
  if (n_points < 1) throw std::invalid_argument("contrast_vs_interval: need at least one point");
  if (!(T_lo >= 0) || !(T_hi >= T_lo)) throw std::invalid_argument("contrast_vs_interval: invalid interval range");

  const auto Ts = n_points == 1 ? std::vector<double>{T_lo} : linspace(T_lo, T_hi, n_points);
  return parallel_map<std::pair<double, double>>(Ts.size(), workers, [&](std::size_t i) {
    MzSequence s = seq.with_interval(Ts[i]);
    if (compensate) s = compensate(s);
    return std::pair{Ts[i], fringe_contrast(three_pulse_p2(s, pi, q), three_pulse_p2(s, 0.0, q))};
  });
}

double relative_sensitivity_gain(double c_before, double c_after, double t_before, double t_after) {
  if (!(c_before > 0) || !(c_after > 0) || !(t_before > 0) || !(t_after > 0))
    throw std::domain_error("relative_sensitivity_gain: all inputs must be positive");
  const double t_ratio = t_after / t_before;
  return c_after / c_before * t_ratio * t_ratio;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + i * step;
  return xs;
}

}  // namespace aiexp
