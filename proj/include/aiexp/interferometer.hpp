#pragma once

// Single-pulse Rabi response and pi/2 - pi - pi/2 fringes of a thermal cloud
// in a Gaussian Raman beam.
//
// Atoms are labelled by their comoving radius rho = r / sigma(t). An atom at
// rho sees pulse i at r_i = rho * sigma(t_i), i.e. an effective Rabi
// frequency gamma_i * Omega_max * exp(-rho^2 / (2 s_i^2)) with s_i = w / sigma(t_i).

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "aiexp/core_physics.hpp"
#include "aiexp/quadrature.hpp"

namespace aiexp {

struct QuadratureSettings {
  RadialGrid grid{};
  std::optional<DetectionZone> detection{};
};

struct RamanPulse {
  double tau;          // s
  double gamma = 1.0;  // intensity factor on Omega_max
  double phi = 0.0;    // rad
  double t_fire = 0.0; // s after launch

  void validate() const;
};

/// Beamsplitter, mirror, beamsplitter. Pulse i fires at t1 + i * T.
struct MzSequence {
  RamanBeam<double> beam;
  AtomCloud<double> cloud;
  double t1;
  double interval_T;
  std::array<RamanPulse, 3> pulses;

  /// Durations tau0/2, tau0, tau0/2 with tau0 = pi / Omega_max, zero
  /// phases and unit gammas.
  static MzSequence standard(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t1,
                             double interval_T);

  double tau0() const;
  std::array<double, 3> ratios() const;
  std::array<double, 3> gammas() const;

  MzSequence with_interval(double T) const;
  MzSequence with_gammas(const std::array<double, 3>& gammas) const;
  /// Moves each gamma into the duration: tau_i -> gamma_i tau_i, gamma_i -> 1.
  MzSequence as_duration_scaled() const;

  void validate() const;
};

struct FringeResult {
  std::vector<std::pair<double, double>> phi3_samples;
  double contrast;
  double p_at_0;
  double p_at_pi;
};

/// Two-point contrast (P(pi) - P(0)) / (P(pi) + P(0)).
double fringe_contrast(double p_at_pi, double p_at_0);

// Single pulse from the ground state.

double single_pulse_p2_at_ratio(double ratio, double pulse_area, const QuadratureSettings& q = {});

double single_pulse_p2(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double tau,
                       double gamma = 1.0, const QuadratureSettings& q = {});

std::vector<std::pair<double, double>> rabi_curve(const RamanBeam<double>& beam, const AtomCloud<double>& cloud,
                                                  double t, double tau_lo, double tau_hi, int n_points,
                                                  double gamma = 1.0, const QuadratureSettings& q = {});

/// P2 at the nominal pi duration pi / Omega_max, with the intensity scaled by gamma.
double pi_fidelity(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double gamma = 1.0,
                   const QuadratureSettings& q = {});

double pi_fidelity_at_ratio(double ratio, double gamma = 1.0, const QuadratureSettings& q = {});

// Three-pulse sequence.

/// Final state of the atom at comoving radius rho. `phi3` overrides the
/// third pulse phase.
TwoLevelState<double> three_pulse_state(const MzSequence& seq, double rho, double phi3);

double three_pulse_p2(const MzSequence& seq, double phi3, const QuadratureSettings& q = {});

FringeResult fringe_scan(const MzSequence& seq, int n_points, const QuadratureSettings& q = {},
                         unsigned workers = 1);

/// Maps a sequence (with firing times already set) to its compensated form.
using SequenceTransform = std::function<MzSequence(const MzSequence&)>;

/// Contrast over n_points intervals T in [T_lo, T_hi]. When `compensate`
/// is set it is applied to every rebuilt sequence before evaluation.
std::vector<std::pair<double, double>> contrast_vs_interval(const MzSequence& seq, double T_lo, double T_hi,
                                                            int n_points, const SequenceTransform& compensate = {},
                                                            const QuadratureSettings& q = {}, unsigned workers = 1);

/// Sensitivity improvement factor from S ~ 1 / (k_eff T^2 C sqrt(N)) at
/// fixed k_eff and N.
double relative_sensitivity_gain(double c_before, double c_after, double t_before, double t_after);

/// n evenly spaced points on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace aiexp
