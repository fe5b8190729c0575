#pragma once

// Effective two-level Raman dynamics, Gaussian beam profile and ballistic
// cloud expansion. Everything here is closed form; SI units throughout.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "aiexp/constants.hpp"

namespace aiexp {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Amplitudes = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

/// Amplitude pair (c1, c2) on the lower and upper ground states.
template <typename Scalar = double>
struct TwoLevelState {
  Amplitudes<Scalar> amplitudes{Complex<Scalar>(1), Complex<Scalar>(0)};

  static TwoLevelState ground() { return {}; }

  static TwoLevelState from(Complex<Scalar> c1, Complex<Scalar> c2) {
    TwoLevelState s;
    s.amplitudes << c1, c2;
    return s;
  }

  Complex<Scalar> c1() const { return amplitudes(0); }
  Complex<Scalar> c2() const { return amplitudes(1); }
  Scalar p1() const { return std::norm(amplitudes(0)); }
  Scalar p2() const { return std::norm(amplitudes(1)); }
  Scalar norm_squared() const { return p1() + p2(); }
};

/// Pulse propagator [[a, -i b], [-i b*, a*]]. The family is closed under
/// products and adjoints, so both stay in this two-number form.
template <typename Scalar = double>
struct PulseTransfer {
  Complex<Scalar> a{1};
  Complex<Scalar> b{0};

  static PulseTransfer identity() { return {}; }

  Matrix2c<Scalar> matrix() const {
    const Complex<Scalar> minus_i(0, -1);
    Matrix2c<Scalar> m;
    m << a, minus_i * b, minus_i * std::conj(b), std::conj(a);
    return m;
  }

  PulseTransfer adjoint() const { return {std::conj(a), -b}; }

  /// Probability |b|^2 of leaving a basis state.
  Scalar transition_probability() const { return std::norm(b); }
};

/// Composition: (lhs * rhs) applies rhs first.
template <typename Scalar>
PulseTransfer<Scalar> operator*(const PulseTransfer<Scalar>& lhs, const PulseTransfer<Scalar>& rhs) {
  return {lhs.a * rhs.a - lhs.b * std::conj(rhs.b), lhs.a * rhs.b + lhs.b * std::conj(rhs.a)};
}

/// Propagator of a square Raman pulse with effective Rabi frequency
/// `omega_eff`, duration `tau`, two-photon detuning `delta`, fired at `t0`
/// with laser phase `phi`. With no coupling and no detuning the rotating
/// frame does not evolve and the identity is returned.
template <typename Scalar = double>
PulseTransfer<Scalar> transfer_matrix(Scalar omega_eff, Scalar tau, Scalar delta = 0, Scalar t0 = 0,
                                      Scalar phi = 0) {
  if (!(tau >= 0)) throw std::domain_error("transfer_matrix: pulse duration must be non-negative");
  if (!(omega_eff >= 0)) throw std::domain_error("transfer_matrix: Rabi frequency must be non-negative");

  const Scalar omega_r = std::hypot(omega_eff, delta);
  if (omega_r == 0) return PulseTransfer<Scalar>::identity();

  const Scalar sin_alpha = delta / omega_r;
  const Scalar cos_alpha = omega_eff / omega_r;
  const Scalar half_area = omega_r * tau / 2;
  const Scalar c = std::cos(half_area);
  const Scalar s = std::sin(half_area);

  return {Complex<Scalar>(c, -sin_alpha * s), std::polar(cos_alpha * s, delta * t0 + phi)};
}

template <typename Scalar>
TwoLevelState<Scalar> apply_transfer(const PulseTransfer<Scalar>& m, const TwoLevelState<Scalar>& s) {
  return {m.matrix() * s.amplitudes};
}

/// Laser-side inputs from which the peak two-photon Rabi frequency follows.
template <typename Scalar = double>
struct LaserParameters {
  Scalar gamma_nat;        // natural linewidth, rad/s
  Scalar i_sat;            // saturation intensity, W/m^2
  Scalar p0;               // total power, W
  Scalar detuning_single;  // single-photon detuning, rad/s
};

/// Omega_max = Gamma^2 / (2 I_s Delta) * P0 / (pi w^2).
template <typename Scalar = double>
Scalar omega_max_from_laser(Scalar gamma_nat, Scalar i_sat, Scalar p0, Scalar detuning_single, Scalar w) {
  if (!(detuning_single > 0)) throw std::domain_error("omega_max_from_laser: detuning must be positive");
  if (!(i_sat > 0)) throw std::domain_error("omega_max_from_laser: saturation intensity must be positive");
  if (!(gamma_nat > 0) || !(p0 > 0) || !(w > 0))
    throw std::domain_error("omega_max_from_laser: linewidth, power and beam width must be positive");
  return gamma_nat * gamma_nat / (2 * i_sat * detuning_single) * p0 / (Scalar(pi) * w * w);
}

/// Gaussian Raman beam. `w` is the width parameter in exp(-r^2 / 2w^2).
template <typename Scalar = double>
struct RamanBeam {
  Scalar w;
  Scalar omega_max;
  std::optional<LaserParameters<Scalar>> laser;

  RamanBeam(Scalar width, Scalar peak_rabi) : w(width), omega_max(peak_rabi) {
    if (!(w > 0)) throw std::domain_error("RamanBeam: width must be positive");
    if (!(omega_max > 0)) throw std::domain_error("RamanBeam: peak Rabi frequency must be positive");
  }

  static RamanBeam from_laser(const LaserParameters<Scalar>& p, Scalar width) {
    RamanBeam beam(width, omega_max_from_laser(p.gamma_nat, p.i_sat, p.p0, p.detuning_single, width));
    beam.laser = p;
    return beam;
  }
};

template <typename Scalar>
Scalar effective_rabi(const RamanBeam<Scalar>& beam, Scalar r) {
  if (!(r >= 0)) throw std::domain_error("effective_rabi: radius must be non-negative");
  return beam.omega_max * std::exp(-r * r / (2 * beam.w * beam.w));
}

/// Thermal cloud: initial 1/e width, temperature and atomic mass.
template <typename Scalar = double>
struct AtomCloud {
  Scalar sigma0;
  Scalar temperature;
  Scalar mass = Scalar(rb87_mass);

  AtomCloud(Scalar initial_width, Scalar temp, Scalar atom_mass = Scalar(rb87_mass))
      : sigma0(initial_width), temperature(temp), mass(atom_mass) {
    if (!(sigma0 > 0)) throw std::domain_error("AtomCloud: initial width must be positive");
    if (!(temperature >= 0)) throw std::domain_error("AtomCloud: temperature must be non-negative");
    if (!(mass > 0)) throw std::domain_error("AtomCloud: mass must be positive");
  }

  /// sqrt(k_B T / M), per horizontal axis.
  Scalar velocity_width() const { return std::sqrt(Scalar(boltzmann) * temperature / mass); }
};

template <typename Scalar>
Scalar cloud_sigma(const AtomCloud<Scalar>& cloud, Scalar t) {
  if (!(t >= 0)) throw std::domain_error("cloud_sigma: time must be non-negative");
  const Scalar sv = cloud.velocity_width();
  return std::sqrt(cloud.sigma0 * cloud.sigma0 + sv * sv * t * t);
}

/// s = w / sigma(t).
template <typename Scalar>
Scalar diameter_ratio(const RamanBeam<Scalar>& beam, const AtomCloud<Scalar>& cloud, Scalar t) {
  return beam.w / cloud_sigma(cloud, t);
}

}  // namespace aiexp
