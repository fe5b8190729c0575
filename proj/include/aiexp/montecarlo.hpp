#pragma once

// Monte Carlo reference for the ensemble averages. Atoms are drawn from the
// separable 6D Gaussian phase-space density, flown ballistically, and each
// pulse acts at the atom's true horizontal radius at its firing time. No
// comoving-radius assumption is made.
//
// Random numbers are counter based: atom k of a run with seed S always gets
// the same six normals, whatever the shard layout or worker count.

#include <cstdint>
#include <string_view>
#include <vector>

#include "aiexp/interferometer.hpp"

namespace aiexp {

inline constexpr std::string_view mc_rng_algorithm = "splitmix64-counter/box-muller";

struct PhaseSpaceSample {
  double x0, y0, z0;
  double vx0, vy0, vz0;

  /// Horizontal distance from the beam axis after free flight for t.
  double radius_at(double t) const;
};

struct McEstimate {
  double mean;
  double std_error;
  long long n_samples;
};

struct McContrast {
  McEstimate p_at_0;
  McEstimate p_at_pi;
  double contrast;
  /// Delta-method error of the two-point contrast, using the covariance of
  /// the paired per-atom probabilities.
  double std_error;
};

struct McSettings {
  long long n = 1'000'000;
  std::uint64_t seed = 20240517;
  unsigned workers = 1;
};

PhaseSpaceSample sample_atom(const AtomCloud<double>& cloud, std::uint64_t seed, std::uint64_t index);

std::vector<PhaseSpaceSample> sample_cloud(const AtomCloud<double>& cloud, long long n, std::uint64_t seed);

/// Final state of one trajectory through the three pulses.
TwoLevelState<double> propagate_atom(const MzSequence& seq, const PhaseSpaceSample& atom, double phi3);

McEstimate mc_single_pulse_p2(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double tau,
                              double gamma, const McSettings& mc);

McEstimate mc_three_pulse_p2(const MzSequence& seq, double phi3, const McSettings& mc);

McContrast mc_contrast(const MzSequence& seq, const McSettings& mc);

}  // namespace aiexp
