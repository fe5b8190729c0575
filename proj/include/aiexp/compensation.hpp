#pragma once

// Per-pulse intensity compensation: each Raman pulse gets the factor gamma_i
// on Omega_max that puts the peak of its Rabi curve back at the nominal pi
// duration for the cloud size it sees.

#include <array>
#include <stdexcept>
#include <string>

#include "aiexp/interferometer.hpp"

namespace aiexp {

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coarse scan brackets the first Rabi maximum, golden section refines it.
struct GammaSearch {
  double lo = 1.0;
  double hi = 2.5;
  int grid_points = 64;
  double tolerance = 1e-4;
};

struct CompensationOptions {
  GammaSearch search{};
  /// When false the first beamsplitter keeps gamma = 1.
  bool compensate_first = true;
  /// Extension: after the per-pulse solution, maximize the fringe contrast
  /// jointly over all three gammas by cyclic coordinate ascent.
  bool joint = false;
};

struct CompensationPlan {
  std::array<double, 3> ratio{};
  std::array<double, 3> gamma{1.0, 1.0, 1.0};
  std::array<double, 3> fidelity_before{};
  std::array<double, 3> fidelity_after{};
  double contrast_before = 0.0;
  double contrast_after = 0.0;
};

double optimal_gamma_at_ratio(double ratio, const GammaSearch& search = {}, const QuadratureSettings& q = {});

double optimal_gamma(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t,
                     const GammaSearch& search = {}, const QuadratureSettings& q = {});

/// Gammas for the three pulses of `seq` at their firing times.
std::array<double, 3> compensation_gammas(const MzSequence& seq, const CompensationOptions& options = {},
                                          const QuadratureSettings& q = {});

CompensationPlan build_plan(const MzSequence& seq, const CompensationOptions& options = {},
                            const QuadratureSettings& q = {});

inline MzSequence apply_plan(const MzSequence& seq, const CompensationPlan& plan) {
  return seq.with_gammas(plan.gamma);
}

/// Transform for contrast_vs_interval and sweeps.
SequenceTransform compensator(const CompensationOptions& options = {}, const QuadratureSettings& q = {});

}  // namespace aiexp
