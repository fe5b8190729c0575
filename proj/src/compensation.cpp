#include "aiexp/compensation.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "aiexp/constants.hpp"
#include "aiexp/golden_section.hpp"

namespace aiexp {

double optimal_gamma_at_ratio(double ratio, const GammaSearch& search, const QuadratureSettings& q) {
  if (search.grid_points < 3) throw std::invalid_argument("GammaSearch: need at least three grid points");
  if (!(search.hi > search.lo) || !(search.lo > 0)) throw std::invalid_argument("GammaSearch: invalid range");

  const auto grid = linspace(search.lo, search.hi, search.grid_points);
  std::vector<double> fidelity(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) fidelity[k] = pi_fidelity_at_ratio(ratio, grid[k], q);

  // First local maximum along the scan; later Rabi peaks are ignored.
  std::size_t peak = grid.size();
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (fidelity[k] >= fidelity[k + 1]) {
      peak = k;
      break;
    }
  }
  if (peak == grid.size()) {
    std::ostringstream msg;
    msg << "optimal_gamma: no interior maximum in [" << search.lo << ", " << search.hi << "] at ratio " << ratio;
    throw OptimizationError(msg.str());
  }

  const double a = grid[peak == 0 ? 0 : peak - 1];
  const double b = grid[peak + 1];
  return golden_section_maximize([&](double g) { return pi_fidelity_at_ratio(ratio, g, q); }, a, b,
                                 search.tolerance)
      .x;
}

double optimal_gamma(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t,
                     const GammaSearch& search, const QuadratureSettings& q) {
  return optimal_gamma_at_ratio(diameter_ratio(beam, cloud, t), search, q);
}

namespace {

double contrast_of(const MzSequence& seq, const QuadratureSettings& q) {
  return fringe_contrast(three_pulse_p2(seq, pi, q), three_pulse_p2(seq, 0.0, q));
}

std::array<double, 3> joint_refine(const MzSequence& seq, std::array<double, 3> g, const CompensationOptions& options,
                                   const QuadratureSettings& q) {
  constexpr int rounds = 3;
  constexpr double half_width = 0.3;
  const std::size_t first = options.compensate_first ? 0 : 1;
  for (int round = 0; round < rounds; ++round) {
    for (std::size_t i = first; i < 3; ++i) {
      auto objective = [&](double gi) {
        auto trial = g;
        trial[i] = gi;
        return contrast_of(seq.with_gammas(trial), q);
      };
      const double lo = std::max(options.search.lo, g[i] - half_width);
      const double hi = std::min(options.search.hi, g[i] + half_width);
      const auto best = golden_section_maximize(objective, lo, hi, options.search.tolerance);
      if (best.value > objective(g[i])) g[i] = best.x;
    }
  }
  return g;
}

}  // namespace

std::array<double, 3> compensation_gammas(const MzSequence& seq, const CompensationOptions& options,
                                          const QuadratureSettings& q) {
  const auto s = seq.ratios();
  std::array<double, 3> g{1.0, 1.0, 1.0};
  for (std::size_t i = options.compensate_first ? 0 : 1; i < 3; ++i)
    g[i] = optimal_gamma_at_ratio(s[i], options.search, q);
  if (options.joint) g = joint_refine(seq.with_gammas({1.0, 1.0, 1.0}), g, options, q);
  return g;
}

CompensationPlan build_plan(const MzSequence& seq, const CompensationOptions& options, const QuadratureSettings& q) {
  seq.validate();
  CompensationPlan plan;
  plan.ratio = seq.ratios();
  plan.gamma = compensation_gammas(seq, options, q);
  for (std::size_t i = 0; i < 3; ++i) {
    plan.fidelity_before[i] = pi_fidelity_at_ratio(plan.ratio[i], 1.0, q);
    plan.fidelity_after[i] = pi_fidelity_at_ratio(plan.ratio[i], plan.gamma[i], q);
  }
  const MzSequence base = seq.with_gammas({1.0, 1.0, 1.0});
  plan.contrast_before = contrast_of(base, q);
  plan.contrast_after = contrast_of(base.with_gammas(plan.gamma), q);
  return plan;
}

SequenceTransform compensator(const CompensationOptions& options, const QuadratureSettings& q) {
  return [options, q](const MzSequence& seq) { return seq.with_gammas(compensation_gammas(seq, options, q)); };
}

}  // namespace aiexp
