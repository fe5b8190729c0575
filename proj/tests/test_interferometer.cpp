#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "aiexp/interferometer.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace aiexp;
using namespace aiexp::testing;

namespace {

const AtomCloud<double> normal_cloud(3e-3, 7e-6);
const RamanBeam<double> normal_beam(20e-3, default_omega_max0);
const double tau0 = pi / default_omega_max0;

// Least-squares fit P = c0 + c1 cos(phi) + c2 sin(phi); returns the largest
// residual relative to the fitted amplitude.
double cosine_fit_residual(const std::vector<std::pair<double, double>>& samples) {
  Eigen::MatrixXd A(samples.size(), 3);
  Eigen::VectorXd y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    A(i, 0) = 1;
    A(i, 1) = std::cos(samples[i].first);
    A(i, 2) = std::sin(samples[i].first);
    y(i) = samples[i].second;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const double amplitude = std::hypot(c(1), c(2));
  return (A * c - y).cwiseAbs().maxCoeff() / amplitude;
}

double scan_extrema_contrast(const MzSequence& seq, int n) {
  double lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double p = three_pulse_p2(seq, two_pi * i / n);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return (hi - lo) / (hi + lo);
}

}  // namespace

TEST(SinglePulse, HomogeneousBeamGivesPerfectPiPulse) {
  const RamanBeam<double> wide(1e6, default_omega_max0);
  EXPECT_NEAR(single_pulse_p2(wide, normal_cloud, 0.5, tau0), 1.0, 1e-6);
}

TEST(SinglePulse, ZeroDurationDoesNothing) {
  EXPECT_EQ(single_pulse_p2(normal_beam, normal_cloud, 0.39, 0.0), 0.0);
}

TEST(SinglePulse, MatchesBruteForceAndLosesFidelityAsCloudGrows) {
  const double area = default_omega_max0 * tau0;
  const double p_t1 = single_pulse_p2(normal_beam, normal_cloud, 0.13, tau0);
  const double p_t2 = single_pulse_p2(normal_beam, normal_cloud, 0.39, tau0);
  const double brute_t1 = oracle::eq7_single_pulse_2d(cloud_sigma(normal_cloud, 0.13), 20e-3, area, 4000, 400);
  const double brute_t2 = oracle::eq7_single_pulse_2d(cloud_sigma(normal_cloud, 0.39), 20e-3, area, 4000, 400);
  EXPECT_NEAR(p_t1, brute_t1, 1e-6);
  EXPECT_NEAR(p_t2, brute_t2, 1e-6);
  EXPECT_LT(p_t2, p_t1);
}

TEST(SinglePulse, IntensityAndDurationScalingAreEquivalent) {
  for (double gamma : {1.05, 1.2, 1.37})
    EXPECT_NEAR(single_pulse_p2(normal_beam, normal_cloud, 0.39, tau0, gamma),
                single_pulse_p2(normal_beam, normal_cloud, 0.39, gamma * tau0), 1e-9);
}

TEST(SinglePulse, RejectsInvalidInputs) {
  EXPECT_THROW(single_pulse_p2(normal_beam, normal_cloud, 0.1, -tau0), std::domain_error);
  EXPECT_THROW(single_pulse_p2(normal_beam, normal_cloud, 0.1, tau0, 0.0), std::domain_error);
  EXPECT_THROW(single_pulse_p2(normal_beam, normal_cloud, -0.1, tau0), std::domain_error);
}

TEST(RabiCurve, StartsAtZeroAndPeaksAfterNominalPiTime) {
  const AtomCloud<double> cold(3e-3, 0.0);
  for (double s : {100.0, 4.4, 1.2}) {
    const RamanBeam<double> beam(s * 3e-3, default_omega_max0);
    const auto curve = rabi_curve(beam, cold, 0.0, 0.0, 2 * tau0, 401);
    EXPECT_EQ(curve.front().second, 0.0);
    std::size_t k = 1;
    while (k + 1 < curve.size() && curve[k + 1].second >= curve[k].second) ++k;
    EXPECT_LE(curve[k].second, 1.0);
    EXPECT_GE(curve[k].first, tau0 - 2 * tau0 / 400) << "s=" << s;
    if (s == 100.0) {
      EXPECT_NEAR(curve[k].second, 1.0, 1e-3);
      EXPECT_NEAR(curve[k].first / tau0, 1.0, 0.01);
    }
  }
}

TEST(RabiCurve, SmallerRatioHasLowerFirstMaximum) {
  auto first_max = [](double s) {
    double best = 0;
    for (double x = 0.9; x <= 1.6; x += 0.001) best = std::max(best, single_pulse_p2_at_ratio(s, pi * x));
    return best;
  };
  EXPECT_LT(first_max(1.2), first_max(4.4));
}

TEST(PiFidelity, IdealBeamIsPerfect) {
  EXPECT_NEAR(pi_fidelity_at_ratio(100.0), 1.0, 1e-3);
  EXPECT_NEAR(pi_fidelity(RamanBeam<double>(300e-3, default_omega_max0), AtomCloud<double>(3e-3, 0.0), 1.0), 1.0,
              1e-3);
}

TEST(ThreePulse, IdealSequenceHasFullContrast) {
  const auto seq = ideal_sequence();
  EXPECT_NEAR(three_pulse_p2(seq, 0.0), 0.0, 1e-3);
  EXPECT_NEAR(three_pulse_p2(seq, pi), 1.0, 1e-3);
}

TEST(ThreePulse, ZeroDurationPulsesLeaveGroundState) {
  auto seq = normal_sequence();
  for (auto& p : seq.pulses) p.tau = 0.0;
  EXPECT_EQ(three_pulse_p2(seq, 0.0), 0.0);
  EXPECT_EQ(three_pulse_p2(seq, 1.3), 0.0);
}

TEST(ThreePulse, ProbabilityConservedAtEveryRadius) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& seq : {normal_sequence(), better_sequence(), ideal_sequence()})
    for (int k = 0; k < 300; ++k) {
      const auto s = three_pulse_state(seq, 8 * u(rng), two_pi * u(rng));
      ASSERT_NEAR(s.norm_squared(), 1.0, 1e-12);
    }
}

TEST(ThreePulse, GammaMovesFreelyBetweenIntensityAndDuration) {
  const auto seq = normal_sequence().with_gammas({1.05, 1.21, 1.37});
  const auto scaled = seq.as_duration_scaled();
  for (double phi : {0.0, 1.0, pi})
    EXPECT_NEAR(three_pulse_p2(seq, phi), three_pulse_p2(scaled, phi), 1e-8);
}

TEST(FringeScan, ContrastIsTheTwoPointFormula) {
  const auto r = fringe_scan(normal_sequence(), 37);
  EXPECT_EQ(r.contrast, (r.p_at_pi - r.p_at_0) / (r.p_at_pi + r.p_at_0));
  ASSERT_EQ(r.phi3_samples.size(), 37u);
  EXPECT_EQ(r.phi3_samples.front().first, 0.0);
  EXPECT_EQ(r.phi3_samples.back().first, two_pi);
  for (const auto& [phi, p] : r.phi3_samples) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(FringeScan, IdealFringeIsSinusoidal) {
  const auto r = fringe_scan(ideal_sequence(), 73);
  EXPECT_NEAR(r.contrast, 1.0, 0.005);
  EXPECT_LT(cosine_fit_residual(r.phi3_samples), 1e-3);
}

TEST(FringeScan, ParallelEvaluationIsIdentical) {
  const auto a = fringe_scan(better_sequence(), 25, {}, 1);
  const auto b = fringe_scan(better_sequence(), 25, {}, 4);
  EXPECT_EQ(a.phi3_samples, b.phi3_samples);
}

TEST(Contrast, TwoPointFormulaHitsTheFringeExtrema) {
  for (const auto& seq : {normal_sequence(), better_sequence(), ideal_sequence()}) {
    const double two_point = fringe_contrast(three_pulse_p2(seq, pi), three_pulse_p2(seq, 0.0));
    EXPECT_NEAR(scan_extrema_contrast(seq, 720), two_point, 1e-3);
  }
}

TEST(Contrast, OrderedByDiameterRatio) {
  auto contrast = [](const MzSequence& s) { return fringe_contrast(three_pulse_p2(s, pi), three_pulse_p2(s, 0.0)); };
  const double ideal = contrast(ideal_sequence());
  const double better = contrast(better_sequence());
  const double normal = contrast(normal_sequence());
  EXPECT_GE(ideal, better);
  EXPECT_GE(better, normal);
}

TEST(Contrast, DetectionZoneRestrictsTheAverage) {
  const auto seq = normal_sequence();
  QuadratureSettings narrow;
  narrow.detection = DetectionZone{1.0};
  const double full = fringe_contrast(three_pulse_p2(seq, pi), three_pulse_p2(seq, 0.0));
  const double central = fringe_contrast(three_pulse_p2(seq, pi, narrow), three_pulse_p2(seq, 0.0, narrow));
  // Atoms near the axis see nearly ideal pulses.
  EXPECT_GT(central, full);
  QuadratureSettings raw = narrow;
  raw.detection->renormalize = false;
  EXPECT_LT(three_pulse_p2(seq, pi, raw), three_pulse_p2(seq, pi, narrow));
}

TEST(ContrastVsInterval, DecreasesWithIntervalWithoutCompensation) {
  const auto rows = contrast_vs_interval(normal_sequence(), 0.0, 0.6, 13);
  ASSERT_EQ(rows.size(), 13u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].second, rows[i - 1].second + 1e-12);
}

TEST(ContrastVsInterval, NoExpansionBetweenPulsesGivesFullContrast) {
  const auto seq = make_sequence(1.0, 7e-6, 0.0, 0.0);
  const auto rows = contrast_vs_interval(seq, 0.0, 1e-3, 2);
  EXPECT_NEAR(rows.front().second, 1.0, 1e-4);
}

TEST(ContrastVsInterval, WorkerCountDoesNotChangeResults) {
  const auto a = contrast_vs_interval(better_sequence(), 0.1, 0.9, 9, {}, {}, 1);
  const auto b = contrast_vs_interval(better_sequence(), 0.1, 0.9, 9, {}, {}, 3);
  EXPECT_EQ(a, b);
}

TEST(ContrastVsInterval, AppliesTransform) {
  int calls = 0;
  const SequenceTransform identity = [&calls](const MzSequence& s) {
    ++calls;
    return s;
  };
  const auto rows = contrast_vs_interval(normal_sequence(), 0.1, 0.3, 3, identity);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(rows, contrast_vs_interval(normal_sequence(), 0.1, 0.3, 3));
}

TEST(MzSequence, StandardDurationsAndTimes) {
  const auto seq = normal_sequence();
  EXPECT_EQ(2 * seq.pulses[0].tau, seq.pulses[1].tau);
  EXPECT_EQ(2 * seq.pulses[2].tau, seq.pulses[1].tau);
  EXPECT_EQ(seq.pulses[1].tau, tau0);
  EXPECT_NEAR(seq.pulses[2].t_fire, 0.65, 1e-15);
  const auto moved = seq.with_interval(0.1);
  EXPECT_NEAR(moved.pulses[1].t_fire, 0.23, 1e-15);
  EXPECT_THROW(seq.with_interval(-0.1), std::invalid_argument);
  EXPECT_THROW(seq.with_gammas({1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST(SensitivityGain, ScalesWithContrastAndIntervalSquared) {
  EXPECT_EQ(relative_sensitivity_gain(0.4, 0.4, 0.26, 0.26), 1.0);
  EXPECT_NEAR(relative_sensitivity_gain(0.415, 0.551, 0.26, 0.26), 1.328, 5e-4);
  EXPECT_NEAR(relative_sensitivity_gain(0.5, 0.5, 0.2, 0.4), 4.0, 1e-14);
  EXPECT_THROW(relative_sensitivity_gain(0.0, 0.5, 0.2, 0.2), std::domain_error);
  EXPECT_THROW(relative_sensitivity_gain(0.5, 0.5, -0.2, 0.2), std::domain_error);
}
