#include "aiexp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aiexp/constants.hpp"
#include "aiexp/parallel.hpp"

namespace aiexp {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
constexpr long long shard_size = 1 << 15;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() { return mix64(state_ += golden_gamma); }

  /// Uniform on (0, 1].
  double uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Accumulated sums of a paired observable (a, b) over one shard.
struct Moments {
  double n = 0, sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;

  void add(double a, double b) {
    n += 1;
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }

  void merge(const Moments& o) {
    n += o.n;
    sa += o.sa;
    sb += o.sb;
    saa += o.saa;
    sbb += o.sbb;
    sab += o.sab;
  }
};

double sample_variance(double n, double s, double ss) {
  if (n < 2) return 0.0;
  return std::max(0.0, (ss - s * s / n) / (n - 1));
}

McEstimate estimate(double n, double s, double ss) {
  return {s / n, std::sqrt(sample_variance(n, s, ss) / n), static_cast<long long>(n)};
}

// Per-atom observable (a, b) summed in fixed shards, reduced in shard order.
template <typename Observable>
Moments accumulate(const AtomCloud<double>& cloud, const McSettings& mc, Observable&& obs) {
  const long long shards = (mc.n + shard_size - 1) / shard_size;
  const auto partial = parallel_map<Moments>(static_cast<std::size_t>(shards), mc.workers, [&](std::size_t k) {
    Moments m;
    const long long begin = static_cast<long long>(k) * shard_size;
    const long long end = std::min(mc.n, begin + shard_size);
    for (long long i = begin; i < end; ++i) {
      const auto [a, b] = obs(sample_atom(cloud, mc.seed, static_cast<std::uint64_t>(i)));
      m.add(a, b);
    }
    return m;
  });
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return total;
}

}  // namespace

double PhaseSpaceSample::radius_at(double t) const { return std::hypot(x0 + vx0 * t, y0 + vy0 * t); }

PhaseSpaceSample sample_atom(const AtomCloud<double>& cloud, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(mix64(seed + golden_gamma) ^ mix64(index));
  double z[6];
  for (int k = 0; k < 6; k += 2) {
    const double radius = std::sqrt(-2.0 * std::log(rng.uniform()));
    const double angle = two_pi * rng.uniform();
    z[k] = radius * std::cos(angle);
    z[k + 1] = radius * std::sin(angle);
  }
  const double sx = cloud.sigma0;
  const double sv = cloud.velocity_width();
  return {sx * z[0], sx * z[1], sx * z[2], sv * z[3], sv * z[4], sv * z[5]};
}

std::vector<PhaseSpaceSample> sample_cloud(const AtomCloud<double>& cloud, long long n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_cloud: need at least one sample");
  std::vector<PhaseSpaceSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) out.push_back(sample_atom(cloud, seed, static_cast<std::uint64_t>(i)));
  return out;
}

TwoLevelState<double> propagate_atom(const MzSequence& seq, const PhaseSpaceSample& atom, double phi3) {
  auto state = TwoLevelState<double>::ground();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = seq.pulses[i];
    const double rabi = p.gamma * effective_rabi(seq.beam, atom.radius_at(p.t_fire));
    state = apply_transfer(transfer_matrix(rabi, p.tau, 0.0, p.t_fire, i == 2 ? phi3 : p.phi), state);
  }
  return state;
}

McEstimate mc_single_pulse_p2(const RamanBeam<double>& beam, const AtomCloud<double>& cloud, double t, double tau,
                              double gamma, const McSettings& mc) {
  if (mc.n < 1) throw std::invalid_argument("mc_single_pulse_p2: need at least one sample");
  if (!(t >= 0) || !(tau >= 0) || !(gamma > 0)) throw std::domain_error("mc_single_pulse_p2: invalid pulse");
  const Moments m = accumulate(cloud, mc, [&](const PhaseSpaceSample& atom) {
    const double rabi = gamma * effective_rabi(beam, atom.radius_at(t));
    return std::pair{transfer_matrix(rabi, tau).transition_probability(), 0.0};
  });
  return estimate(m.n, m.sa, m.saa);
}

McEstimate mc_three_pulse_p2(const MzSequence& seq, double phi3, const McSettings& mc) {
  if (mc.n < 1000) throw std::invalid_argument("mc_three_pulse_p2: need at least 1000 samples");
  seq.validate();
  const Moments m = accumulate(seq.cloud, mc, [&](const PhaseSpaceSample& atom) {
    return std::pair{propagate_atom(seq, atom, phi3).p2(), 0.0};
  });
  return estimate(m.n, m.sa, m.saa);
}

McContrast mc_contrast(const MzSequence& seq, const McSettings& mc) {
  if (mc.n < 1000) throw std::invalid_argument("mc_contrast: need at least 1000 samples");
  seq.validate();
  const Moments m = accumulate(seq.cloud, mc, [&](const PhaseSpaceSample& atom) {
    return std::pair{propagate_atom(seq, atom, 0.0).p2(), propagate_atom(seq, atom, pi).p2()};
  });

  McContrast out;
  out.p_at_0 = estimate(m.n, m.sa, m.saa);
  out.p_at_pi = estimate(m.n, m.sb, m.sbb);
  const double a = out.p_at_0.mean;
  const double b = out.p_at_pi.mean;
  out.contrast = fringe_contrast(b, a);

  const double var_a = sample_variance(m.n, m.sa, m.saa);
  const double var_b = sample_variance(m.n, m.sb, m.sbb);
  const double cov = m.n < 2 ? 0.0 : (m.sab - m.sa * m.sb / m.n) / (m.n - 1);
  const double denom = (a + b) * (a + b);
  const double da = -2 * b / denom;
  const double db = 2 * a / denom;
  out.std_error = std::sqrt(std::max(0.0, da * da * var_a + db * db * var_b + 2 * da * db * cov) / m.n);
  return out;
}

}  // namespace aiexp
