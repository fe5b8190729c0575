#pragma once

// Ensemble averaging over the radial Gaussian density of the cloud.
//
// Positions are measured in units of the instantaneous cloud width,
// rho = r / sigma(t). The axial coordinate integrates out exactly, so the
// average of f over the cloud reduces to
//
//   <f> = int_0^R rho exp(-rho^2/2) f(rho) drho / int_0^R rho exp(-rho^2/2) drho
//
// and the denominator is 1 - exp(-R^2/2) in closed form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aiexp {

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

struct RadialGrid {
  double rho_max = 8.0;
  double tolerance = 1e-9;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(rho_max >= 6.0)) throw std::invalid_argument("RadialGrid: rho_max must be at least 6");
    if (!(tolerance > 0.0)) throw std::invalid_argument("RadialGrid: tolerance must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("RadialGrid: max_subdivisions must be positive");
  }
};

/// Detection-zone truncation, in units of the cloud width at detection.
/// With `renormalize` the average is conditioned on the detected atoms;
/// without it, undetected atoms count as zero signal.
struct DetectionZone {
  double rho;
  bool renormalize = true;
};

struct QuadratureResult {
  double value;
  double error_bound;
  int subdivisions;
};

namespace detail {

template <typename Scalar>
struct SimpsonPanel {
  Scalar a, m, b;
  Scalar fa, fm, fb;
  Scalar whole;
  Scalar eps;
};

template <typename Scalar>
Scalar simpson(Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb) {
  return (b - a) / 6 * (fa + 4 * fm + fb);
}

}  // namespace detail

/// Adaptive composite Simpson rule with interval bisection and Richardson
/// correction. `tolerance` is absolute on the integral. Throws
/// IntegrationError when more than `max_subdivisions` bisections are needed.
template <typename Scalar = double, typename Func>
QuadratureResult adaptive_simpson(Func&& f, Scalar a, Scalar b, Scalar tolerance, int max_subdivisions,
                                  int initial_panels = 16) {
  using Panel = detail::SimpsonPanel<Scalar>;

  if (!(b > a)) return {0.0, 0.0, 0};

  std::vector<Panel> stack;
  stack.reserve(64);
  const Scalar h = (b - a) / initial_panels;
  Scalar f_left = f(a);
  std::vector<Panel> initial;
  initial.reserve(initial_panels);
  for (int i = 0; i < initial_panels; ++i) {
    const Scalar pa = a + i * h;
    const Scalar pb = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
    const Scalar pm = (pa + pb) / 2;
    const Scalar fm = f(pm);
    const Scalar fb = f(pb);
    initial.push_back({pa, pm, pb, f_left, fm, fb, detail::simpson(pa, pb, f_left, fm, fb),
                       tolerance * (pb - pa) / (b - a)});
    f_left = fb;
  }
  // Reversed so panels pop in ascending order.
  stack.assign(initial.rbegin(), initial.rend());

  const Scalar min_width = (b - a) * Scalar(1e-12);
  Scalar sum = 0;
  Scalar err = 0;
  int subdivisions = 0;

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();

    const Scalar lm = (p.a + p.m) / 2;
    const Scalar rm = (p.m + p.b) / 2;
    const Scalar flm = f(lm);
    const Scalar frm = f(rm);
    const Scalar left = detail::simpson(p.a, p.m, p.fa, flm, p.fm);
    const Scalar right = detail::simpson(p.m, p.b, p.fm, frm, p.fb);
    const Scalar diff = left + right - p.whole;

    if (std::abs(diff) <= 15 * p.eps || (p.b - p.a) < min_width) {
      sum += left + right + diff / 15;
      err += std::abs(diff) / 15;
      continue;
    }

    if (++subdivisions > max_subdivisions) {
      Scalar pending = left + right;
      Scalar pending_err = std::abs(diff) / 15;
      for (const Panel& q : stack) {
        pending += q.whole;
        pending_err += std::abs(q.whole);
      }
      std::ostringstream msg;
      msg << "adaptive_simpson: no convergence within " << max_subdivisions << " subdivisions on [" << a << ", "
          << b << "]";
      throw IntegrationError(msg.str(), double(sum + pending), double(err + pending_err));
    }

    stack.push_back({p.m, rm, p.b, p.fm, frm, p.fb, right, p.eps / 2});
    stack.push_back({p.a, lm, p.m, p.fa, flm, p.fm, left, p.eps / 2});
  }

  return {double(sum), double(err), subdivisions};
}

/// Mass of the radial weight rho exp(-rho^2/2) on [0, R].
inline double radial_weight_mass(double R) { return -std::expm1(-R * R / 2); }

/// Average of f(rho) over the 2D radial Gaussian cloud density, truncated at
/// rho_max and optionally at a detection radius.
template <typename Func>
double radial_average(Func&& f, const RadialGrid& grid = {},
                      const std::optional<DetectionZone>& detection = std::nullopt) {
  grid.validate();
  double R = grid.rho_max;
  bool renormalize_by_truncation = true;
  if (detection) {
    if (!(detection->rho > 0)) throw std::invalid_argument("radial_average: detection radius must be positive");
    R = std::min(R, detection->rho);
    renormalize_by_truncation = detection->renormalize;
  }

  auto integrand = [&f](double rho) { return rho * std::exp(-rho * rho / 2) * f(rho); };
  const QuadratureResult q = adaptive_simpson<double>(integrand, 0.0, R, grid.tolerance, grid.max_subdivisions);

  const double mass = renormalize_by_truncation ? radial_weight_mass(R) : radial_weight_mass(grid.rho_max);
  return q.value / mass;
}

}  // namespace aiexp
