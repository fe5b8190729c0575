#pragma once

#include <cmath>
#include <stdexcept>

namespace aiexp {

template <typename Scalar = double>
struct ScalarMaximum {
  Scalar x;
  Scalar value;
  int iterations;
};

/// Golden-section search for the maximum of a unimodal function on [a, b].
/// Stops once the bracket is narrower than `tolerance`.
template <typename Scalar = double, typename Func>
ScalarMaximum<Scalar> golden_section_maximize(Func&& f, Scalar a, Scalar b, Scalar tolerance,
                                              int max_iterations = 200) {
  if (!(b > a)) throw std::invalid_argument("golden_section_maximize: empty bracket");
  if (!(tolerance > 0)) throw std::invalid_argument("golden_section_maximize: tolerance must be positive");

  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = f(c);
  Scalar fd = f(d);

  int it = 0;
  for (; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  const Scalar x = (a + b) / 2;
  return {x, f(x), it};
}

}  // namespace aiexp
