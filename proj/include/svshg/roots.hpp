#pragma once

#include <cmath>
#include <string>

#include "svshg/errors.hpp"

namespace svshg {

/// Plain bisection on [lo, hi]; f must change sign over the bracket.
/// Stops when the bracket is narrower than `x_tolerance`.
template <class Fn>
double bisect(Fn&& f, double lo, double hi, double x_tolerance, int max_iterations = 400) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NotFoundError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }
  for (int i = 0; i < max_iterations && (hi - lo) > x_tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace svshg
