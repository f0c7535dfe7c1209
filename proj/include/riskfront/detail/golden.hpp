#pragma once

#include <cmath>
#include <utility>

namespace riskfront {

template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double width_tol,
                                     int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && b - a > width_tol; ++it) {
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
  std::pair<double, double> best{c, fc};
  if (fd > best.second) best = {d, fd};
  double flo = f(lo);
  if (flo > best.second) best = {lo, flo};
  double fhi = f(hi);
  if (fhi > best.second) best = {hi, fhi};
  return best;
}

}  // namespace riskfront
