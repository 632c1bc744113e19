#pragma once

#include <cmath>
#include <functional>

namespace dppsel {

// Golden-section maximization on [lo, hi]. Deterministic; handles -inf
// plateaus (the bracket simply shrinks toward the better side). Returns the
// abscissa of the best bracketed point.
inline double golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double xtol = 1e-9) {
  constexpr double invphi = 0.6180339887498949;   // 1/phi
  constexpr double invphi2 = 0.3819660112501051;  // 1/phi^2
  double a = lo, b = hi;
  double h = b - a;
  if (h <= xtol) return 0.5 * (a + b);
  double c = a + invphi2 * h;
  double d = a + invphi * h;
  double fc = f(c);
  double fd = f(d);
  while (h > xtol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + invphi2 * h;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + invphi * h;
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace dppsel
