#pragma once

// Independent numeric oracles for cross-checking the library's closed forms.
// Everything here is deliberately implemented from scratch (quadrature and
// scalar bisection only) so it shares no code path with the library.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "qrec/bath.hpp"

namespace oracles {

// adaptive Simpson with absolute tolerance
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// scalar two-level / n-level heat capacity at temperature t, from the
// populations directly (no shared code with GibbsPoint)
inline double heat_capacity(const qrec::BathSpec& spec, double t) {
  double z = 0.0, e1 = 0.0, e2 = 0.0;
  for (double eps : spec.levels) {
    const double w = std::exp(-eps / t);
    z += w;
    e1 += eps * w;
    e2 += eps * eps * w;
  }
  const double mean = e1 / z;
  const double var = e2 / z - mean * mean;
  return var / (t * t);
}

// entropy change S(t) - S(t0) via the thermodynamic integral of C/tau
inline double entropy_change(const qrec::BathSpec& spec, double t0, double t) {
  return integrate([&](double tau) { return heat_capacity(spec, tau) / tau; },
                   t0, t);
}

// heat absorbed moving the Gibbs state from t0 to t: integral of C
inline double heat_change(const qrec::BathSpec& spec, double t0, double t) {
  return integrate([&](double tau) { return heat_capacity(spec, tau); }, t0, t);
}

// invert the entropy-change integral for the final temperature by bisection
inline double temperature_for_entropy_change(const qrec::BathSpec& spec,
                                             double t0, double delta_s) {
  double lo = t0, hi = t0;
  if (delta_s >= 0.0) {
    while (entropy_change(spec, t0, hi) < delta_s) {
      hi *= 2.0;
      if (hi > 1e18) throw std::runtime_error("entropy target unreachable");
    }
  } else {
    while (entropy_change(spec, t0, lo) > delta_s) {
      lo /= 2.0;
      if (lo < 1e-18) throw std::runtime_error("entropy target unreachable");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (entropy_change(spec, t0, mid) < delta_s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// the tight erasure bound computed purely by quadrature
inline double q_tight_quadrature(const qrec::BathSpec& spec, double delta_s) {
  const double tf = temperature_for_entropy_change(spec, spec.t0, delta_s);
  return heat_change(spec, spec.t0, tf);
}

} // namespace oracles
