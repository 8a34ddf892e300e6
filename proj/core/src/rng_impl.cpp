#include "qrec/rng.hpp"

#include <cmath>

namespace qrec {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1]
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

long Rng::binomial(long n, double p) {
  if (n < 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  long k = 0;
  for (long i = 0; i < n; ++i)
    if (uniform() < p) ++k;
  return k;
}

} // namespace qrec
