#include "qrec/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrec {

namespace {

constexpr double kLnTLo = -40.0; // bisection window for ln(T / eps_max)
constexpr double kLnTHi = 40.0;

struct ThermoEval {
  double e, s, c;
};

// populations ~ exp(-eps_i / T); stable via ln Z + beta E (eps_0 = 0 keeps
// Z >= 1, so no cancellation)
ThermoEval eval_beta(const BathSpec& spec, double beta) {
  double z = 0.0, e1 = 0.0, e2 = 0.0;
  for (double eps : spec.levels) {
    const double w = std::exp(-beta * eps);
    z += w;
    e1 += eps * w;
    e2 += eps * eps * w;
  }
  const double e = e1 / z;
  const double var = e2 / z - e * e;
  return {e, std::log(z) + beta * e, var * beta * beta};
}

ThermoEval eval_t(const BathSpec& spec, double t) {
  if (std::isinf(t)) {
    const int d = spec.dim();
    double e1 = 0.0, e2 = 0.0;
    for (double eps : spec.levels) {
      e1 += eps;
      e2 += eps * eps;
    }
    e1 /= d;
    e2 /= d;
    return {e1, std::log(static_cast<double>(d)), 0.0};
  }
  return eval_beta(spec, 1.0 / t);
}

} // namespace

BathSpec BathSpec::qubit(double gap, double t0) {
  BathSpec spec;
  spec.levels = {0.0, gap};
  spec.t0 = t0;
  spec.validate();
  return spec;
}

void BathSpec::validate() const {
  if (levels.size() < 2) throw DomainError("bath needs at least 2 levels");
  if (levels.front() != 0.0) throw DomainError("ground level must sit at 0");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] < levels[i - 1]) throw DomainError("levels must be non-decreasing");
    if (levels[i] < 0.0) throw DomainError("levels must be non-negative");
  }
  if (levels.back() <= 0.0) throw DomainError("levels must not be all equal");
  if (!(t0 > 0.0)) throw DomainError("base temperature must be positive");
}

GibbsPoint gibbs_ensemble(const BathSpec& spec, double t) {
  spec.validate();
  if (!(t > 0.0)) throw DomainError("temperature must be positive");
  const ThermoEval ev = eval_t(spec, t);
  return {t, ev.e, ev.s, ev.c};
}

std::vector<double> gibbs_populations(const BathSpec& spec, double t) {
  spec.validate();
  if (!(t > 0.0)) throw DomainError("temperature must be positive");
  std::vector<double> p(spec.levels.size());
  if (std::isinf(t)) {
    std::fill(p.begin(), p.end(), 1.0 / spec.dim());
    return p;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(-spec.levels[i] / t);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

Mat gibbs_state(const BathSpec& spec, double t) {
  const auto p = gibbs_populations(spec, t);
  Mat rho = Mat::Zero(spec.dim(), spec.dim());
  for (int i = 0; i < spec.dim(); ++i) rho(i, i) = p[i];
  return rho;
}

EntropyInversion invert_entropy_closed(const BathSpec& spec, double s) {
  spec.validate();
  const double lnd = spec.ln_dim();
  if (s < 0.0) throw DomainError("entropy must be non-negative");
  if (s > lnd) throw InfeasibleError("entropy above ln(dim) ceiling");
  if (s == 0.0) return {0.0, 0.0};

  const double scale = spec.max_level();
  auto s_of = [&](double x) { return eval_t(spec, scale * std::exp(x)).s; };

  // S is strictly increasing in T; the window covers [~0, ln d] to double
  // precision for any spectrum scaled by eps_max
  double lo = kLnTLo, hi = kLnTHi;
  if (s <= s_of(lo)) {
    const double t = scale * std::exp(lo);
    return {t, eval_t(spec, t).e};
  }
  if (s >= s_of(hi)) {
    const double t = scale * std::exp(hi);
    return {t, eval_t(spec, t).e};
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (s_of(mid) < s ? lo : hi) = mid;
  }
  const double t = scale * std::exp(0.5 * (lo + hi));
  return {t, eval_t(spec, t).e};
}

EntropyInversion temperature_of_entropy(const BathSpec& spec, double s) {
  spec.validate();
  if (s < 0.0) throw DomainError("entropy must be non-negative");
  if (s >= spec.ln_dim() - 1e-12)
    throw InfeasibleError("entropy at or above the ln(dim) ceiling");
  return invert_entropy_closed(spec, s);
}

GibbsPoint temperature_of_energy(const BathSpec& spec, double e) {
  spec.validate();
  double mean = 0.0;
  for (double eps : spec.levels) mean += eps;
  mean /= spec.dim();
  if (e <= 0.0 || e >= mean)
    throw DomainError("energy must lie in (E(T->0), E(T->inf))");

  const double scale = spec.max_level();
  auto e_of = [&](double x) { return eval_t(spec, scale * std::exp(x)).e; };
  double lo = kLnTLo, hi = kLnTHi;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (e_of(mid) < e ? lo : hi) = mid;
  }
  return gibbs_ensemble(spec, scale * std::exp(0.5 * (lo + hi)));
}

double base_entropy(const BathSpec& spec) { return gibbs_ensemble(spec, spec.t0).s; }
double base_energy(const BathSpec& spec) { return gibbs_ensemble(spec, spec.t0).e; }

double state_energy(const BathSpec& spec, const Mat& rho) {
  if (rho.rows() != spec.dim() || rho.cols() != spec.dim())
    throw ShapeError("state dimension does not match the bath");
  double e = 0.0;
  for (int i = 0; i < spec.dim(); ++i) e += spec.levels[i] * rho(i, i).real();
  return e;
}

} // namespace qrec
