#include "qrec/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace qrec {

namespace {

constexpr double kCeilingMargin = 1e-12; // matches temperature_of_entropy's domain

bool below_ceiling(const BathSpec& spec, double s) {
  return s < spec.ln_dim() - kCeilingMargin;
}

} // namespace

AthermalSummary AthermalSummary::of_state(const BathSpec& spec, const Mat& rho) {
  AthermalSummary ath;
  ath.e_ath = state_energy(spec, rho);
  ath.s_ath = von_neumann_entropy(rho);
  return ath;
}

void AthermalSummary::validate(const BathSpec& spec) const {
  spec.validate();
  if (s_ath < -1e-12 || s_ath > spec.ln_dim() + 1e-12)
    throw DomainError("athermal entropy outside [0, ln d]");
  if (e_ath < -1e-9 || e_ath > spec.max_level() + 1e-9)
    throw DomainError("athermal energy outside the spectrum range");
  // MaxEnt: the Gibbs state minimizes energy at fixed entropy
  const double s = std::clamp(s_ath, 0.0, spec.ln_dim());
  if (e_ath < invert_entropy_closed(spec, s).e - 1e-9)
    throw DomainError("athermal summary below the minimum-energy (Gibbs) curve");
}

ErasureBounds erasure_bounds(const BathSpec& spec, double delta_s,
                             const std::optional<AthermalSummary>& athermal) {
  spec.validate();
  if (delta_s < 0.0) throw DomainError("erasure amount must be non-negative");

  const GibbsPoint base = gibbs_ensemble(spec, spec.t0);
  ErasureBounds out;
  out.delta_s = delta_s;
  out.q_landauer = spec.t0 * delta_s;

  const double arg0 = base.s + delta_s;
  out.tight_feasible = below_ceiling(spec, arg0);
  if (out.tight_feasible)
    out.q_tight = invert_entropy_closed(spec, arg0).e - base.e;

  const AthermalSummary ath =
      athermal.value_or(AthermalSummary{base.e, base.s});
  ath.validate(spec);

  const double arg_a = ath.s_ath + delta_s;
  if (!below_ceiling(spec, arg_a))
    throw InfeasibleError("final bath entropy target at or above ln(dim)");
  const double e_final = invert_entropy_closed(spec, arg_a).e;
  out.q_ath = e_final - ath.e_ath;

  if (out.tight_feasible) {
    // gain: both entropy arguments below the ceiling
    out.gain = (ath.e_ath - base.e) - (e_final - invert_entropy_closed(spec, arg0).e);
  }
  return out;
}

double athermal_heat_bound(const BathSpec& spec, const AthermalSummary& ath,
                           double delta_s) {
  spec.validate();
  ath.validate(spec);
  const double arg = std::clamp(ath.s_ath + delta_s, 0.0, spec.ln_dim());
  return invert_entropy_closed(spec, arg).e - ath.e_ath;
}

double gain_value(const BathSpec& spec, double e_ath, double s_ath,
                  double delta_s) {
  const GibbsPoint base = gibbs_ensemble(spec, spec.t0);
  const double arg0 = base.s + delta_s;
  const double arg_a = s_ath + delta_s;
  if (!below_ceiling(spec, arg0) || !below_ceiling(spec, arg_a) || arg_a < 0.0)
    throw InfeasibleError("gain arguments at or above the entropy ceiling");
  return (e_ath - base.e) -
         (invert_entropy_closed(spec, arg_a).e - invert_entropy_closed(spec, arg0).e);
}

void BranchEnsemble::validate(const BathSpec& spec) const {
  if (branches.empty()) throw DomainError("branch ensemble is empty");
  double tot = 0.0;
  for (const auto& m : branches) {
    if (m.p < -1e-12) throw DomainError("negative branch probability");
    tot += m.p;
    if (m.state.rows() != spec.dim() || m.state.cols() != spec.dim())
      throw ShapeError("branch state dimension does not match the bath");
    if (std::abs(von_neumann_entropy(m.state) - shared_failure_entropy) > 1e-6)
      throw DomainError("branch entropy differs from the shared failure entropy");
  }
  if (std::abs(tot - 1.0) > 1e-9) throw DomainError("branch probabilities must sum to 1");
}

MixtureGain branch_mixture_analysis(const BathSpec& spec,
                                    const BranchEnsemble& ensemble,
                                    double delta_s) {
  spec.validate();
  ensemble.validate(spec);
  if (delta_s < 0.0) throw DomainError("erasure amount must be non-negative");

  MixtureGain out{0.0, 0.0, 0.0};
  Mat mix = Mat::Zero(spec.dim(), spec.dim());
  double mean_branch_entropy = 0.0;
  for (const auto& m : ensemble.branches) {
    out.g_bar += m.p * gain_value(spec, state_energy(spec, m.state),
                                  von_neumann_entropy(m.state), delta_s);
    mean_branch_entropy += m.p * von_neumann_entropy(m.state);
    mix += m.p * m.state;
  }
  out.chi = von_neumann_entropy(mix) - mean_branch_entropy;
  if (out.chi < -1e-9) throw StateError("negative Holevo information");

  const double s_f = ensemble.shared_failure_entropy;
  const double arg_hi = s_f + out.chi + delta_s;
  const double arg_lo = s_f + delta_s;
  if (!below_ceiling(spec, arg_hi))
    throw InfeasibleError("mixture entropy target at or above ln(dim): infinite penalty");
  out.g_mix = out.g_bar - (invert_entropy_closed(spec, arg_hi).e -
                           invert_entropy_closed(spec, arg_lo).e);
  return out;
}

double s_max_threshold(const BathSpec& spec, double e_ath, double delta_s) {
  spec.validate();
  if (delta_s < 0.0) throw DomainError("erasure amount must be non-negative");
  const GibbsPoint base = gibbs_ensemble(spec, spec.t0);
  if (!(e_ath > base.e))
    throw DomainError("athermal energy must exceed the thermal energy E(S0)");
  if (!below_ceiling(spec, base.s + delta_s))
    throw InfeasibleError("delta_s puts the thermal reference above the ceiling");

  // strictly inside gain_value's domain, so the edge itself is evaluable
  const double hi_edge = spec.ln_dim() - delta_s - 2.0 * kCeilingMargin;
  if (hi_edge <= 0.0)
    throw InfeasibleError("no admissible athermal entropy below the ceiling");

  auto g = [&](double s_ath) { return gain_value(spec, e_ath, s_ath, delta_s); };
  double lo = 0.0, hi = hi_edge;
  const double g_lo = g(lo), g_hi = g(hi);
  if (g_lo < 0.0) throw ThresholdError("gain negative over the whole range (G(0) < 0)");
  if (g_hi > 0.0) throw ThresholdError("gain positive over the whole range (G never crosses 0)");

  // strictly decreasing in s_ath (dG/ds = -T(s+dS) < 0); bisect to machine width
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TradeoffReport s_max_tradeoff_check(const BathSpec& spec, double e_ath,
                                    double delta_s, double h) {
  if (!(h > 0.0) || delta_s - h < 0.0)
    throw DomainError("step must satisfy 0 < h <= delta_s");

  TradeoffReport rep{};
  const double sp = s_max_threshold(spec, e_ath, delta_s + h);
  const double sm = s_max_threshold(spec, e_ath, delta_s - h);
  rep.numeric_slope = (sp - sm) / (2.0 * h);

  const double s0 = base_entropy(spec);
  const double s_max = s_max_threshold(spec, e_ath, delta_s);
  // implicit-function slope of the G = 0 contour; with erasure raising the
  // bath entropy both temperature arguments sit at s + delta_s
  const double t_num = invert_entropy_closed(spec, s0 + delta_s).t;
  const double t_den = invert_entropy_closed(spec, s_max + delta_s).t;
  rep.analytic_slope = t_num / t_den - 1.0;

  const GibbsPoint at_e = temperature_of_energy(spec, e_ath);
  rep.limit_lhs = (at_e.s - s_max) / delta_s;
  rep.limit_rhs = 1.0 - spec.t0 / at_e.t;
  rep.limit_slack = rep.limit_lhs - rep.limit_rhs;
  return rep;
}

} // namespace qrec
