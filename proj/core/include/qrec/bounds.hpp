#pragma once

#include <optional>
#include <vector>

#include "qrec/bath.hpp"
#include "qrec/density_matrix.hpp"

namespace qrec {

// (energy, entropy) summary of an out-of-equilibrium bath state
struct AthermalSummary {
  double e_ath = 0.0;
  double s_ath = 0.0;

  static AthermalSummary of_state(const BathSpec& spec, const Mat& rho);
  // checks s in [0, ln d], e in [eps_0, eps_max], e >= E_gibbs(s) - 1e-9
  void validate(const BathSpec& spec) const;
};

// Heat bounds for removing delta_s nats of entropy into the bath.
// INFEASIBLE components are nullopt; q_ath stays finite whenever the
// final-entropy target s_ath + delta_s is below the ceiling.
struct ErasureBounds {
  double delta_s = 0.0;
  double q_landauer = 0.0;           // T0 * delta_s
  std::optional<double> q_tight;     // E(S0 + dS) - E(S0), ceiling-limited
  std::optional<double> gain;        // (E_ath - E(S0)) - [E(S_ath+dS) - E(S0+dS)]
  double q_ath = 0.0;                // E(S_ath + dS) - E_ath
  bool tight_feasible = false;
};

// delta_s >= 0; athermal = nullopt means a thermal bath (gain 0, q_ath =
// q_tight). Throws InfeasibleError when s_ath + delta_s >= ln d (no final
// bath state has the required entropy, q_ath itself is undefined).
ErasureBounds erasure_bounds(const BathSpec& spec, double delta_s,
                             const std::optional<AthermalSummary>& athermal);

// Total-function form of the generic lower bound E(S_ath + dS) - E_ath with
// the entropy argument clamped into [0, ln d]; valid for any realized
// entropy change (either sign). Used for bound-compliance checks on rows
// where the strict-domain call above would reject.
double athermal_heat_bound(const BathSpec& spec, const AthermalSummary& ath,
                           double delta_s);

// gain G(delta_s; e_ath, s_ath); InfeasibleError past the ceiling
double gain_value(const BathSpec& spec, double e_ath, double s_ath,
                  double delta_s);

// ---- branch-information (mixing) analysis ------------------------------

struct BranchMember {
  double p = 0.0; // ensemble weight
  Mat state;      // bath-dimension density matrix
};

struct BranchEnsemble {
  std::vector<BranchMember> branches;
  double shared_failure_entropy = 0.0; // every member entropy, nats

  void validate(const BathSpec& spec) const;
};

struct MixtureGain {
  double g_bar; // ensemble-average gain
  double chi;   // Holevo information of the branch ensemble
  double g_mix; // gain retained after discarding the branch index
};

// g_mix = g_bar - [E(S_f + chi + dS) - E(S_f + dS)] <= g_bar;
// InfeasibleError when S_f + chi + dS >= ln d (infinite penalty)
MixtureGain branch_mixture_analysis(const BathSpec& spec,
                                    const BranchEnsemble& ensemble,
                                    double delta_s);

// ---- gain-threshold entropy S_max --------------------------------------

// unique root of gain(delta_s; e_ath, s_ath) = 0 in s_ath; the gain is
// strictly decreasing in s_ath, so G > 0 for s_ath < S_max.
// DomainError unless e_ath > E(S0); ThresholdError when no sign change.
double s_max_threshold(const BathSpec& spec, double e_ath, double delta_s);

struct TradeoffReport {
  double numeric_slope;  // central difference of S_max over delta_s
  double analytic_slope; // T(S0 + dS)/T(S_max + dS) - 1
  double limit_lhs;      // (S_{E_ath} - S_max)/delta_s
  double limit_rhs;      // 1 - T0 / T_{E_ath}
  double limit_slack;    // lhs - rhs; -> 0 from below as delta_s -> 0
};

TradeoffReport s_max_tradeoff_check(const BathSpec& spec, double e_ath,
                                    double delta_s, double h);

} // namespace qrec
