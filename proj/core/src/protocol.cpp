#include "qrec/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qrec/channels.hpp"
#include "qrec/tomography.hpp"
#include "qrec/units.hpp"

namespace qrec {

namespace {

const std::vector<int> kRegDims = {2, 2, 2, 2};
const std::vector<int> kOneQubit = {2};

Mat ry2(double theta) {
  Mat m(2, 2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  m << c, -s, s, c;
  return m;
}

// bath equilibrium excited population (qubit bath)
double bath_p_eq(const BathSpec& bath) {
  return gibbs_populations(bath, bath.t0)[1];
}

struct AlgoOutput {
  double p_fail = 0.0;
  bool degenerate = false; // selected branch missing
  Mat selected_ci;         // reduced C_I state of the selected branch
  Mat success_ci;
  double fidelity = 0.0;
  bool have_fidelity = false;
};

// run the algorithm on the 4-qubit register (with interleaved noise when
// enabled) and split on the ancilla. select_failure picks which branch the
// caller consumes downstream.
AlgoOutput run_algorithm(const ProtocolConfig& cfg, bool select_failure) {
  const HhlInstance inst{cfg.theta_b};
  const double ci0 = cfg.comp_init();
  const double peq = bath_p_eq(cfg.bath);
  const bool noisy = cfg.noise.enabled;

  Mat rho = qubit_diag(ci0);
  for (int q = 1; q < 4; ++q) rho = kron(rho, qubit_diag(ci0));

  // state preparation of b on C_I counts as one single-qubit layer
  rho = apply_unitary(rho, ry2(2.0 * cfg.theta_b), {0}, kRegDims);
  if (noisy) rho = apply_channel(rho, Channel::depolarizing(cfg.noise.p1, 0), kRegDims);

  for (const auto& layer : algorithm_layers(inst, cfg.hhl)) {
    rho = apply_unitary(rho, layer.u, layer.targets, kRegDims);
    if (!noisy) continue;
    const double p = layer.two_qubit ? cfg.noise.p2 : cfg.noise.p1;
    for (int q : layer.targets)
      rho = apply_channel(rho, Channel::depolarizing(p, q), kRegDims);
  }
  if (noisy) {
    const double g = damping_gamma(cfg.noise.duration_algo_us, cfg.noise.t1_us);
    for (int q = 0; q < 4; ++q)
      rho = apply_channel(rho, Channel::gad(g, peq, q), kRegDims);
  }

  const int fail_outcome = 1 - cfg.hhl.success_outcome;
  Mat pf = Mat::Zero(2, 2);
  pf(fail_outcome, fail_outcome) = 1.0;
  const Mat proj = embed_on(pf, {3}, kRegDims);
  const Mat cut = proj * rho * proj;

  AlgoOutput out;
  out.p_fail = cut.trace().real();

  const double p_sel = select_failure ? out.p_fail : 1.0 - out.p_fail;
  out.degenerate = p_sel < 1e-12;

  if (1.0 - out.p_fail >= 1e-12) {
    const auto [ps, rho_s] = measure_branch(rho, 3, cfg.hhl.success_outcome, kRegDims);
    (void)ps;
    out.success_ci = partial_trace(rho_s, {0}, kRegDims);
    Vec psi(2);
    const Eigen::Vector2d x = ideal_solution(inst);
    psi << x(0), x(1);
    out.fidelity = fidelity_with_pure(out.success_ci, psi);
    out.have_fidelity = true;
  }
  if (!out.degenerate) {
    out.selected_ci = select_failure ? partial_trace(cut / out.p_fail, {0}, kRegDims)
                                     : out.success_ci;
  }
  return out;
}

// assemble the bound set for one realized (rho_ath, delta_s); total in the
// sense that every flag combination still yields the reportable pieces
void attach_bounds(const BathSpec& bath, const AthermalSummary& ath,
                   double delta_s, ProtocolResult& res) {
  const GibbsPoint base = gibbs_ensemble(bath, bath.t0);
  const double lnd = bath.ln_dim();

  ErasureBounds eb;
  eb.delta_s = delta_s;
  eb.q_landauer = bath.t0 * delta_s;

  const double arg0 = base.s + delta_s;
  eb.tight_feasible = arg0 >= 0.0 && arg0 < lnd - 1e-12;
  if (eb.tight_feasible)
    eb.q_tight = invert_entropy_closed(bath, arg0).e - base.e;
  else
    res.flags.tight_infeasible = true;

  const double arg_a = ath.s_ath + delta_s;
  if (arg_a < lnd - 1e-12) {
    const double e_final = invert_entropy_closed(bath, std::max(arg_a, 0.0)).e;
    eb.q_ath = e_final - ath.e_ath;
    if (eb.tight_feasible)
      eb.gain = (ath.e_ath - base.e) - (e_final - invert_entropy_closed(bath, arg0).e);
  } else {
    // boundary case: no final bath state has the required entropy
    res.flags.qath_infeasible = true;
  }

  if (delta_s <= 0.0) res.flags.erasure_failed = true;
  res.bounds = eb;
  if (!res.flags.qath_infeasible) res.equality_gap = res.delta_q - eb.q_ath;
}

} // namespace

void NoiseModel::validate() const {
  for (double v : {p1, p2})
    if (v < 0.0 || v > 1.0) throw DomainError("depolarizing probability outside [0,1]");
  if (comp_init_excitation && (*comp_init_excitation < 0.0 || *comp_init_excitation > 1.0))
    throw DomainError("comp_init_excitation outside [0,1]");
  if (!(t1_us > 0.0) || !(latency_ff_us >= 0.0) || !(duration_algo_us >= 0.0))
    throw DomainError("durations must be positive");
}

ProtocolConfig::ProtocolConfig()
    : bath(BathSpec::qubit(1.0, 1.0 / units::gap_over_kt(5.0, 43.0))) {}

void ProtocolConfig::validate() const {
  bath.validate();
  if (bath.dim() != 2) throw DomainError("protocol requires a single-qubit bath");
  hhl.validate();
  noise.validate();
  if (p_x < 0.0 || p_x > 0.5) throw DomainError("p_x outside [0, 1/2]");
  if (theta_b < 0.0 || theta_b > 0.7853981633974483 + 1e-12)
    throw DomainError("theta_b outside [0, pi/4]");
  if (shots_per_basis < 0) throw DomainError("shots_per_basis must be >= 0");
  if (trials < 1) throw DomainError("trials must be >= 1");
}

double ProtocolConfig::comp_init() const {
  if (noise.comp_init_excitation) return *noise.comp_init_excitation;
  return noise.enabled ? bath_p_eq(bath) : 0.0;
}

ProtocolResult run_recycling(const ProtocolConfig& cfg) {
  cfg.validate();
  const double peq = bath_p_eq(cfg.bath);
  const bool noisy = cfg.noise.enabled;

  const AlgoOutput algo = run_algorithm(cfg, /*select_failure=*/true);
  ProtocolResult res;
  res.p_fail = algo.p_fail;
  res.fidelity_success = algo.fidelity;
  if (algo.have_fidelity) res.rho_ci_success = algo.success_ci;

  if (algo.degenerate) {
    res.flags.degenerate_branch = true;
    return res;
  }

  // target system idles (and in noisy mode relaxes) while the algorithm runs
  Mat rho_s = qubit_diag(cfg.p_x);
  if (noisy) {
    const double g = damping_gamma(cfg.noise.duration_algo_us, cfg.noise.t1_us);
    rho_s = apply_channel(rho_s, Channel::gad(g, peq, 0), kOneQubit);
  }

  // feedforward latency degrades C_I (and leaves the thermal bath invariant)
  Mat rho_ci = algo.selected_ci;
  if (noisy) {
    const double g = damping_gamma(cfg.noise.latency_ff_us, cfg.noise.t1_us);
    rho_ci = apply_channel(rho_ci, Channel::gad(g, peq, 0), kOneQubit);
  }

  // reset SWAP(C_I, B): the bath takes over the failure-branch state
  const Mat rho_ath = rho_ci;
  // erasure SWAP(S, B)
  const Mat rho_s_post = rho_ath;
  const Mat rho_b_post = rho_s;

  res.rho_ath = rho_ath;
  res.rho_s_pre = rho_s;
  res.rho_s_post = rho_s_post;
  res.rho_b_pre = rho_ath;
  res.rho_b_post = rho_b_post;

  res.delta_s = von_neumann_entropy(rho_s) - von_neumann_entropy(rho_s_post);
  res.delta_q = state_energy(cfg.bath, rho_b_post) - state_energy(cfg.bath, rho_ath);
  attach_bounds(cfg.bath, AthermalSummary::of_state(cfg.bath, rho_ath), res.delta_s, res);
  return res;
}

ProtocolResult run_reference(const ProtocolConfig& cfg) {
  cfg.validate();
  const double peq = bath_p_eq(cfg.bath);
  const bool noisy = cfg.noise.enabled;

  const AlgoOutput algo = run_algorithm(cfg, /*select_failure=*/false);
  ProtocolResult res;
  res.p_fail = algo.p_fail;
  res.fidelity_success = algo.fidelity;
  if (algo.have_fidelity) res.rho_ci_success = algo.success_ci;

  if (algo.degenerate) {
    res.flags.degenerate_branch = true;
    return res;
  }

  Mat rho_s = qubit_diag(cfg.p_x);
  if (noisy) {
    const double g = damping_gamma(cfg.noise.duration_algo_us, cfg.noise.t1_us);
    rho_s = apply_channel(rho_s, Channel::gad(g, peq, 0), kOneQubit);
  }

  // erasure against the untouched thermal bath, no feedforward
  const Mat rho_b = gibbs_state(cfg.bath, cfg.bath.t0);
  const Mat rho_s_post = rho_b;
  const Mat rho_b_post = rho_s;

  res.rho_ath = rho_b;
  res.rho_s_pre = rho_s;
  res.rho_s_post = rho_s_post;
  res.rho_b_pre = rho_b;
  res.rho_b_post = rho_b_post;

  res.delta_s = von_neumann_entropy(rho_s) - von_neumann_entropy(rho_s_post);
  res.delta_q = state_energy(cfg.bath, rho_b_post) - state_energy(cfg.bath, rho_b);
  // thermal bath: bounds with the Gibbs summary (gain 0, q_ath = q_tight)
  attach_bounds(cfg.bath, AthermalSummary::of_state(cfg.bath, rho_b), res.delta_s, res);
  return res;
}

namespace {

// tomography stream tags: one sub-seed per (value, trial, state, basis)
enum StateTag : std::uint64_t { kSPre = 1, kSPost, kBPre, kBPost, kCiSuccess };

struct TrialQuantities {
  double ds, dq, e_ath, s_ath;
  std::optional<double> fidelity;
};

TrialQuantities trial_estimates(const ProtocolConfig& cfg, const ProtocolResult& exact,
                                std::uint64_t master, int vi, int ti) {
  TrialQuantities q{};
  if (exact.flags.degenerate_branch) {
    // no failure branch: only the success fidelity is measurable
    if (exact.rho_ci_success.size() == 0) return q;
    if (cfg.shots_per_basis == 0) {
      q.fidelity = exact.fidelity_success;
      return q;
    }
    const std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(vi) + 1,
                                        static_cast<std::uint64_t>(ti) + 1, kCiSuccess);
    const Mat ci = estimate_qubit_state(exact.rho_ci_success, cfg.shots_per_basis, s).projected;
    const Eigen::Vector2d x = ideal_solution(HhlInstance{cfg.theta_b});
    Vec psi(2);
    psi << x(0), x(1);
    q.fidelity = fidelity_with_pure(ci, psi);
    return q;
  }
  if (cfg.shots_per_basis == 0) {
    q.ds = exact.delta_s;
    q.dq = exact.delta_q;
    const AthermalSummary ath = AthermalSummary::of_state(cfg.bath, exact.rho_ath);
    q.e_ath = ath.e_ath;
    q.s_ath = ath.s_ath;
    if (exact.rho_ci_success.size() > 0) q.fidelity = exact.fidelity_success;
    return q;
  }
  auto est = [&](const Mat& rho, StateTag tag) {
    const std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(vi) + 1,
                                        static_cast<std::uint64_t>(ti) + 1, tag);
    return estimate_qubit_state(rho, cfg.shots_per_basis, s).projected;
  };
  const Mat s_pre = est(exact.rho_s_pre, kSPre);
  const Mat s_post = est(exact.rho_s_post, kSPost);
  const Mat b_pre = est(exact.rho_b_pre, kBPre);
  const Mat b_post = est(exact.rho_b_post, kBPost);
  q.ds = von_neumann_entropy(s_pre) - von_neumann_entropy(s_post);
  q.dq = state_energy(cfg.bath, b_post) - state_energy(cfg.bath, b_pre);
  q.e_ath = state_energy(cfg.bath, b_pre);
  q.s_ath = von_neumann_entropy(b_pre);
  if (exact.rho_ci_success.size() > 0) {
    const Mat ci = est(exact.rho_ci_success, kCiSuccess);
    const Eigen::Vector2d x = ideal_solution(HhlInstance{cfg.theta_b});
    Vec psi(2);
    psi << x(0), x(1);
    q.fidelity = fidelity_with_pure(ci, psi);
  }
  return q;
}

SweepRow make_row(const ProtocolConfig& cfg, const BathSpec& bath, int vi, int ti,
                  double axis_value, const ProtocolResult& exact,
                  const TrialQuantities& q) {
  SweepRow row;
  row.value_index = vi;
  row.trial = ti + 1;
  row.axis_value = axis_value;
  row.theta_b = cfg.theta_b;
  row.p_x = cfg.p_x;
  row.p_fail = exact.p_fail;
  row.fidelity = q.fidelity;

  if (exact.flags.degenerate_branch) {
    row.flags.degenerate_branch = true;
    return row;
  }

  row.ds = q.ds;
  row.dq = q.dq;

  const GibbsPoint base = gibbs_ensemble(bath, bath.t0);
  const double lnd = bath.ln_dim();
  row.ql = bath.t0 * q.ds;

  const double arg0 = base.s + q.ds;
  if (arg0 >= 0.0 && arg0 < lnd - 1e-12) {
    row.qtight = invert_entropy_closed(bath, arg0).e - base.e;
  } else {
    row.inf_qtight = true;
    row.flags.tight_infeasible = true;
  }
  const double arg_a = q.s_ath + q.ds;
  if (arg_a < lnd - 1e-12) {
    const double e_final = invert_entropy_closed(bath, std::max(arg_a, 0.0)).e;
    row.qath = e_final - q.e_ath;
    if (row.qtight)
      row.gain = (q.e_ath - base.e) - (e_final - invert_entropy_closed(bath, arg0).e);
    else
      row.inf_gain = true;
  } else {
    row.flags.qath_infeasible = true;
    row.inf_gain = true;
  }
  if (q.ds <= 0.0) row.flags.erasure_failed = true;
  return row;
}

// lower-median over a column; values absent in some rows are skipped, INF
// markers order above every finite value
struct MedianCell {
  std::optional<double> value;
  bool inf = false;
};

MedianCell median_cell(const std::vector<const SweepRow*>& rows,
                       std::optional<double> SweepRow::*field, bool SweepRow::*inf_flag) {
  std::vector<double> finite;
  int n_inf = 0;
  for (const SweepRow* r : rows) {
    if (inf_flag != nullptr && r->*inf_flag) {
      ++n_inf;
      continue;
    }
    if ((r->*field).has_value()) finite.push_back(*(r->*field));
  }
  const int n = static_cast<int>(finite.size()) + n_inf;
  if (n == 0) return {};
  const int idx = (n - 1) / 2; // lower median
  std::sort(finite.begin(), finite.end());
  if (idx < static_cast<int>(finite.size())) return {finite[idx], false};
  return {std::nullopt, true};
}

} // namespace

ResultTable sweep(const ProtocolConfig& base, ProtocolKind kind, SweepAxis axis,
                  const std::vector<double>& values, int parallel) {
  if (values.empty()) throw DomainError("sweep needs at least one value");
  if (parallel < 1) parallel = 1;

  ResultTable table;
  table.axis = axis;
  std::vector<std::vector<SweepRow>> per_value(values.size());

  auto eval_value = [&](int vi) {
    ProtocolConfig cfg = base;
    switch (axis) {
      case SweepAxis::ThetaB: cfg.theta_b = values[vi]; break;
      case SweepAxis::Px: cfg.p_x = values[vi]; break;
      case SweepAxis::BathFreqGhz:
        // gap stays the energy unit, so T0 in gap units rescales with 1/f
        cfg.bath = BathSpec::qubit(1.0, 1.0 / units::gap_over_kt(values[vi], base.bath_t0_mk));
        break;
    }
    const ProtocolResult exact =
        kind == ProtocolKind::Recycling ? run_recycling(cfg) : run_reference(cfg);

    std::vector<SweepRow> rows;
    for (int ti = 0; ti < cfg.trials; ++ti) {
      const TrialQuantities q = trial_estimates(cfg, exact, cfg.seed, vi, ti);
      rows.push_back(make_row(cfg, cfg.bath, vi, ti, values[vi], exact, q));
    }

    // median row: lower-medians across trials, erasure_failed rows excluded
    std::vector<const SweepRow*> usable;
    for (const auto& r : rows)
      if (!r.flags.erasure_failed) usable.push_back(&r);
    const bool all_failed = usable.empty();
    if (all_failed)
      for (const auto& r : rows) usable.push_back(&r);

    SweepRow med;
    med.value_index = vi;
    med.trial = -1;
    med.axis_value = values[vi];
    med.theta_b = cfg.theta_b;
    med.p_x = cfg.p_x;
    med.p_fail = exact.p_fail;
    med.flags.degenerate_branch = exact.flags.degenerate_branch;
    med.flags.erasure_failed = all_failed && !exact.flags.degenerate_branch;
    if (!exact.flags.degenerate_branch) {
      auto plain = [&](std::optional<double> SweepRow::*f) {
        return median_cell(usable, f, nullptr).value;
      };
      med.ds = plain(&SweepRow::ds);
      med.dq = plain(&SweepRow::dq);
      med.ql = plain(&SweepRow::ql);
      const MedianCell mt = median_cell(usable, &SweepRow::qtight, &SweepRow::inf_qtight);
      med.qtight = mt.value;
      med.inf_qtight = mt.inf;
      if (mt.inf) med.flags.tight_infeasible = true;
      med.qath = plain(&SweepRow::qath);
      const MedianCell mg = median_cell(usable, &SweepRow::gain, &SweepRow::inf_gain);
      med.gain = mg.value;
      med.inf_gain = mg.inf;
    }
    med.fidelity = median_cell(usable, &SweepRow::fidelity, nullptr).value;
    rows.push_back(med);
    per_value[vi] = std::move(rows);
  };

  if (parallel == 1 || values.size() == 1) {
    for (int vi = 0; vi < static_cast<int>(values.size()); ++vi) eval_value(vi);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min<int>(parallel, static_cast<int>(values.size()));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int vi = next.fetch_add(1); vi < static_cast<int>(values.size());
             vi = next.fetch_add(1))
          eval_value(vi);
      });
    for (auto& t : pool) t.join();
  }

  for (auto& rows : per_value)
    for (auto& r : rows) table.rows.push_back(std::move(r));
  return table;
}

} // namespace qrec
