#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qrec/bath.hpp"
#include "qrec/bounds.hpp"
#include "qrec/hhl.hpp"

namespace qrec {

struct NoiseModel {
  bool enabled = true;
  double t1_us = 397.0;          // relaxation time
  double latency_ff_us = 3.3;    // feedforward + SWAP duration
  double duration_algo_us = 4.0; // algorithm duration
  double p1 = 1e-4;              // depolarizing per single-qubit layer
  double p2 = 5e-3;              // depolarizing per two-qubit gate
  // residual excited population of computational qubits; nullopt = auto
  // (bath thermal population when enabled, exactly 0 when disabled)
  std::optional<double> comp_init_excitation;

  void validate() const;
};

struct ProtocolConfig {
  double theta_b = 0.0;
  double p_x = 0.4;       // target-system mixedness, [0, 1/2]
  BathSpec bath;          // default set in the constructor: 5 GHz gap at 43 mK
  double bath_t0_mk = 43.0; // physical temperature; used by the frequency sweep
  HhlParams hhl;
  NoiseModel noise;
  std::uint64_t seed = 0;
  int shots_per_basis = 8000; // 0 = exact expectation values (no shot noise)
  int trials = 5;

  ProtocolConfig();
  void validate() const;
  double comp_init() const; // resolved comp_init_excitation
};

struct ProtocolFlags {
  bool degenerate_branch = false;
  bool tight_infeasible = false;
  bool erasure_failed = false;  // realized delta_S <= 0
  bool qath_infeasible = false; // entropy target at/above ceiling (boundary case)

  bool any() const {
    return degenerate_branch || tight_infeasible || erasure_failed || qath_infeasible;
  }
};

// Exact (infinite-shot) outcome of one protocol execution. The sweep layer
// adds tomography shot noise on top of the recorded pipeline states.
struct ProtocolResult {
  double p_fail = 0.0;
  Mat rho_ath;       // bath state right after the reset SWAP
  double delta_s = 0.0;
  double delta_q = 0.0; // Tr[H_B(rho'_B - rho_ath)]
  std::optional<ErasureBounds> bounds; // absent when degenerate
  double fidelity_success = 0.0;
  double equality_gap = 0.0; // delta_q - q_ath
  ProtocolFlags flags;

  // pipeline states, for tomography emulation and diagnostics
  Mat rho_s_pre;      // target system before erasure (after idling noise)
  Mat rho_s_post;     // target system after erasure
  Mat rho_b_pre;      // = rho_ath (recycling) or thermal state (reference)
  Mat rho_b_post;     // bath after erasure
  Mat rho_ci_success; // reduced C_I state of the success branch
};

// Fig.-2-style pipeline: run the algorithm (with interleaved noise when
// enabled), select the failure branch, relax during feedforward, reset by
// SWAP(C_I, B), erase by SWAP(S, B).
ProtocolResult run_recycling(const ProtocolConfig& cfg);

// reference erasure in the success branch: SWAP(S, B) against the thermal
// bath, no feedforward latency
ProtocolResult run_reference(const ProtocolConfig& cfg);

enum class ProtocolKind { Recycling, Reference };
enum class SweepAxis { ThetaB, Px, BathFreqGhz };

// One output row. nullopt cells are absent (printed empty); INF-tagged
// bound components are tracked via the flags plus the inf_* markers.
struct SweepRow {
  int value_index = 0;
  int trial = 0;          // 1-based; -1 marks the per-value median row
  double axis_value = 0.0;
  double theta_b = 0.0;
  double p_x = 0.0;
  std::optional<double> p_fail;
  std::optional<double> ds;
  std::optional<double> dq;
  std::optional<double> ql;
  std::optional<double> qtight;
  std::optional<double> qath;
  std::optional<double> gain;
  std::optional<double> fidelity;
  bool inf_qtight = false;
  bool inf_gain = false;
  ProtocolFlags flags;
};

struct ResultTable {
  SweepAxis axis = SweepAxis::ThetaB;
  std::vector<SweepRow> rows; // ordered by (value index, trial), median last per value
};

// One ProtocolResult per value; per trial, quantities are re-derived from
// shot-based tomography estimates of the recorded states (exact when
// shots_per_basis == 0). Median rows are lower-medians across trials with
// erasure_failed rows excluded. `parallel` fans value points out to threads;
// output order and content are independent of the thread count.
ResultTable sweep(const ProtocolConfig& base, ProtocolKind kind, SweepAxis axis,
                  const std::vector<double>& values, int parallel = 1);

} // namespace qrec
