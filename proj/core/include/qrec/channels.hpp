#pragma once

#include <vector>

#include "qrec/density_matrix.hpp"

namespace qrec {

// Single-qubit noise channels. GAD(gamma, p_eq) has fixed point
// diag(1-p_eq, p_eq); depolarizing(p) maps rho -> (1-p) rho + p I/2.
struct Channel {
  enum class Kind { GeneralizedAmplitudeDamping, Depolarizing };

  Kind kind = Kind::Depolarizing;
  double gamma = 0.0; // GAD decay probability, [0,1]
  double p_eq = 0.0;  // GAD equilibrium excited population, [0, 1/2]
  double p = 0.0;     // depolarizing mixing probability, [0,1]
  int target = 0;     // qubit index in the register

  static Channel gad(double gamma, double p_eq, int target);
  static Channel depolarizing(double p, int target);
  void validate() const; // DomainError on out-of-range parameters
};

// 2x2 Kraus operators; completeness sum K†K = I holds to 1e-9
std::vector<Mat> kraus_ops(const Channel& ch);

Mat apply_channel(const Mat& rho, const Channel& ch,
                  const std::vector<int>& dims);

// decay probability accumulated over `duration` with relaxation time `t1`
inline double damping_gamma(double duration_us, double t1_us) {
  return 1.0 - std::exp(-duration_us / t1_us);
}

} // namespace qrec
