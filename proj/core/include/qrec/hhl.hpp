#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qrec/density_matrix.hpp"

namespace qrec {

// Fixed 2x2 linear-system instance A x = b with A = [[2,-1],[-1,2]],
// b = (cos theta_b, sin theta_b). Eigenpairs: (1, (1,1)/sqrt2) and
// (3, (1,-1)/sqrt2).
struct HhlInstance {
  double theta_b = 0.0;

  Eigen::Matrix2d matrix() const;
  Eigen::Vector2d b() const;

  static constexpr double lambda1 = 1.0;
  static constexpr double lambda2 = 3.0;
  static Eigen::Vector2d u1();
  static Eigen::Vector2d u2();
};

enum class AngleMode { Exact, Simplified };

struct HhlParams {
  double c = 1.0;                    // rotation constant, (0, 1]
  double t = 1.5707963267948966;     // pi/2: eigenphases 1/4 and 3/4
  AngleMode angle_mode = AngleMode::Simplified;
  int success_outcome = 1;           // ancilla value labeling success

  void validate() const; // DomainError; phase-alignment of t is checked too
};

// conditional-rotation angle for eigenvalue lambda under the active mode
double rotation_angle(const HhlParams& params, double lambda);

// normalized A^-1 b with nonnegative first component
Eigen::Vector2d ideal_solution(const HhlInstance& inst);

// One logical gate layer of the algorithm: unitary on `targets` (register
// order C_I=0, clock=1,2, ancilla=3), flagged by noise weight class.
struct CircuitLayer {
  Mat u;
  std::vector<int> targets;
  bool two_qubit = false;
};

// the algorithm as a layer sequence (state preparation of b excluded)
std::vector<CircuitLayer> algorithm_layers(const HhlInstance& inst,
                                           const HhlParams& params);

// product of the layers: full 16x16 unitary on C_I x clock x ancilla
Mat build_algorithm_unitary(const HhlInstance& inst, const HhlParams& params);

struct BranchAnalysis {
  double p_success = 0.0;
  double p_fail = 0.0;
  bool degenerate = false; // failure probability < 1e-12
  Mat success_ci;          // reduced C_I state of the success branch
  Mat failure_ci;          // reduced C_I state of the failure branch (unset when degenerate)
  double fidelity = 0.0;   // <x|rho_CI^success|x>
};

// run the ideal circuit on b(theta_b), measure the ancilla, reduce to C_I
BranchAnalysis branch_analysis(const HhlInstance& inst, const HhlParams& params);

// analytic failure state: normalized beta1 cos(theta_1/2) u1 + beta2 cos(theta_3/2) u2
Eigen::Vector2d failure_state_oracle(const HhlInstance& inst,
                                     const HhlParams& params);

// analytic failure probability matching the oracle above
double failure_probability_oracle(const HhlInstance& inst,
                                  const HhlParams& params);

} // namespace qrec
