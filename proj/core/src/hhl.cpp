#include "qrec/hhl.hpp"

#include <cmath>

namespace qrec {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::vector<int> kRegDims = {2, 2, 2, 2}; // C_I, clock c1, clock c2, ancilla

Mat ry(double theta) {
  Mat m(2, 2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  m << c, -s, s, c;
  return m;
}

Mat hadamard2() {
  Mat h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

// exp(i A t) through the fixed eigendecomposition of A
Mat expi_at(double t) {
  const Cplx e1 = std::polar(1.0, HhlInstance::lambda1 * t);
  const Cplx e2 = std::polar(1.0, HhlInstance::lambda2 * t);
  Mat m(2, 2);
  m(0, 0) = 0.5 * (e1 + e2);
  m(0, 1) = 0.5 * (e1 - e2);
  m(1, 0) = 0.5 * (e1 - e2);
  m(1, 1) = 0.5 * (e1 + e2);
  return m;
}

// controlled-U with the control as the most significant of the pair
Mat controlled(const Mat& u) {
  Mat c = Mat::Identity(4, 4);
  c.block(2, 2, 2, 2) = u;
  return c;
}

// 2-qubit QFT on the clock register (c1 most significant)
Mat qft4() {
  Mat f(4, 4);
  const Cplx w(0.0, 1.0); // exp(2 pi i / 4)
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) f(j, k) = 0.5 * std::pow(w, j * k);
  return f;
}

// ancilla rotation keyed on one clock state; acts on (c1, c2, ancilla)
Mat keyed_rotation(int clock_key, double theta) {
  Mat c = Mat::Identity(8, 8);
  c.block(2 * clock_key, 2 * clock_key, 2, 2) = ry(theta);
  return c;
}

} // namespace

Eigen::Matrix2d HhlInstance::matrix() const {
  Eigen::Matrix2d a;
  a << 2, -1, -1, 2;
  return a;
}

Eigen::Vector2d HhlInstance::b() const {
  return {std::cos(theta_b), std::sin(theta_b)};
}

Eigen::Vector2d HhlInstance::u1() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r};
}

Eigen::Vector2d HhlInstance::u2() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, -r};
}

void HhlParams::validate() const {
  if (!(c > 0.0) || c > 1.0) throw DomainError("rotation constant must lie in (0, 1]");
  if (success_outcome != 0 && success_outcome != 1)
    throw DomainError("success outcome must be 0 or 1");
  // both eigenphases lambda t / (2 pi) must land exactly on 2-bit clock states
  for (double lam : {HhlInstance::lambda1, HhlInstance::lambda2}) {
    const double phase4 = 4.0 * lam * t / (2.0 * kPi);
    if (std::abs(phase4 - std::round(phase4)) > 1e-9)
      throw DomainError("t does not align the eigenphases to clock basis states");
  }
  const int k1 = static_cast<int>(std::round(4.0 * HhlInstance::lambda1 * t / (2.0 * kPi))) & 3;
  const int k2 = static_cast<int>(std::round(4.0 * HhlInstance::lambda2 * t / (2.0 * kPi))) & 3;
  if (k1 == k2) throw DomainError("t maps both eigenvalues to the same clock state");
}

double rotation_angle(const HhlParams& params, double lambda) {
  if (params.angle_mode == AngleMode::Exact) return 2.0 * std::asin(params.c / lambda);
  // simplified-construction presets
  return lambda < 2.0 ? kPi : kPi / 3.0;
}

Eigen::Vector2d ideal_solution(const HhlInstance& inst) {
  const Eigen::Vector2d x = inst.matrix().inverse() * inst.b();
  Eigen::Vector2d n = x / x.norm();
  if (n(0) < 0.0) n = -n;
  return n;
}

std::vector<CircuitLayer> algorithm_layers(const HhlInstance& inst,
                                           const HhlParams& params) {
  params.validate();
  (void)inst; // the instance matrix is fixed; theta_b enters via state prep
  const double t = params.t;
  const Mat hh = kron(hadamard2(), hadamard2());
  const Mat f = qft4();

  // clock keys for the two eigenvalues under the phase alignment
  const int key1 = static_cast<int>(std::round(4.0 * HhlInstance::lambda1 * t / (2.0 * kPi))) & 3;
  const int key2 = static_cast<int>(std::round(4.0 * HhlInstance::lambda2 * t / (2.0 * kPi))) & 3;

  std::vector<CircuitLayer> ls;
  ls.push_back({hh, {1, 2}, false});
  ls.push_back({controlled(expi_at(t)), {2, 0}, true});        // c2 controls e^{iAt}
  ls.push_back({controlled(expi_at(2.0 * t)), {1, 0}, true});  // c1 controls e^{2iAt}
  ls.push_back({f.adjoint(), {1, 2}, true});
  ls.push_back({keyed_rotation(key1, rotation_angle(params, HhlInstance::lambda1)), {1, 2, 3}, true});
  ls.push_back({keyed_rotation(key2, rotation_angle(params, HhlInstance::lambda2)), {1, 2, 3}, true});
  ls.push_back({f, {1, 2}, true});
  ls.push_back({controlled(expi_at(-2.0 * t)), {1, 0}, true});
  ls.push_back({controlled(expi_at(-t)), {2, 0}, true});
  ls.push_back({hh, {1, 2}, false});
  return ls;
}

Mat build_algorithm_unitary(const HhlInstance& inst, const HhlParams& params) {
  Mat u = Mat::Identity(16, 16);
  for (const auto& layer : algorithm_layers(inst, params))
    u = embed_on(layer.u, layer.targets, kRegDims) * u;
  if (!is_unitary(u)) throw OperatorError("assembled algorithm is not unitary");
  return u;
}

BranchAnalysis branch_analysis(const HhlInstance& inst, const HhlParams& params) {
  params.validate();
  const Mat u = build_algorithm_unitary(inst, params);

  Vec input = Vec::Zero(16);
  const Eigen::Vector2d b = inst.b();
  // |b> on C_I, clock and ancilla in |0>; C_I is the most significant qubit
  input(0) = b(0);
  input(8) = b(1);
  const Mat rho = apply_unitary(projector(input), u, {0, 1, 2, 3}, kRegDims);

  const int fail_outcome = 1 - params.success_outcome;
  BranchAnalysis out;

  Mat p2 = Mat::Zero(2, 2);
  p2(fail_outcome, fail_outcome) = 1.0;
  const Mat proj = embed_on(p2, {3}, kRegDims);
  const Mat cut = proj * rho * proj;
  out.p_fail = cut.trace().real();
  out.p_success = 1.0 - out.p_fail;
  out.degenerate = out.p_fail < 1e-12;
  if (!out.degenerate)
    out.failure_ci = partial_trace(cut / out.p_fail, {0}, kRegDims);

  if (out.p_success >= 1e-12) {
    const auto [ps, rho_s] = measure_branch(rho, 3, params.success_outcome, kRegDims);
    out.p_success = ps;
    out.success_ci = partial_trace(rho_s, {0}, kRegDims);
    const Eigen::Vector2d x = ideal_solution(inst);
    Vec psi(2);
    psi << x(0), x(1);
    out.fidelity = fidelity_with_pure(out.success_ci, psi);
  }
  return out;
}

Eigen::Vector2d failure_state_oracle(const HhlInstance& inst,
                                     const HhlParams& params) {
  const double b1 = HhlInstance::u1().dot(inst.b());
  const double b2 = HhlInstance::u2().dot(inst.b());
  const double g1 = std::cos(rotation_angle(params, HhlInstance::lambda1) / 2.0);
  const double g2 = std::cos(rotation_angle(params, HhlInstance::lambda2) / 2.0);
  Eigen::Vector2d v = b1 * g1 * HhlInstance::u1() + b2 * g2 * HhlInstance::u2();
  const double n = v.norm();
  if (n < 1e-12) throw DegenerateBranchError("failure branch has no support");
  return v / n;
}

double failure_probability_oracle(const HhlInstance& inst,
                                  const HhlParams& params) {
  const double b1 = HhlInstance::u1().dot(inst.b());
  const double b2 = HhlInstance::u2().dot(inst.b());
  const double g1 = std::cos(rotation_angle(params, HhlInstance::lambda1) / 2.0);
  const double g2 = std::cos(rotation_angle(params, HhlInstance::lambda2) / 2.0);
  return b1 * b1 * g1 * g1 + b2 * b2 * g2 * g2;
}

} // namespace qrec
