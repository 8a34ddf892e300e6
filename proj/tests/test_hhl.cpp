#include <doctest.h>

#include <cmath>

#include <qrec/density_matrix.hpp>
#include <qrec/hhl.hpp>

using namespace qrec;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec to_vec(const Eigen::Vector2d& v) {
  Vec out(2);
  out << Cplx(v(0), 0.0), Cplx(v(1), 0.0);
  return out;
}

// |b> (x) |00> (x) |0> in the big-endian register C_I, clock, ancilla
Mat input_state(double theta_b) {
  Vec psi = Vec::Zero(16);
  psi(0) = std::cos(theta_b);
  psi(8) = std::sin(theta_b);
  return projector(psi);
}

} // namespace

TEST_SUITE("hhl") {

TEST_CASE("fixed system eigenpairs") {
  const HhlInstance inst{0.2};
  const Eigen::Matrix2d a = inst.matrix();
  CHECK(a(0, 0) == 2.0);
  CHECK(a(0, 1) == -1.0);
  CHECK((a * HhlInstance::u1() - HhlInstance::lambda1 * HhlInstance::u1()).norm() <
        1e-15);
  CHECK((a * HhlInstance::u2() - HhlInstance::lambda2 * HhlInstance::u2()).norm() <
        1e-15);
  CHECK(inst.b()(0) == doctest::Approx(std::cos(0.2)));
  CHECK(inst.b()(1) == doctest::Approx(std::sin(0.2)));
}

TEST_CASE("ideal solutions") {
  const double r5 = std::sqrt(5.0), r2 = std::sqrt(2.0);
  auto x = ideal_solution(HhlInstance{kPi / 4.0});
  CHECK(x(0) == doctest::Approx(1.0 / r2).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(1.0 / r2).epsilon(1e-12));
  x = ideal_solution(HhlInstance{0.0});
  CHECK(x(0) == doctest::Approx(2.0 / r5).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(1.0 / r5).epsilon(1e-12));
  x = ideal_solution(HhlInstance{kPi / 2.0});
  CHECK(x(0) == doctest::Approx(1.0 / r5).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(2.0 / r5).epsilon(1e-12));
}

TEST_CASE("rotation angles per mode") {
  HhlParams p;
  p.angle_mode = AngleMode::Exact;
  p.c = 1.0;
  CHECK(rotation_angle(p, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(rotation_angle(p, 3.0) ==
        doctest::Approx(2.0 * std::asin(1.0 / 3.0)).epsilon(1e-12));
  p.c = 0.5;
  CHECK(rotation_angle(p, 1.0) == doctest::Approx(kPi / 3.0).epsilon(1e-12));
  p.angle_mode = AngleMode::Simplified;
  CHECK(rotation_angle(p, 1.0) == doctest::Approx(kPi));
  CHECK(rotation_angle(p, 3.0) == doctest::Approx(kPi / 3.0));
}

TEST_CASE("parameter validation") {
  HhlParams p;
  CHECK_NOTHROW(p.validate());
  p.c = 1.2;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.c = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = HhlParams{};
  p.t = 1.0; // eigenphases no longer land on clock basis states
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.t = kPi; // both eigenvalues alias to the same clock state
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = HhlParams{};
  p.success_outcome = 2;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("assembled circuit is unitary") {
  for (auto mode : {AngleMode::Exact, AngleMode::Simplified}) {
    for (double c : {1.0, 0.6}) {
      HhlParams p;
      p.angle_mode = mode;
      p.c = c;
      const Mat u = build_algorithm_unitary(HhlInstance{0.3}, p);
      REQUIRE(u.rows() == 16);
      CHECK(is_unitary(u, 1e-9));
    }
  }
}

TEST_CASE("exact mode reconstructs the solution perfectly") {
  for (double c : {1.0, 0.6}) {
    HhlParams p;
    p.angle_mode = AngleMode::Exact;
    p.c = c;
    for (int i = 0; i <= 8; ++i) {
      const HhlInstance inst{kPi / 4.0 * i / 8.0};
      const auto br = branch_analysis(inst, p);
      CHECK(br.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("clock register disentangles in both branches") {
  const Mat rho_in = input_state(0.3);
  const auto dims = qubit_dims(4);
  for (auto mode : {AngleMode::Exact, AngleMode::Simplified}) {
    HhlParams p;
    p.angle_mode = mode;
    const Mat u = build_algorithm_unitary(HhlInstance{0.3}, p);
    const Mat rho_out = apply_unitary(rho_in, u, {0, 1, 2, 3}, dims);
    for (int outcome : {0, 1}) {
      const auto [prob, branch] = measure_branch(rho_out, 3, outcome, dims);
      REQUIRE(prob > 1e-6);
      const Mat clock = partial_trace(branch, {1, 2}, dims);
      CHECK(clock(0, 0).real() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("failure branch at theta_b = 0") {
  const HhlInstance inst{0.0};
  HhlParams p;

  SUBCASE("exact mode: p_fail = 4/9, failure state is u2") {
    p.angle_mode = AngleMode::Exact;
    const auto br = branch_analysis(inst, p);
    CHECK(br.p_fail == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(br.p_success == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(fidelity_with_pure(br.failure_ci, to_vec(HhlInstance::u2())) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(br.failure_ci(1, 1).real() == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("simplified mode: p_fail = 3/8, failure state is u2") {
    p.angle_mode = AngleMode::Simplified;
    const auto br = branch_analysis(inst, p);
    CHECK(br.p_fail == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(fidelity_with_pure(br.failure_ci, to_vec(HhlInstance::u2())) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // (3,1)/sqrt(10) against (2,1)/sqrt(5): overlap^2 = 49/50
    CHECK(br.fidelity == doctest::Approx(0.98).epsilon(1e-9));
  }
}

TEST_CASE("theta_b = pi/4 has no failure branch") {
  const HhlInstance inst{kPi / 4.0};
  for (auto mode : {AngleMode::Exact, AngleMode::Simplified}) {
    HhlParams p;
    p.angle_mode = mode;
    const auto br = branch_analysis(inst, p);
    CHECK(br.degenerate);
    CHECK(br.p_fail < 1e-12);
    CHECK(br.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(failure_state_oracle(inst, p), DegenerateBranchError);
  }
}

TEST_CASE("hand formula for the failure probability") {
  // p_fail = w (1 - sin 2 theta), w = 4/9 exact (C=1) or 3/8 simplified
  for (int i = 0; i <= 10; ++i) {
    const HhlInstance inst{kPi / 4.0 * i / 10.0};
    HhlParams p;
    p.angle_mode = AngleMode::Exact;
    CHECK(branch_analysis(inst, p).p_fail ==
          doctest::Approx(4.0 / 9.0 * (1.0 - std::sin(2.0 * inst.theta_b)))
              .epsilon(1e-11));
    p.angle_mode = AngleMode::Simplified;
    CHECK(branch_analysis(inst, p).p_fail ==
          doctest::Approx(3.0 / 8.0 * (1.0 - std::sin(2.0 * inst.theta_b)))
              .epsilon(1e-11));
  }
}

TEST_CASE("analytic oracles match the circuit") {
  for (auto mode : {AngleMode::Exact, AngleMode::Simplified}) {
    for (double c : {1.0, 0.7}) {
      HhlParams p;
      p.angle_mode = mode;
      p.c = c;
      for (int i = 0; i < 10; ++i) { // stop short of the degenerate pi/4
        const HhlInstance inst{kPi / 4.0 * i / 10.0};
        const auto br = branch_analysis(inst, p);
        CHECK(br.p_fail ==
              doctest::Approx(failure_probability_oracle(inst, p)).epsilon(1e-12));
        CHECK(fidelity_with_pure(br.failure_ci,
                                 to_vec(failure_state_oracle(inst, p))) ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(purity(br.failure_ci) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

} // TEST_SUITE
