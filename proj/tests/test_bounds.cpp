#include <doctest.h>

#include <cmath>
#include <optional>

#include <qrec/bath.hpp>
#include <qrec/bounds.hpp>
#include <qrec/density_matrix.hpp>
#include <qrec/rng.hpp>
#include <qrec/units.hpp>

#include "support/oracles.hpp"

using namespace qrec;

namespace {

const BathSpec kQubit = BathSpec::qubit(1.0, 1.0 / 5.5804);
const BathSpec kThree{{0.0, 1.0, 2.5}, 0.4};

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

// Bloch radius whose qubit state has the requested entropy
double radius_for_entropy(double s) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(0.5 * (1.0 - mid)) > s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mat bloch_state(double rx, double ry, double rz) {
  Mat rho(2, 2);
  rho << Cplx(0.5 * (1.0 + rz), 0.0), Cplx(0.5 * rx, -0.5 * ry),
      Cplx(0.5 * rx, 0.5 * ry), Cplx(0.5 * (1.0 - rz), 0.0);
  return rho;
}

Mat random_direction_state(double r, Rng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::acos(-1.0) * rng.uniform();
  const double sxy = std::sqrt(std::max(0.0, 1.0 - z * z));
  return bloch_state(r * sxy * std::cos(phi), r * sxy * std::sin(phi), r * z);
}

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("zero erasure costs nothing") {
  const auto b = erasure_bounds(kQubit, 0.0, std::nullopt);
  CHECK(b.q_landauer == 0.0);
  REQUIRE(b.q_tight.has_value());
  CHECK(std::abs(*b.q_tight) < 1e-12);
  CHECK(std::abs(b.q_ath) < 1e-12);
  REQUIRE(b.gain.has_value());
  CHECK(std::abs(*b.gain) < 1e-12);
}

TEST_CASE("thermal bath gives zero gain and q_ath == q_tight") {
  for (double ds : {0.05, 0.2, 0.4, 0.6}) {
    const auto b = erasure_bounds(kQubit, ds, std::nullopt);
    REQUIRE(b.tight_feasible);
    REQUIRE(b.gain.has_value());
    CHECK(std::abs(*b.gain) < 1e-12);
    CHECK(b.q_ath == doctest::Approx(*b.q_tight).epsilon(1e-12));
    CHECK(b.q_landauer == doctest::Approx(kQubit.t0 * ds));
  }
}

TEST_CASE("pure half-excited recycled bath refunds 0.1 eps") {
  // erase H(0.4) nats of entropy against a pure state with <E> = eps/2
  const double ds = binary_entropy(0.4);
  const AthermalSummary ath{0.5, 0.0};
  const auto b = erasure_bounds(kQubit, ds, ath);
  CHECK_FALSE(b.tight_feasible); // S0 + ds crosses ln 2
  CHECK_FALSE(b.q_tight.has_value());
  CHECK_FALSE(b.gain.has_value());
  // final state diag(0.6, 0.4): energy 0.4, so the bath *loses* 0.1 eps
  CHECK(b.q_ath == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("tight bound dominates Landauer") {
  for (const auto& spec : {kQubit, kThree}) {
    const double cap = spec.ln_dim() - base_entropy(spec) - 1e-3;
    for (int i = 1; i <= 12; ++i) {
      const double ds = cap * i / 12.0;
      const auto b = erasure_bounds(spec, ds, std::nullopt);
      REQUIRE(b.q_tight.has_value());
      CHECK(*b.q_tight >= b.q_landauer - 1e-12);
    }
  }
}

TEST_CASE("q_ath = q_tight - gain for random athermal summaries") {
  Rng rng(2024);
  int checked = 0;
  while (checked < 1000) {
    const double s_ath = rng.uniform() * (std::log(2.0) - 0.05);
    const double e_min = invert_entropy_closed(kQubit, s_ath).e;
    const double e_ath = e_min + rng.uniform() * (0.98 - e_min);
    const double ds =
        rng.uniform() * (std::log(2.0) - std::max(s_ath, base_entropy(kQubit)) - 1e-3);
    if (ds < 0.0) continue;
    const auto b = erasure_bounds(kQubit, ds, AthermalSummary{e_ath, s_ath});
    REQUIRE(b.tight_feasible);
    REQUIRE(b.gain.has_value());
    CHECK(b.q_ath == doctest::Approx(*b.q_tight - *b.gain).epsilon(1e-9));
    CHECK(*b.gain ==
          doctest::Approx(gain_value(kQubit, e_ath, s_ath, ds)).epsilon(1e-12));
    ++checked;
  }
}

TEST_CASE("closed-form tight bound matches heat-capacity quadrature") {
  // sanity subset; the acceptance suite runs the full grid
  for (const auto& spec : {kQubit, kThree}) {
    const double cap = spec.ln_dim() - base_entropy(spec) - 1e-3;
    for (int i = 1; i <= 5; ++i) {
      const double ds = cap * i / 5.5;
      const auto b = erasure_bounds(spec, ds, std::nullopt);
      REQUIRE(b.q_tight.has_value());
      const double q_ref = oracles::q_tight_quadrature(spec, ds);
      CHECK(*b.q_tight == doctest::Approx(q_ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("temperature is the slope of energy against entropy") {
  const double h = 1e-7;
  for (const auto& spec : {kQubit, kThree}) {
    for (double frac : {0.05, 0.3, 0.6, 0.9}) {
      const double s = frac * (spec.ln_dim() - 0.01);
      const double de = invert_entropy_closed(spec, s + h).e -
                        invert_entropy_closed(spec, s - h).e;
      const double t = temperature_of_entropy(spec, s).t;
      CHECK(de / (2.0 * h) == doctest::Approx(t).epsilon(1e-6));
    }
  }
}

TEST_CASE("athermal summary validation") {
  SUBCASE("of_state reads energy and entropy off the state") {
    const auto ath = AthermalSummary::of_state(kQubit, qubit_diag(0.4));
    CHECK(ath.e_ath == doctest::Approx(0.4));
    CHECK(ath.s_ath == doctest::Approx(binary_entropy(0.4)).epsilon(1e-12));
    CHECK_NOTHROW(ath.validate(kQubit));
  }
  SUBCASE("energy below the Gibbs curve is rejected") {
    // at entropy H(0.4) the minimum energy is exactly 0.4 eps
    CHECK_THROWS_AS(
        (AthermalSummary{0.39, binary_entropy(0.4)}).validate(kQubit),
        DomainError);
    CHECK_NOTHROW((AthermalSummary{0.4, binary_entropy(0.4)}).validate(kQubit));
    CHECK_NOTHROW((AthermalSummary{0.5, 0.0}).validate(kQubit));
  }
  SUBCASE("entropy and energy ranges") {
    CHECK_THROWS_AS((AthermalSummary{0.5, std::log(2.0) + 1e-3}).validate(kQubit),
                    DomainError);
    CHECK_THROWS_AS((AthermalSummary{1.1, 0.0}).validate(kQubit), DomainError);
    CHECK_THROWS_AS((AthermalSummary{-0.1, 0.0}).validate(kQubit), DomainError);
  }
}

TEST_CASE("negative erasure amount is a domain error") {
  CHECK_THROWS_AS(erasure_bounds(kQubit, -0.01, std::nullopt), DomainError);
}

TEST_CASE("infeasible athermal target throws") {
  // pure -> fine; near-maximally-mixed summary + large ds -> past ceiling
  const AthermalSummary ath{0.5, std::log(2.0) - 1e-3};
  CHECK_THROWS_AS(erasure_bounds(kQubit, 0.01, ath), InfeasibleError);
}

TEST_CASE("total-function bound clamps at the edges") {
  const AthermalSummary ath{0.5, 0.0};
  // entropy decrease of the bath clamps at s = 0
  CHECK(athermal_heat_bound(kQubit, ath, -0.5) == doctest::Approx(-0.5));
  // past the ceiling clamps at ln 2 (maximally mixed, E = eps/2)
  CHECK(athermal_heat_bound(kQubit, ath, 10.0) == doctest::Approx(0.0));
  // interior agrees with the strict-domain variant
  const double ds = 0.3;
  const auto b = erasure_bounds(kQubit, ds, ath);
  CHECK(athermal_heat_bound(kQubit, ath, ds) == doctest::Approx(b.q_ath).epsilon(1e-12));
}

TEST_CASE("branch mixture: single branch has zero Holevo information") {
  BranchEnsemble ens;
  ens.branches.push_back({1.0, qubit_diag(0.2)});
  ens.shared_failure_entropy = binary_entropy(0.2);
  const auto mg = branch_mixture_analysis(kQubit, ens, 0.1);
  CHECK(std::abs(mg.chi) < 1e-12);
  CHECK(mg.g_mix == doctest::Approx(mg.g_bar).epsilon(1e-12));
}

TEST_CASE("branch mixture: identical branches mix for free") {
  BranchEnsemble ens;
  ens.branches.push_back({0.5, qubit_diag(0.2)});
  ens.branches.push_back({0.5, qubit_diag(0.2)});
  ens.shared_failure_entropy = binary_entropy(0.2);
  const auto mg = branch_mixture_analysis(kQubit, ens, 0.1);
  CHECK(std::abs(mg.chi) < 1e-12);
  CHECK(mg.g_mix == doctest::Approx(mg.g_bar).epsilon(1e-12));
}

TEST_CASE("branch mixture: orthogonal pure branches saturate the ceiling") {
  BranchEnsemble ens;
  Vec zero(2), one(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  ens.branches.push_back({0.5, projector(zero)});
  ens.branches.push_back({0.5, projector(one)});
  ens.shared_failure_entropy = 0.0;
  // chi = ln 2 puts the mixture at the ceiling: infinite penalty
  CHECK_THROWS_AS(branch_mixture_analysis(kQubit, ens, 0.1), InfeasibleError);
}

TEST_CASE("branch mixture: discarding the record never helps") {
  Rng rng(77);
  int accepted = 0;
  for (int trial = 0; trial < 800 && accepted < 400; ++trial) {
    const double s_f = 0.25 + 0.3 * rng.uniform();
    const double r = radius_for_entropy(s_f);
    const int k = 2 + static_cast<int>(rng.uniform() * 3.0);
    BranchEnsemble ens;
    ens.shared_failure_entropy = s_f;
    double tot = 0.0;
    std::vector<double> w(k);
    for (auto& x : w) tot += (x = 0.05 + rng.uniform());
    for (int m = 0; m < k; ++m)
      ens.branches.push_back({w[m] / tot, random_direction_state(r, rng)});
    const double ds = 0.02 + 0.05 * rng.uniform();
    try {
      const auto mg = branch_mixture_analysis(kQubit, ens, ds);
      CHECK(mg.chi >= -1e-12);
      CHECK(mg.g_mix <= mg.g_bar + 1e-9);
      ++accepted;
    } catch (const InfeasibleError&) {
      // mixture entropy hit the ceiling; skip
    }
  }
  CHECK(accepted >= 300);
}

TEST_CASE("branch ensemble validation") {
  BranchEnsemble ens;
  CHECK_THROWS_AS(ens.validate(kQubit), DomainError); // empty
  ens.branches.push_back({0.7, qubit_diag(0.3)});
  ens.shared_failure_entropy = binary_entropy(0.3);
  CHECK_THROWS_AS(ens.validate(kQubit), DomainError); // weights sum to 0.7
  ens.branches.push_back({0.3, qubit_diag(0.1)});
  CHECK_THROWS_AS(ens.validate(kQubit), DomainError); // entropy mismatch
  ens.branches[1] = {0.3, qubit_diag(0.7)};           // same entropy as 0.3
  CHECK_NOTHROW(ens.validate(kQubit));
}

TEST_CASE("gain threshold: bisection agrees with a dense scan") {
  const double e_ath = 0.3, ds = 0.2;
  const double s_max = s_max_threshold(kQubit, e_ath, ds);
  // two-stage grid scan for the sign change of the strictly decreasing gain
  auto g = [&](double s) { return gain_value(kQubit, e_ath, s, ds); };
  double lo = 0.0, hi = kQubit.ln_dim() - ds - 1e-9;
  for (int stage = 0; stage < 2; ++stage) {
    const int n = 2000;
    const double step = (hi - lo) / n;
    for (int i = 1; i <= n; ++i) {
      const double s = lo + step * i;
      if (g(s) <= 0.0) {
        hi = s;
        lo = s - step;
        break;
      }
    }
  }
  CHECK(s_max >= lo - 1e-12);
  CHECK(s_max <= hi + 1e-12);
  CHECK(hi - lo <= 1e-6);
}

TEST_CASE("gain threshold: small-erasure limit hits the isentrope") {
  const double e_ath = 0.3;
  const double s_e = temperature_of_energy(kQubit, e_ath).s;
  const double s_max = s_max_threshold(kQubit, e_ath, 1e-9);
  CHECK(s_max == doctest::Approx(s_e).epsilon(1e-6));
}

TEST_CASE("gain threshold: shrinks as the erasure grows") {
  const double e_ath = 0.3;
  CHECK(s_max_threshold(kQubit, e_ath, 0.1) > s_max_threshold(kQubit, e_ath, 0.2));
  CHECK(s_max_threshold(kQubit, e_ath, 0.2) > s_max_threshold(kQubit, e_ath, 0.3));
}

TEST_CASE("gain threshold: needs genuinely athermal energy") {
  CHECK_THROWS_AS(s_max_threshold(kQubit, base_energy(kQubit), 0.2), DomainError);
  CHECK_THROWS_AS(s_max_threshold(kQubit, 0.5 * base_energy(kQubit), 0.2),
                  DomainError);
}

TEST_CASE("tradeoff slope: numeric matches the implicit-function form") {
  const double e_ath = 0.3, ds = 0.2, h = 1e-3;
  const auto rep = s_max_tradeoff_check(kQubit, e_ath, ds, h);
  const double scale = std::max(1.0, std::abs(rep.analytic_slope));
  CHECK(std::abs(rep.numeric_slope - rep.analytic_slope) <=
        std::max(1e-4, 10.0 * h * h * scale));
  CHECK(rep.analytic_slope < 0.0); // raising ds always lowers the threshold
}

TEST_CASE("tradeoff limit: slack vanishes from below with the erasure") {
  const double e_ath = 0.3;
  const auto wide = s_max_tradeoff_check(kQubit, e_ath, 0.2, 1e-3);
  CHECK(wide.limit_slack < 0.0);
  CHECK(wide.limit_slack > -0.5);
  const auto tight = s_max_tradeoff_check(kQubit, e_ath, 1e-6, 1e-6);
  CHECK(tight.limit_slack >= -1e-6);
  CHECK(tight.limit_slack <= 1e-9);
  CHECK(std::abs(tight.limit_slack) < std::abs(wide.limit_slack));
}

TEST_CASE("tradeoff check rejects a step larger than the erasure") {
  CHECK_THROWS_AS(s_max_tradeoff_check(kQubit, 0.3, 1e-4, 1e-3), DomainError);
}

} // TEST_SUITE
