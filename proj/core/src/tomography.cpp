#include "qrec/tomography.hpp"

#include <algorithm>
#include <cmath>

#include "qrec/errors.hpp"
#include "qrec/rng.hpp"

namespace qrec {

namespace {

double pauli_expectation(const Mat& rho, char basis) {
  const double v = (rho * pauli(basis)).trace().real();
  // clamp against eigenvalue-clipping round-off of the input state
  return std::clamp(v, -1.0, 1.0);
}

} // namespace

PauliCounts sample_pauli_counts(const Mat& rho, char basis, long shots,
                                std::uint64_t seed) {
  if (rho.rows() != 2 || rho.cols() != 2)
    throw ShapeError("tomography expects a single-qubit state");
  if (shots < 1) throw DomainError("shots must be >= 1");
  const double p_plus = 0.5 * (1.0 + pauli_expectation(rho, basis));
  Rng rng(seed);
  PauliCounts c;
  c.n_plus = rng.binomial(shots, p_plus);
  c.n_minus = shots - c.n_plus;
  return c;
}

TomographyEstimate reconstruct(const PauliCounts& x, const PauliCounts& y,
                               const PauliCounts& z) {
  for (const auto* c : {&x, &y, &z})
    if (c->shots() < 1) throw DomainError("empty count record");
  auto mean = [](const PauliCounts& c) {
    return static_cast<double>(c.n_plus - c.n_minus) / static_cast<double>(c.shots());
  };
  TomographyEstimate est;
  est.bloch = Eigen::Vector3d(mean(x), mean(y), mean(z));
  est.shots_per_basis = std::min({x.shots(), y.shots(), z.shots()});
  est.raw = 0.5 * (Mat::Identity(2, 2) + est.bloch(0) * pauli('X') +
                   est.bloch(1) * pauli('Y') + est.bloch(2) * pauli('Z'));
  est.projected = project_to_physical(est.raw);
  return est;
}

Mat project_to_physical(const Mat& raw) {
  if (raw.rows() != 2 || raw.cols() != 2)
    throw ShapeError("projection expects a single-qubit state");
  if (std::abs(raw.trace().real() - 1.0) > 1e-9 ||
      std::abs(raw.trace().imag()) > 1e-9)
    throw StateError("projection input must have unit trace");
  Eigen::Vector3d r;
  r << (raw * pauli('X')).trace().real(), (raw * pauli('Y')).trace().real(),
      (raw * pauli('Z')).trace().real();
  const double n = r.norm();
  if (n > 1.0) r /= n;
  return 0.5 * (Mat::Identity(2, 2) + r(0) * pauli('X') + r(1) * pauli('Y') +
                r(2) * pauli('Z'));
}

TomographyEstimate estimate_qubit_state(const Mat& rho, long shots,
                                        std::uint64_t seed) {
  if (rho.rows() != 2 || rho.cols() != 2)
    throw ShapeError("tomography expects a single-qubit state");
  if (shots == 0) {
    TomographyEstimate est;
    est.bloch = Eigen::Vector3d(pauli_expectation(rho, 'X'),
                                pauli_expectation(rho, 'Y'),
                                pauli_expectation(rho, 'Z'));
    est.raw = rho;
    est.projected = project_to_physical(rho);
    est.shots_per_basis = 0;
    return est;
  }
  const PauliCounts x = sample_pauli_counts(rho, 'X', shots, derive_seed(seed, 'X'));
  const PauliCounts y = sample_pauli_counts(rho, 'Y', shots, derive_seed(seed, 'Y'));
  const PauliCounts z = sample_pauli_counts(rho, 'Z', shots, derive_seed(seed, 'Z'));
  return reconstruct(x, y, z);
}

TrialSummary summarize_trials(std::vector<double> values) {
  if (values.empty()) throw DomainError("no trial values");
  std::sort(values.begin(), values.end());
  TrialSummary s;
  s.median = values[(values.size() - 1) / 2];
  s.min = values.front();
  s.max = values.back();
  s.values = std::move(values);
  return s;
}

} // namespace qrec
