#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qrec/density_matrix.hpp"

namespace qrec {

struct PauliCounts {
  long n_plus = 0;
  long n_minus = 0;
  long shots() const { return n_plus + n_minus; }
};

// binomial sampling of +1/-1 outcomes in the given Pauli basis;
// success probability (1 + Tr[rho sigma])/2, deterministic per seed
PauliCounts sample_pauli_counts(const Mat& rho, char basis, long shots,
                                std::uint64_t seed);

struct TomographyEstimate {
  Eigen::Vector3d bloch; // raw (x, y, z) expectation estimates
  Mat raw;               // (I + r.sigma)/2, possibly unphysical
  Mat projected;         // closest physical state (Bloch rescale)
  long shots_per_basis = 0;
};

// linear inversion from X/Y/Z counts
TomographyEstimate reconstruct(const PauliCounts& x, const PauliCounts& y,
                               const PauliCounts& z);

// Bloch-vector rescale to unit norm when |r| > 1; for one qubit this equals
// the eigenvalue-clipping projection. Idempotent, identity on physical input.
Mat project_to_physical(const Mat& raw);

// convenience: three bases with seeds derived from `seed`; shots == 0
// returns the exact state (bloch from expectations, no sampling)
TomographyEstimate estimate_qubit_state(const Mat& rho, long shots,
                                        std::uint64_t seed);

struct TrialSummary {
  double median; // lower-median for even counts
  double min;
  double max;
  std::vector<double> values;
};

TrialSummary summarize_trials(std::vector<double> values); // DomainError if empty

} // namespace qrec
