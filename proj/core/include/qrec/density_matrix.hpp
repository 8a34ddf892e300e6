#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrec/errors.hpp"
#include "qrec/rng.hpp"

namespace qrec {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Subsystem ordering convention: subsystem 0 is the MOST significant tensor
// factor, i.e. a full-space basis index decomposes big-endian across `dims`.
// Every operation in this library uses this convention.

inline std::vector<int> qubit_dims(int n) { return std::vector<int>(n, 2); }

// ---- invariant checks -------------------------------------------------

// max |rho - rho†|, |Tr rho - 1|, min eigenvalue, all within tolerances
bool is_density_matrix(const Mat& rho, double tol = 1e-9);
void require_density_matrix(const Mat& rho, double tol = 1e-9); // StateError

bool is_unitary(const Mat& u, double tol = 1e-9);

// ---- basic constructions ----------------------------------------------

Mat kron(const Mat& a, const Mat& b);
Mat projector(const Vec& psi);
Mat qubit_diag(double p_excited); // diag(1-p, p)
Mat pauli(char axis);             // 'X' | 'Y' | 'Z' | 'I'

// Haar unitary by QR of a complex Gaussian matrix, R-diagonal phase fixed
Mat random_haar_unitary(int dim, Rng& rng);
// random mixed state: Haar basis with Dirichlet-ish random spectrum
Mat random_density(int dim, Rng& rng);

// ---- core operations ---------------------------------------------------

// spectral entropy in nats; eigenvalues in [-1e-9, 0) clamp to 0,
// below -1e-6 is a StateError
double von_neumann_entropy(const Mat& rho);

double purity(const Mat& rho);

// reduced state on `keep` (in the given order) of a state over `dims`
Mat partial_trace(const Mat& rho, const std::vector<int>& keep,
                  const std::vector<int>& dims);

// operator acting on `targets` embedded into the full space `dims`
Mat embed_on(const Mat& op, const std::vector<int>& targets,
             const std::vector<int>& dims);

// U_emb rho U_emb†; throws OperatorError if u is not unitary
Mat apply_unitary(const Mat& rho, const Mat& u, const std::vector<int>& targets,
                  const std::vector<int>& dims);

// projective single-qubit measurement branch: (probability, post-state);
// probability < 1e-12 throws DegenerateBranchError
std::pair<double, Mat> measure_branch(const Mat& rho, int qubit, int outcome,
                                      const std::vector<int>& dims);

// <psi| rho |psi>; psi must be normalized to 1e-9
double fidelity_with_pure(const Mat& rho, const Vec& psi);

} // namespace qrec
