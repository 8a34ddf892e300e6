#pragma once

#include <cmath>
#include <vector>

#include "qrec/density_matrix.hpp"
#include "qrec/errors.hpp"

namespace qrec {

// Finite bath with spectrum {eps_i}, eps_0 = 0, measured in energy units
// with k_B = 1; temperatures share the energy unit, entropies are in nats.
struct BathSpec {
  std::vector<double> levels;
  double t0 = 1.0; // base temperature

  static BathSpec qubit(double gap, double t0);

  int dim() const { return static_cast<int>(levels.size()); }
  double ln_dim() const { return std::log(static_cast<double>(dim())); }
  double max_level() const { return levels.back(); }
  void validate() const; // DomainError on malformed spectra
};

struct GibbsPoint {
  double t; // temperature
  double e; // mean energy
  double s; // entropy, nats
  double c; // heat capacity Var(eps)/T^2 (= dE/dT), k_B = 1
};

// thermal state data at temperature t (> 0; +inf means uniform)
GibbsPoint gibbs_ensemble(const BathSpec& spec, double t);
std::vector<double> gibbs_populations(const BathSpec& spec, double t);
Mat gibbs_state(const BathSpec& spec, double t); // diagonal DensityMatrix

struct EntropyInversion {
  double t; // temperature with S(t) = s
  double e; // companion energy E(s)
};

// monotone bisection on ln T; domain s in [0, ln d) with the spec'd margin:
// s >= ln d - 1e-12 is an InfeasibleError, s < 0 a DomainError
EntropyInversion temperature_of_entropy(const BathSpec& spec, double s);

// internal-use variant accepting the closed interval [0, ln d]; the
// ceiling maps to the uniform state (T = +inf)
EntropyInversion invert_entropy_closed(const BathSpec& spec, double s);

// Gibbs point with mean energy e; e in [E(T->0), E(T->inf))
GibbsPoint temperature_of_energy(const BathSpec& spec, double e);

double base_entropy(const BathSpec& spec); // S(T0)
double base_energy(const BathSpec& spec);  // E(T0)

// Tr[H_B rho] for a state of the bath's dimension
double state_energy(const BathSpec& spec, const Mat& rho);

} // namespace qrec
