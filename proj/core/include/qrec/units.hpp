#pragma once

namespace qrec::units {

// CODATA / SI exact values
inline constexpr double planck_h = 6.62607015e-34;   // J s
inline constexpr double boltzmann_kb = 1.380649e-23; // J / K

// energy quantum h*f of a resonator at f GHz, in joules
inline double gap_joule(double f_ghz) { return planck_h * f_ghz * 1e9; }

// same, in zeptojoule (1 zJ = 1e-21 J)
inline double gap_zj(double f_ghz) { return gap_joule(f_ghz) * 1e21; }

// dimensionless ratio eps / (k_B T) for gap f GHz at temperature T mK
inline double gap_over_kt(double f_ghz, double t_mk) {
  return gap_joule(f_ghz) / (boltzmann_kb * t_mk * 1e-3);
}

} // namespace qrec::units
