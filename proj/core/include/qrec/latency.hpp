#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qrec {

// total job times T(N) for N repetitions of an amplified operation block;
// each repetition contains n_shots * n_circ executions of the operation
struct LatencyDataset {
  std::vector<std::pair<double, double>> points; // (N, T_total seconds)
  double n_shots = 1e4;
  double n_circ = 10;
  double n_min = 2000; // only N > n_min enter the fit (linear regime)
};

struct LatencyFit {
  double slope = 0.0;     // seconds per repetition unit
  double intercept = 0.0; // seconds
  double per_op = 0.0;    // slope / (n_shots * n_circ)
  double r_squared = 0.0;
  int n_used = 0;
  bool unphysical = false; // slope <= 0
};

// OLS over the points with N > n_min; InsufficientDataError below 3 points
LatencyFit fit_gate_time(const LatencyDataset& data);

// T(N) = overhead + N * per_op * n_shots * n_circ + Gaussian(0, noise_sd),
// optionally rounded to the nearest quantize_s (job-time resolution)
LatencyDataset synthesize_dataset(double per_op_s, double overhead_s,
                                  double noise_sd_s,
                                  const std::vector<double>& ns,
                                  double n_shots, double n_circ,
                                  std::uint64_t seed, double quantize_s = 0.0);

// two-column CSV (N, T_total_seconds) with one header line
LatencyDataset read_dataset_csv(const std::string& path, double n_shots,
                                double n_circ, double n_min);
void write_dataset_csv(const std::string& path, const LatencyDataset& data);

} // namespace qrec
