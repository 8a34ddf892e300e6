#include "qrec/latency.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qrec/errors.hpp"
#include "qrec/rng.hpp"

namespace qrec {

LatencyFit fit_gate_time(const LatencyDataset& data) {
  if (!(data.n_shots > 0) || !(data.n_circ > 0))
    throw DomainError("n_shots and n_circ must be positive");
  std::vector<std::pair<double, double>> used;
  for (const auto& [n, t] : data.points)
    if (n > data.n_min) used.push_back({n, t});
  if (used.size() < 3)
    throw InsufficientDataError("need at least 3 points above n_min for the fit");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : used) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(used.size());
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw InsufficientDataError("degenerate N values");

  LatencyFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.per_op = fit.slope / (data.n_shots * data.n_circ);
  fit.n_used = static_cast<int>(used.size());
  fit.unphysical = fit.slope <= 0.0;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (const auto& [x, y] : used) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
    ss_tot += (y - ybar) * (y - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

LatencyDataset synthesize_dataset(double per_op_s, double overhead_s,
                                  double noise_sd_s, const std::vector<double>& ns,
                                  double n_shots, double n_circ,
                                  std::uint64_t seed, double quantize_s) {
  if (ns.empty()) throw DomainError("empty N grid");
  if (noise_sd_s < 0.0 || quantize_s < 0.0)
    throw DomainError("noise_sd and quantize must be >= 0");
  LatencyDataset data;
  data.n_shots = n_shots;
  data.n_circ = n_circ;
  Rng rng(seed);
  for (double n : ns) {
    double t = overhead_s + n * per_op_s * n_shots * n_circ;
    if (noise_sd_s > 0.0) t += noise_sd_s * rng.gaussian();
    if (quantize_s > 0.0) t = std::round(t / quantize_s) * quantize_s;
    data.points.push_back({n, t});
  }
  return data;
}

LatencyDataset read_dataset_csv(const std::string& path, double n_shots,
                                double n_circ, double n_min) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dataset: " + path);
  LatencyDataset data;
  data.n_shots = n_shots;
  data.n_circ = n_circ;
  data.n_min = n_min;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (first) { // header line
      first = false;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw DomainError("malformed dataset row at line " + std::to_string(line_no));
    try {
      data.points.push_back({std::stod(a), std::stod(b)});
    } catch (const std::exception&) {
      throw DomainError("non-numeric dataset row at line " + std::to_string(line_no));
    }
  }
  if (data.points.empty()) throw InsufficientDataError("dataset has no rows");
  return data;
}

void write_dataset_csv(const std::string& path, const LatencyDataset& data) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write dataset: " + path);
  out << "N,T_total_seconds\n";
  char buf[64];
  for (const auto& [n, t] : data.points) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", n, t);
    out << buf;
  }
}

} // namespace qrec
