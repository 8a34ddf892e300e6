#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrec/protocol.hpp"

namespace qrec {

// config parse failure; rendered as "config error (line N): message", exit 2
struct ConfigError {
  std::string message;
  int line = 0;
};

// Flat key=value configuration ('#' comments). Unknown and duplicate keys
// are rejected with the offending key named. All keys optional.
struct CliConfig {
  // protocol parameters
  std::optional<double> theta_b;
  std::optional<std::vector<double>> theta_b_list;
  std::optional<double> px;
  std::optional<std::vector<double>> px_list;
  std::optional<double> bath_freq_ghz;
  std::optional<std::vector<double>> bath_freq_ghz_list;
  std::optional<double> bath_t0_mk;
  std::optional<double> t1_us;
  std::optional<double> latency_us;
  std::optional<double> algo_us;
  std::optional<double> p1;
  std::optional<double> p2;
  std::optional<double> comp_init_excitation; // absent = auto
  std::optional<std::string> angle_mode;      // exact | simplified
  std::optional<double> rotation_c;
  std::optional<bool> noise; // on | off
  std::optional<long> shots;
  std::optional<long> trials;
  std::optional<int> success_outcome;
  std::optional<std::string> protocol; // recycling | reference
  std::optional<std::uint64_t> seed;
  std::optional<std::string> units; // kbt0 | zj

  // bounds command inputs
  std::optional<double> delta_s_nats;
  std::optional<double> e_ath_eps; // athermal summary, energy in gap units
  std::optional<double> s_ath_nats;

  // latency-fit command inputs
  std::optional<std::string> lat_dataset; // CSV path; absent = synthesize
  std::optional<double> lat_per_op_ns;
  std::optional<double> lat_overhead_s;
  std::optional<double> lat_noise_sd_s;
  std::optional<std::vector<double>> lat_n_list;
  std::optional<double> lat_n_shots;
  std::optional<double> lat_n_circ;
  std::optional<double> lat_n_min;
  std::optional<double> lat_quantize_s;

  // raw key=value pairs in file order, for the JSON config echo
  std::vector<std::pair<std::string, std::string>> entries;

  static CliConfig parse_file(const std::string& path); // throws ConfigError
  static CliConfig parse_text(const std::string& text); // throws ConfigError
};

struct RunManifest {
  std::string command; // bounds | sweep-theta | sweep-px | fidelity | latency-fit | bath-sweep
  std::string config_path; // empty = all defaults
  std::string out_path;    // empty = stdout
  std::string format = "csv"; // csv | json
  std::optional<std::uint64_t> seed; // overrides config key
  int parallel = 1;
};

// exit codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_io_error = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_infeasible = 3;

// run a command end to end; writes the artifact file, reports errors on
// stderr, and returns the process exit code
int execute(const RunManifest& manifest);

} // namespace qrec
