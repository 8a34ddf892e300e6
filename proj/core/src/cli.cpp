#include "qrec/cli.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qrec/latency.hpp"
#include "qrec/units.hpp"
#include "qrec/version.hpp"

namespace qrec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError{"key '" + key + "' expects a number, got '" + v + "'", line};
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_double(key, trim(item), line));
  if (out.empty())
    throw ConfigError{"key '" + key + "' expects a comma-separated list", line};
  return out;
}

long parse_long(const std::string& key, const std::string& v, int line) {
  const double x = parse_double(key, v, line);
  if (x != std::floor(x) || std::abs(x) > 9e18)
    throw ConfigError{"key '" + key + "' expects an integer, got '" + v + "'", line};
  return static_cast<long>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v, int line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError{"key '" + key + "' expects an unsigned integer, got '" + v + "'", line};
  return std::strtoull(v.c_str(), nullptr, 10);
}

bool parse_onoff(const std::string& key, const std::string& v, int line) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw ConfigError{"key '" + key + "' expects on|off, got '" + v + "'", line};
}

std::string parse_choice(const std::string& key, const std::string& v,
                         const std::vector<std::string>& allowed, int line) {
  for (const auto& a : allowed)
    if (v == a) return v;
  std::string msg = "key '" + key + "' expects one of {";
  for (std::size_t i = 0; i < allowed.size(); ++i)
    msg += (i ? ", " : "") + allowed[i];
  throw ConfigError{msg + "}, got '" + v + "'", line};
}

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// numbers enter JSON re-parsed from the CSV's 9-digit form so the two
// formats round-trip exactly
double json_num(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

} // namespace

CliConfig CliConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError{"cannot open config: " + path, 0};
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

CliConfig CliConfig::parse_text(const std::string& text) {
  CliConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError{"expected key = value", line};
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError{"empty key", line};
    if (!seen.insert(key).second)
      throw ConfigError{"duplicate key '" + key + "'", line};

    if (key == "theta_b") cfg.theta_b = parse_double(key, val, line);
    else if (key == "theta_b_list") cfg.theta_b_list = parse_list(key, val, line);
    else if (key == "px") cfg.px = parse_double(key, val, line);
    else if (key == "px_list") cfg.px_list = parse_list(key, val, line);
    else if (key == "bath_freq_ghz") cfg.bath_freq_ghz = parse_double(key, val, line);
    else if (key == "bath_freq_ghz_list") cfg.bath_freq_ghz_list = parse_list(key, val, line);
    else if (key == "bath_t0_mk") cfg.bath_t0_mk = parse_double(key, val, line);
    else if (key == "t1_us") cfg.t1_us = parse_double(key, val, line);
    else if (key == "latency_us") cfg.latency_us = parse_double(key, val, line);
    else if (key == "algo_us") cfg.algo_us = parse_double(key, val, line);
    else if (key == "p1") cfg.p1 = parse_double(key, val, line);
    else if (key == "p2") cfg.p2 = parse_double(key, val, line);
    else if (key == "comp_init_excitation")
      cfg.comp_init_excitation = parse_double(key, val, line);
    else if (key == "angle_mode")
      cfg.angle_mode = parse_choice(key, val, {"exact", "simplified"}, line);
    else if (key == "rotation_c") cfg.rotation_c = parse_double(key, val, line);
    else if (key == "noise") cfg.noise = parse_onoff(key, val, line);
    else if (key == "shots") cfg.shots = parse_long(key, val, line);
    else if (key == "trials") cfg.trials = parse_long(key, val, line);
    else if (key == "success_outcome")
      cfg.success_outcome = static_cast<int>(parse_long(key, val, line));
    else if (key == "protocol")
      cfg.protocol = parse_choice(key, val, {"recycling", "reference"}, line);
    else if (key == "seed") cfg.seed = parse_u64(key, val, line);
    else if (key == "units") cfg.units = parse_choice(key, val, {"kbt0", "zj"}, line);
    else if (key == "delta_s_nats") cfg.delta_s_nats = parse_double(key, val, line);
    else if (key == "e_ath_eps") cfg.e_ath_eps = parse_double(key, val, line);
    else if (key == "s_ath_nats") cfg.s_ath_nats = parse_double(key, val, line);
    else if (key == "lat_dataset") cfg.lat_dataset = val;
    else if (key == "lat_per_op_ns") cfg.lat_per_op_ns = parse_double(key, val, line);
    else if (key == "lat_overhead_s") cfg.lat_overhead_s = parse_double(key, val, line);
    else if (key == "lat_noise_sd_s") cfg.lat_noise_sd_s = parse_double(key, val, line);
    else if (key == "lat_n_list") cfg.lat_n_list = parse_list(key, val, line);
    else if (key == "lat_n_shots") cfg.lat_n_shots = parse_double(key, val, line);
    else if (key == "lat_n_circ") cfg.lat_n_circ = parse_double(key, val, line);
    else if (key == "lat_n_min") cfg.lat_n_min = parse_double(key, val, line);
    else if (key == "lat_quantize_s") cfg.lat_quantize_s = parse_double(key, val, line);
    else throw ConfigError{"unknown key '" + key + "'", line};

    cfg.entries.push_back({key, val});
  }
  return cfg;
}

namespace {

struct UnitScheme {
  bool zepto = false; // false: heats in k_B*T0, true: zeptojoules
  double t0_mk = 43.0;

  std::string heat_suffix() const { return zepto ? "zJ" : "kBT0"; }
  // converts a heat given in gap units, for a bath at freq_ghz
  double heat_factor(double freq_ghz, double t0_gap) const {
    if (!zepto) return 1.0 / t0_gap;
    return units::gap_joule(freq_ghz) / 1e-21;
  }
};

std::string flag_string(const ProtocolFlags& f, const std::string& extra) {
  std::string s = extra;
  auto add = [&](bool set, const char* name) {
    if (!set) return;
    if (!s.empty()) s += ';';
    s += name;
  };
  add(f.degenerate_branch, "degenerate_branch");
  add(f.erasure_failed, "erasure_failed");
  add(f.tight_infeasible, "tight_infeasible");
  add(f.qath_infeasible, "qath_infeasible");
  return s;
}

std::vector<std::string> column_names(const UnitScheme& u) {
  const std::string h = u.heat_suffix();
  return {"theta_b",          "p_x",
          "trial",            "p_fail",
          "dS_nats",          "dQ_" + h,
          "qL_" + h,          "qtight_" + h + "_or_INF",
          "qath_" + h,        "gain_" + h + "_or_INF",
          "fidelity",         "flags"};
}

// the 12 cells of one row; nullopt renders empty in CSV and null in JSON
struct Cells {
  std::array<std::optional<std::string>, 12> text; // pre-formatted values
  std::array<bool, 12> numeric{};                  // JSON: emit as number
};

Cells row_cells(const SweepRow& row, double freq_ghz, double t0_gap,
                const UnitScheme& units_in, bool tag_freq) {
  const double hf = units_in.heat_factor(freq_ghz, t0_gap);
  Cells c;
  auto put = [&](int i, double v) {
    c.text[i] = fmt9(v);
    c.numeric[i] = true;
  };
  put(0, row.theta_b);
  put(1, row.p_x);
  if (row.trial == -1)
    c.text[2] = "median";
  else {
    c.text[2] = std::to_string(row.trial);
    c.numeric[2] = true;
  }
  if (row.p_fail) put(3, *row.p_fail);
  if (row.ds) put(4, *row.ds);
  if (row.dq) put(5, *row.dq * hf);
  if (row.ql) put(6, *row.ql * hf);
  if (row.inf_qtight)
    c.text[7] = "INF";
  else if (row.qtight)
    put(7, *row.qtight * hf);
  if (row.qath) put(8, *row.qath * hf);
  if (row.inf_gain)
    c.text[9] = "INF";
  else if (row.gain)
    put(9, *row.gain * hf);
  if (row.fidelity) put(10, *row.fidelity);
  c.text[11] = flag_string(row.flags, tag_freq ? "freq_ghz=" + fmt9(freq_ghz) : "");
  return c;
}

std::string csv_table(const std::vector<std::string>& names,
                      const std::vector<Cells>& rows) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i)
    out += (i ? "," : "") + names[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.text.size(); ++i) {
      if (i) out += ',';
      if (r.text[i]) out += *r.text[i];
    }
    out += '\n';
  }
  return out;
}

ordered_json json_header(const RunManifest& m, const CliConfig& cfg,
                         std::uint64_t seed) {
  ordered_json doc;
  doc["command"] = m.command;
  doc["version"] = version_string;
  doc["seed"] = seed;
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : cfg.entries) echo[k] = v;
  doc["config"] = echo;
  return doc;
}

ordered_json json_rows(const std::vector<std::string>& names,
                       const std::vector<Cells>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!r.text[i])
        obj[names[i]] = nullptr;
      else if (i == 2 && r.numeric[i]) // trial index
        obj[names[i]] = std::strtol(r.text[i]->c_str(), nullptr, 10);
      else if (r.numeric[i])
        obj[names[i]] = json_num(std::strtod(r.text[i]->c_str(), nullptr));
      else
        obj[names[i]] = *r.text[i];
    }
    arr.push_back(obj);
  }
  return arr;
}

int write_artifact(const RunManifest& m, const std::string& payload) {
  if (m.out_path.empty()) {
    std::cout << payload;
    return exit_ok;
  }
  std::ofstream out(m.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write output: " << m.out_path << "\n";
    return exit_io_error;
  }
  out << payload;
  if (!out.good()) {
    std::cerr << "error: write failed: " << m.out_path << "\n";
    return exit_io_error;
  }
  return exit_ok;
}

ProtocolConfig make_protocol_config(const CliConfig& c, std::uint64_t seed) {
  ProtocolConfig cfg;
  const double f = c.bath_freq_ghz.value_or(5.0);
  cfg.bath_t0_mk = c.bath_t0_mk.value_or(43.0);
  cfg.bath = BathSpec::qubit(1.0, 1.0 / units::gap_over_kt(f, cfg.bath_t0_mk));
  if (c.theta_b) cfg.theta_b = *c.theta_b;
  if (c.px) cfg.p_x = *c.px;
  if (c.t1_us) cfg.noise.t1_us = *c.t1_us;
  if (c.latency_us) cfg.noise.latency_ff_us = *c.latency_us;
  if (c.algo_us) cfg.noise.duration_algo_us = *c.algo_us;
  if (c.p1) cfg.noise.p1 = *c.p1;
  if (c.p2) cfg.noise.p2 = *c.p2;
  if (c.comp_init_excitation) cfg.noise.comp_init_excitation = *c.comp_init_excitation;
  if (c.noise) cfg.noise.enabled = *c.noise;
  if (c.angle_mode)
    cfg.hhl.angle_mode =
        *c.angle_mode == "exact" ? AngleMode::Exact : AngleMode::Simplified;
  if (c.rotation_c) cfg.hhl.c = *c.rotation_c;
  if (c.success_outcome) cfg.hhl.success_outcome = *c.success_outcome;
  if (c.shots) cfg.shots_per_basis = static_cast<int>(*c.shots);
  if (c.trials) cfg.trials = static_cast<int>(*c.trials);
  cfg.seed = seed;
  return cfg;
}

std::vector<double> default_theta_grid() {
  std::vector<double> v;
  const double pi4 = std::acos(-1.0) / 4.0;
  for (int i = 0; i <= 16; ++i) v.push_back(pi4 * i / 16.0);
  return v;
}

std::vector<double> default_px_grid() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(0.05 * i);
  return v;
}

int run_sweep_command(const RunManifest& m, const CliConfig& c, std::uint64_t seed) {
  const ProtocolConfig base = make_protocol_config(c, seed);
  const ProtocolKind kind = c.protocol.value_or("recycling") == "reference"
                                ? ProtocolKind::Reference
                                : ProtocolKind::Recycling;
  SweepAxis axis;
  std::vector<double> values;
  if (m.command == "sweep-px") {
    axis = SweepAxis::Px;
    values = c.px_list.value_or(default_px_grid());
  } else if (m.command == "bath-sweep") {
    axis = SweepAxis::BathFreqGhz;
    values = c.bath_freq_ghz_list.value_or(std::vector<double>{3, 4, 5, 6, 7});
  } else { // sweep-theta and fidelity
    axis = SweepAxis::ThetaB;
    values = c.theta_b_list.value_or(default_theta_grid());
  }

  const ResultTable table = sweep(base, kind, axis, values, m.parallel);

  UnitScheme un;
  un.zepto = c.units.value_or("kbt0") == "zj";
  un.t0_mk = base.bath_t0_mk;
  const double base_freq = c.bath_freq_ghz.value_or(5.0);

  std::vector<Cells> cells;
  int usable = 0;
  for (const auto& row : table.rows) {
    const double f = axis == SweepAxis::BathFreqGhz ? row.axis_value : base_freq;
    const double t0 =
        axis == SweepAxis::BathFreqGhz
            ? 1.0 / units::gap_over_kt(row.axis_value, base.bath_t0_mk)
            : base.bath.t0;
    cells.push_back(row_cells(row, f, t0, un, axis == SweepAxis::BathFreqGhz));
    if (row.trial != -1 && !row.flags.degenerate_branch &&
        (row.qtight.has_value() || row.qath.has_value()))
      ++usable;
  }

  const auto names = column_names(un);
  std::string payload;
  if (m.format == "json") {
    ordered_json doc = json_header(m, c, seed);
    doc["rows"] = json_rows(names, cells);
    payload = doc.dump(2) + "\n";
  } else {
    payload = csv_table(names, cells);
  }
  const int rc = write_artifact(m, payload);
  if (rc != exit_ok) return rc;
  return usable > 0 ? exit_ok : exit_infeasible;
}

int run_bounds_command(const RunManifest& m, const CliConfig& c, std::uint64_t seed) {
  const double f = c.bath_freq_ghz.value_or(5.0);
  const double t0_mk = c.bath_t0_mk.value_or(43.0);
  const BathSpec bath = BathSpec::qubit(1.0, 1.0 / units::gap_over_kt(f, t0_mk));
  const double ds = c.delta_s_nats.value_or(0.5);
  if (ds < 0.0) throw ConfigError{"key 'delta_s_nats' must be >= 0", 0};
  if (c.e_ath_eps.has_value() != c.s_ath_nats.has_value())
    throw ConfigError{"keys 'e_ath_eps' and 's_ath_nats' must be given together", 0};

  std::optional<AthermalSummary> ath;
  if (c.e_ath_eps) {
    ath = AthermalSummary{*c.e_ath_eps, *c.s_ath_nats};
    try {
      ath->validate(bath);
    } catch (const DomainError& e) {
      throw ConfigError{std::string("athermal summary: ") + e.what(), 0};
    }
  }

  const GibbsPoint base = gibbs_ensemble(bath, bath.t0);
  const AthermalSummary eff = ath.value_or(AthermalSummary{base.e, base.s});

  SweepRow row; // reuse the table schema; protocol columns stay empty
  row.trial = 1;
  row.ds = ds;
  row.ql = bath.t0 * ds;
  const double lnd = bath.ln_dim();
  const double arg0 = base.s + ds;
  if (arg0 < lnd - 1e-12)
    row.qtight = invert_entropy_closed(bath, arg0).e - base.e;
  else {
    row.inf_qtight = true;
    row.flags.tight_infeasible = true;
  }
  const double arg_a = eff.s_ath + ds;
  if (arg_a < lnd - 1e-12) {
    const double e_final = invert_entropy_closed(bath, arg_a).e;
    row.qath = e_final - eff.e_ath;
    if (row.qtight)
      row.gain = (eff.e_ath - base.e) - (e_final - invert_entropy_closed(bath, arg0).e);
    else
      row.inf_gain = true;
  } else {
    row.flags.qath_infeasible = true;
    row.inf_gain = true;
  }

  UnitScheme un;
  un.zepto = c.units.value_or("kbt0") == "zj";
  un.t0_mk = t0_mk;
  // theta_b/p_x carry no meaning here; blank them after formatting
  Cells cells = row_cells(row, f, bath.t0, un, false);
  cells.text[0].reset();
  cells.text[1].reset();
  cells.text[3].reset();

  const auto names = column_names(un);
  std::string payload;
  if (m.format == "json") {
    ordered_json doc = json_header(m, c, seed);
    doc["rows"] = json_rows(names, {cells});
    payload = doc.dump(2) + "\n";
  } else {
    payload = csv_table(names, {cells});
  }
  const int rc = write_artifact(m, payload);
  if (rc != exit_ok) return rc;
  return row.qtight || row.qath ? exit_ok : exit_infeasible;
}

int run_latency_command(const RunManifest& m, const CliConfig& c, std::uint64_t seed) {
  LatencyDataset data;
  if (c.lat_dataset) {
    data = read_dataset_csv(*c.lat_dataset, c.lat_n_shots.value_or(1e4),
                            c.lat_n_circ.value_or(10.0), c.lat_n_min.value_or(2000.0));
  } else {
    std::vector<double> ns;
    if (c.lat_n_list)
      ns = *c.lat_n_list;
    else
      for (double n = 2250; n <= 10000; n += 250) ns.push_back(n);
    data = synthesize_dataset(c.lat_per_op_ns.value_or(31.3) * 1e-9,
                              c.lat_overhead_s.value_or(2.0),
                              c.lat_noise_sd_s.value_or(0.0), ns,
                              c.lat_n_shots.value_or(1e4), c.lat_n_circ.value_or(10.0),
                              seed, c.lat_quantize_s.value_or(1.0));
    data.n_min = c.lat_n_min.value_or(2000.0);
  }

  LatencyFit fit;
  try {
    fit = fit_gate_time(data);
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_infeasible;
  }

  std::string payload;
  if (m.format == "json") {
    ordered_json doc = json_header(m, c, seed);
    ordered_json jf;
    jf["per_op_s"] = json_num(fit.per_op);
    jf["slope_s_per_N"] = json_num(fit.slope);
    jf["intercept_s"] = json_num(fit.intercept);
    jf["r_squared"] = json_num(fit.r_squared);
    jf["n_used"] = fit.n_used;
    jf["unphysical"] = fit.unphysical;
    doc["fit"] = jf;
    doc["dataset_points"] = data.points.size();
    payload = doc.dump(2) + "\n";
  } else {
    payload = "per_op_s,slope_s_per_N,intercept_s,r_squared,n_used,unphysical\n";
    payload += fmt9(fit.per_op) + "," + fmt9(fit.slope) + "," + fmt9(fit.intercept) +
               "," + fmt9(fit.r_squared) + "," + std::to_string(fit.n_used) + "," +
               (fit.unphysical ? "1" : "0") + "\n";
  }
  return write_artifact(m, payload);
}

} // namespace

int execute(const RunManifest& manifest) {
  try {
    CliConfig cfg;
    if (!manifest.config_path.empty())
      cfg = CliConfig::parse_file(manifest.config_path);
    const std::uint64_t seed =
        manifest.seed ? *manifest.seed : cfg.seed.value_or(0);

    if (manifest.format != "csv" && manifest.format != "json") {
      std::cerr << "config error: unknown format '" << manifest.format << "'\n";
      return exit_config_error;
    }

    if (manifest.command == "bounds")
      return run_bounds_command(manifest, cfg, seed);
    if (manifest.command == "latency-fit")
      return run_latency_command(manifest, cfg, seed);
    if (manifest.command == "sweep-theta" || manifest.command == "sweep-px" ||
        manifest.command == "fidelity" || manifest.command == "bath-sweep")
      return run_sweep_command(manifest, cfg, seed);

    std::cerr << "config error: unknown command '" << manifest.command << "'\n";
    return exit_config_error;
  } catch (const ConfigError& e) {
    if (e.line > 0)
      std::cerr << "config error (line " << e.line << "): " << e.message << "\n";
    else
      std::cerr << "config error: " << e.message << "\n";
    return exit_config_error;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io_error;
  }
}

} // namespace qrec
