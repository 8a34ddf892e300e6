// qrec: bounds computations, protocol sweeps, fidelity curves, latency fits
#include <string>

#include <CLI11.hpp>

#include "qrec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"thermodynamic recycling simulator and bounds toolkit"};
  app.require_subcommand(1);

  qrec::RunManifest manifest;
  std::string seed_text;

  const char* names[] = {"bounds",      "sweep-theta", "sweep-px",
                         "fidelity",    "latency-fit", "bath-sweep"};
  const char* blurbs[] = {
      "erasure bounds for a configured bath and entropy change",
      "protocol sweep over the input-preparation angle",
      "protocol sweep over the target-system mixedness",
      "solution fidelity across the angle sweep",
      "per-operation time from amplified job-duration data",
      "protocol sweep over the bath frequency"};

  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", manifest.config_path, "key = value config file");
    sub->add_option("--out", manifest.out_path, "output path (default: stdout)");
    sub->add_option("--format", manifest.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed_text, "master seed (overrides the config)")
        ->check(CLI::Number);
    sub->add_option("--parallel", manifest.parallel, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    sub->callback([&, i] { manifest.command = names[i]; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qrec::exit_config_error;
  }

  if (!seed_text.empty()) manifest.seed = std::stoull(seed_text);
  return qrec::execute(manifest);
}
