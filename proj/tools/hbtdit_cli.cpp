// hbtdit: run one scenario and write its CSV (and optionally SVG) files.
//
//   hbtdit hbt --config run.json --out results --svg
//   hbtdit contrast --mode slice
//   hbtdit decohere --intervals 4
//   hbtdit dit --dry-run
//
// Exit codes: 0 ok, 2 invalid parameters, 3 quadrature did not converge,
// 4 I/O failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hbtdit/config.hpp"
#include "hbtdit/errors.hpp"
#include "hbtdit/scenarios.hpp"
#include "hbtdit/table.hpp"

namespace {

enum Exit { ok = 0, invalid = 2, no_convergence = 3, io_failure = 4 };

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  bool svg = false;
  std::optional<std::string> mode;
  bool exact_pairs = false;
  std::optional<double> mass_multiplier;
  bool dry_run = false;
  std::optional<double> slit_fs;
  std::optional<int> intervals;
};

hbtdit::ScenarioConfig resolve(const Overrides& o, const std::string& scenario) {
  hbtdit::ScenarioConfig c;
  if (!o.config_path.empty()) c = hbtdit::parse_config(hbtdit::read_text_file(o.config_path));
  c.scenario = scenario;
  if (o.out) c.output_dir = *o.out;
  if (o.svg) c.svg = true;
  if (o.mode) c.reduction = *o.mode;
  if (o.exact_pairs) c.exact_pairs = true;
  if (o.mass_multiplier) c.mass_multiplier = *o.mass_multiplier;
  if (o.slit_fs) c.slit_fs = *o.slit_fs;
  if (o.intervals) c.decohere_intervals = *o.intervals;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffraction in time and electron antibunching simulations"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_path, "JSON scenario configuration");
  app.add_option("--out", o.out, "Output directory");
  app.add_flag("--svg", o.svg, "Also write an SVG plot per CSV");
  app.add_option("--mode", o.mode, "Delay reduction")->check(CLI::IsMember({"marginal", "slice"}));
  app.add_flag("--exact-pairs", o.exact_pairs, "Average every interval pair instead of the representatives");
  app.add_option("--mass-multiplier", o.mass_multiplier, "Particle mass in electron masses")
      ->check(CLI::PositiveNumber);
  app.add_flag("--dry-run", o.dry_run, "Print the resolved configuration and exit");

  const std::pair<const char*, const char*> commands[] = {
      {"dit", "Single/double temporal slit patterns, first zeros, mass-2m comparison"},
      {"hbt", "Delay spectra for each pulse duration"},
      {"contrast", "Analytic and simulated HBT contrasts"},
      {"rates", "Reduced count rates and pulse statistics"},
      {"decohere", "Density matrices after tracing out the emitter"},
      {"error-table", "Far-field error of the representative incoherent pair"},
      {"energy-sweep", "Antibunching dip versus kinetic energy"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (std::string(name) == "dit") sub->add_option("--slit-fs", o.slit_fs, "Slit duration")->check(CLI::PositiveNumber);
    if (std::string(name) == "decohere")
      sub->add_option("--intervals", o.intervals, "Number of intervals N")->check(CLI::Range(3, 8));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid;
  }

  try {
    const auto config = resolve(o, app.get_subcommands().front()->get_name());
    if (o.dry_run) {
      std::cout << hbtdit::resolved_config_json(config, true) << '\n';
      return ok;
    }
    const auto result = hbtdit::run_scenario(config);
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return ok;
  } catch (const hbtdit::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid;
  } catch (const hbtdit::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return no_convergence;
  } catch (const hbtdit::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_failure;
  }
}
