// perturba: time and field sweeps of the exact, improved and traditional
// phi2 -> phi4 transition curves of the hydrogen hyperfine problem.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "perturba/config.hpp"
#include "perturba/hyperfine.hpp"
#include "perturba/perturb.hpp"
#include "perturba/sweep.hpp"

namespace {

using namespace perturba;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void print_summary(const hyperfine::HyperfineConfig& cfg, std::ostream& out) {
  namespace hf = hyperfine;
  const auto& k = cfg.constants;
  const auto exact = hf::exact_eigensystem_closed_form<double>(cfg);
  const auto spectrum = improved_energies(redivide(hf::build_problem<double>(cfg)));
  const auto args = hf::phase_arguments<double>(cfg, 1.0);
  out << "W_eV," << sweep::format_number(k.w_ev()) << '\n'
      << "hbar_eVs," << sweep::format_number(k.hbar_evs()) << '\n'
      << "mu_e_eV_per_T," << sweep::format_number(k.mu_e_ev_per_tesla()) << '\n'
      << "b_field_T," << sweep::format_number(cfg.b_field) << '\n'
      << "perturbative," << (cfg.perturbative() ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < 4; ++i) {
    out << "level_" << i + 1 << ",exact=" << sweep::format_number(exact.energies[i])
        << ",improved=" << sweep::format_number(spectrum.energies[i]) << '\n';
  }
  out << "rate_exact_per_s," << sweep::format_number(args.exact) << '\n'
      << "rate_improved_per_s," << sweep::format_number(args.improved) << '\n'
      << "rate_traditional_per_s," << sweep::format_number(args.traditional) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact, improved and traditional transition curves for hydrogen hyperfine levels in a field"};
  app.option_defaults()->always_capture_default();

  std::string config_path;
  std::string mode_name = "time";
  std::optional<double> fixed;
  std::optional<double> start;
  std::optional<double> stop;
  std::size_t samples = 2001;
  std::string scale_name = "linear";
  std::optional<double> threshold;
  std::string out_path;
  int window = 1;
  bool summary = false;

  app.add_option("--config", config_path, "Key/value config file (default: $PERTURBA_CONFIG)");
  app.add_option("--mode", mode_name, "Sweep variable")->check(CLI::IsMember({"time", "field"}));
  app.add_option("--fixed", fixed, "B in T for time sweeps, t in s for field sweeps");
  app.add_option("--start", start, "First abscissa");
  app.add_option("--stop", stop, "Last abscissa");
  app.add_option("--samples", samples, "Number of grid points");
  app.add_option("--scale", scale_name, "Grid spacing")->check(CLI::IsMember({"linear", "log"}));
  app.add_option("--window", window, "Preset window 1-4 used when --start/--stop are omitted")
      ->check(CLI::Range(1, 4));
  app.add_option("--threshold", threshold, "Report first grid points where deviations exceed this value");
  app.add_option("--out", out_path, "CSV destination (default: stdout)");
  app.add_flag("--summary", summary, "Print constants, energies and phase rates instead of a sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("PERTURBA_CONFIG")) config_path = env;
    }
    config::FileConfig file;
    if (!config_path.empty()) file = config::load(config_path);

    const auto mode = mode_name == "time" ? sweep::Mode::Time : sweep::Mode::Field;
    double fixed_value = 0.0;
    if (fixed) {
      fixed_value = *fixed;
    } else if (mode == sweep::Mode::Time) {
      fixed_value = file.b_field.value_or(1e-3);
    } else {
      fixed_value = 1.0;
    }

    if (summary) {
      hyperfine::HyperfineConfig cfg{file.constants, mode == sweep::Mode::Time ? fixed_value : file.b_field.value_or(1e-3)};
      cfg.validate();
      print_summary(cfg, std::cout);
      return 0;
    }

    sweep::SweepSpec spec;
    if (start || stop) {
      if (!start || !stop) throw InvalidSpec("--start and --stop must be given together");
      spec.mode = mode;
      spec.fixed_value = fixed_value;
      spec.start = *start;
      spec.stop = *stop;
      spec.samples = samples;
    } else {
      spec = sweep::default_window(mode, window, fixed_value, file.constants, samples);
    }
    spec.scale = scale_name == "log" ? sweep::Scale::Log : sweep::Scale::Linear;
    spec.validate();

    if (threshold) {
      const auto report = sweep::divergence_report(spec, file.constants, *threshold);
      std::cout << "t_traditional," << sweep::format_number(report.t_traditional) << '\n'
                << "t_improved," << sweep::format_number(report.t_improved) << '\n';
      if (out_path.empty()) return 0;
    }

    const auto rows = sweep::run_sweep(spec, file.constants);
    if (out_path.empty()) {
      sweep::emit_csv(rows, std::cout);
    } else {
      sweep::emit_csv(rows, std::filesystem::path(out_path));
    }
    return 0;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
