#pragma once

// Time and field sweeps of the three normalized phi2 -> phi4 curves, deviation
// reports and CSV output.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "perturba/hyperfine.hpp"

namespace perturba::sweep {

enum class Mode { Time, Field };
enum class Scale { Linear, Log };

/// In time mode the abscissa is t (s) and fixed_value is B (T); in field mode
/// the abscissa is B (T) and fixed_value is t (s).
struct SweepSpec {
  Mode mode = Mode::Time;
  double fixed_value = 1e-3;
  double start = 0.0;
  double stop = 1.0;
  std::size_t samples = 2;
  Scale scale = Scale::Linear;

  /// Throws InvalidSpec on a malformed grid.
  void validate() const;
  /// Abscissa of grid point i.
  double abscissa(std::size_t i) const;
};

struct SweepRow {
  double x = 0.0;
  double p_exact = 0.0;
  double p_improved = 0.0;
  double p_traditional = 0.0;
  double d_improved = 0.0;
  double d_traditional = 0.0;
};

/// Row at abscissa x; the non-swept quantity comes from spec.fixed_value.
SweepRow evaluate_row(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants, double x);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants);

/// First grid abscissae where |p - pT| and |pI - pT| exceed the threshold,
/// scanning ascending; +infinity when never exceeded.
struct DivergenceReport {
  double t_traditional;
  double t_improved;
};

DivergenceReport divergence_report(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants,
                                   double threshold);

/// Windows centred on the scenarios of the published time and field comparisons,
/// three oscillation periods of the exact curve wide.
inline constexpr double kTimeWindowCentres[] = {1e-7, 1.0, 6.0, 27.7};
inline constexpr double kFieldWindowCentres[] = {1e-4, 1.29e-3, 1.21e-2, 0.036};

/// window is 1-based (1..4). fixed_value is B for time mode, t for field mode.
SweepSpec default_window(Mode mode, int window, double fixed_value, const hyperfine::PhysicalConstants& constants,
                         std::size_t samples);

inline constexpr const char* kCsvHeader = "x,p_exact,p_improved,p_traditional,dev_improved,dev_traditional";

/// Writes the header and one line per row; 17 significant digits, '\n' endings.
/// Returns the number of bytes written. Throws InvalidInput on empty rows.
std::size_t emit_csv(std::span<const SweepRow> rows, std::ostream& out);

/// File variant: nothing is created when rows is empty; IoFailure on write errors.
std::size_t emit_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination);

/// Parses output of emit_csv. Throws InvalidInput on malformed content.
std::vector<SweepRow> parse_csv(std::istream& in);

std::string format_number(double v);

}  // namespace perturba::sweep
