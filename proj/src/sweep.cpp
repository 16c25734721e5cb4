#include "perturba/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace perturba::sweep {

void SweepSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) throw InvalidSpec("sweep bounds must be finite");
  if (!(start < stop)) throw InvalidSpec("sweep start must be below stop");
  if (samples < 2) throw InvalidSpec("a sweep needs at least two samples");
  if (scale == Scale::Log && !(start > 0.0)) throw InvalidSpec("log scale requires a positive start");
  if (!std::isfinite(fixed_value)) throw InvalidSpec("fixed value must be finite");
  if (mode == Mode::Time && fixed_value < 0.0) throw InvalidSpec("magnetic field must be non-negative");
  if (mode == Mode::Field && start < 0.0) throw InvalidSpec("magnetic field must be non-negative");
}

double SweepSpec::abscissa(std::size_t i) const {
  if (i == 0) return start;
  if (i + 1 == samples) return stop;
  // Extended intermediates keep interior points within an ulp of the ideal grid.
  const long double f = static_cast<long double>(i) / static_cast<long double>(samples - 1);
  const long double a = start, b = stop;
  if (scale == Scale::Linear) return static_cast<double>(a + (b - a) * f);
  return static_cast<double>(std::exp(std::log(a) + (std::log(b) - std::log(a)) * f));
}

SweepRow evaluate_row(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants, double x) {
  hyperfine::HyperfineConfig cfg{constants, spec.mode == Mode::Time ? spec.fixed_value : x};
  const double t = spec.mode == Mode::Time ? x : spec.fixed_value;
  const auto p = hyperfine::normalized_probabilities<double>(cfg, t);
  return {x,
          p.p_exact,
          p.p_improved,
          p.p_traditional,
          std::abs(p.p_improved - p.p_exact),
          std::abs(p.p_traditional - p.p_exact)};
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants) {
  spec.validate();
  constants.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) rows.push_back(evaluate_row(spec, constants, spec.abscissa(i)));
  return rows;
}

DivergenceReport divergence_report(const SweepSpec& spec, const hyperfine::PhysicalConstants& constants,
                                   double threshold) {
  spec.validate();
  constants.validate();
  if (spec.mode != Mode::Time) throw InvalidSpec("divergence report requires a time sweep");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw InvalidSpec("threshold must be positive and finite");
  constexpr double inf = std::numeric_limits<double>::infinity();
  DivergenceReport report{inf, inf};
  // Streams the grid; a full 3e6-point sweep is never materialized.
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const double x = spec.abscissa(i);
    const SweepRow row = evaluate_row(spec, constants, x);
    if (report.t_traditional == inf && row.d_traditional > threshold) report.t_traditional = x;
    if (report.t_improved == inf && row.d_improved > threshold) report.t_improved = x;
    if (report.t_traditional != inf && report.t_improved != inf) break;
  }
  return report;
}

SweepSpec default_window(Mode mode, int window, double fixed_value, const hyperfine::PhysicalConstants& constants,
                         std::size_t samples) {
  if (window < 1 || window > 4) throw InvalidSpec("window must be 1..4");
  constants.validate();
  const double w = constants.w_ev();
  const double mu = constants.mu_e_ev_per_tesla();
  const double hbar = constants.hbar_evs();
  constexpr double periods = 3.0;

  SweepSpec spec;
  spec.mode = mode;
  spec.fixed_value = fixed_value;
  spec.samples = samples;
  spec.scale = Scale::Linear;
  if (mode == Mode::Time) {
    const double centre = kTimeWindowCentres[window - 1];
    const double x = mu * fixed_value;
    // sin^2 has period pi in its argument.
    const double rate = std::sqrt(4.0 * w * w + x * x) / hbar;
    const double half = 0.5 * periods * std::numbers::pi / rate;
    spec.start = centre - half;
    spec.stop = centre + half;
  } else {
    const double centre = kFieldWindowCentres[window - 1];
    // d/dB of sqrt(4W^2 + (mu B)^2) t / hbar, evaluated at the centre.
    const double root = std::sqrt(4.0 * w * w + mu * mu * centre * centre);
    const double slope = fixed_value * mu * mu * centre / (hbar * root);
    if (!(slope > 0.0)) throw InvalidSpec("field window needs a positive time");
    const double half = 0.5 * periods * std::numbers::pi / slope;
    spec.start = std::max(0.0, centre - half);
    spec.stop = centre + half;
  }
  spec.validate();
  return spec;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::size_t emit_csv(std::span<const SweepRow> rows, std::ostream& out) {
  if (rows.empty()) throw InvalidInput("no rows to write");
  std::string text = kCsvHeader;
  text += '\n';
  for (const auto& r : rows) {
    for (double v : {r.x, r.p_exact, r.p_improved, r.p_traditional, r.d_improved}) {
      text += format_number(v);
      text += ',';
    }
    text += format_number(r.d_traditional);
    text += '\n';
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoFailure("failed to write CSV output");
  return text.size();
}

std::size_t emit_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination) {
  if (rows.empty()) throw InvalidInput("no rows to write");
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + destination.string() + " for writing");
  const std::size_t n = emit_csv(rows, out);
  out.close();
  if (!out) throw IoFailure("failed to write " + destination.string());
  return n;
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw InvalidInput("missing or unexpected CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    double v[6];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 6; ++k) {
      const auto res = std::from_chars(p, end, v[k]);
      if (res.ec != std::errc()) throw InvalidInput("malformed CSV number: " + line);
      p = res.ptr;
      if (k < 5) {
        if (p == end || *p != ',') throw InvalidInput("malformed CSV row: " + line);
        ++p;
      }
    }
    if (p != end) throw InvalidInput("trailing data in CSV row: " + line);
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return rows;
}

}  // namespace perturba::sweep
