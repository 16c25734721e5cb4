#include "perturba/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

namespace perturba::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InvalidInput("line " + std::to_string(line_no) + ": not a number: " + std::string(text));
  return v;
}

}  // namespace

FileConfig parse(std::istream& in) {
  FileConfig cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const double value = parse_number(trim(line.substr(eq + 1)), line_no);
    if (key == "mu_e") {
      cfg.constants.mu_e = value;
    } else if (key == "delta_nu_h") {
      cfg.constants.delta_nu_h = value;
    } else if (key == "planck_h") {
      cfg.constants.planck_h = value;
    } else if (key == "elementary_charge") {
      cfg.constants.elementary_charge = value;
    } else if (key == "b_field") {
      cfg.b_field = value;
    } else {
      throw InvalidInput("line " + std::to_string(line_no) + ": unknown key " + std::string(key));
    }
  }
  cfg.constants.validate();
  if (cfg.b_field && (!std::isfinite(*cfg.b_field) || *cfg.b_field < 0.0))
    throw InvalidInput("b_field must be finite and non-negative");
  return cfg;
}

FileConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read config file " + path.string());
  return parse(in);
}

}  // namespace perturba::config
