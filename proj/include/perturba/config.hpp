#pragma once

// Plain-text key/value configuration:
//
//   # comment
//   mu_e = 9.28476412e-24
//   b_field = 1e-3
//
// Recognized keys: mu_e, delta_nu_h, planck_h, elementary_charge, b_field.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "perturba/hyperfine.hpp"

namespace perturba::config {

struct FileConfig {
  hyperfine::PhysicalConstants constants;
  std::optional<double> b_field;
};

/// Throws InvalidInput on unknown keys, malformed lines or bad numbers.
FileConfig parse(std::istream& in);

/// Throws IoFailure if the file cannot be read.
FileConfig load(const std::filesystem::path& path);

}  // namespace perturba::config
