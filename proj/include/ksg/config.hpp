#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ksg/common.hpp"
#include "ksg/solver.hpp"

namespace ksg::cli {

/// Malformed or invalid configuration; the message carries file:line:column or the key path.
class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

enum class SweepReference { Exact, Self };

struct SweepSpec {
  std::vector<int> n_list = {8, 16, 32};
  std::vector<int> k_list = {0, 1, 2, 3, 4};
  SweepReference reference = SweepReference::Exact;
};

struct Config {
  solver::RunConfig run;
  SweepSpec sweep;
};

/**
 * INI-style text with sections [grid], [kernel], [ic], [time], [output] and [sweep].
 * Lines are `key = value`; `#` and `;` start comments; lists are comma separated.
 * Overrides are `section.key=value` and replace file values before validation.
 * `source` names the text in error messages.
 */
Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                         const std::string& source = "<config>");

/// Reads `path`, applies overrides and validates the resulting run configuration.
Config parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

/// Human-readable summary including the derived R and L.
std::string describe(const solver::RunConfig& config);

}  // namespace ksg::cli
