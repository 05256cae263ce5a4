#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ksg/collision.hpp"
#include "ksg/config.hpp"
#include "ksg/solver.hpp"

namespace ksg::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2, kExitThreshold = 3 };

/// Largest N the oracle subcommand accepts; the direct quadrature is O(N^2) points x O(Q^3).
inline constexpr int kOracleMaxN = 6;

/// Builds (or loads) the weight table for the configured grid; returns the cache file.
std::filesystem::path cmd_precompute_weights(const Config& config, const std::filesystem::path& out_dir,
                                             std::ostream& log);

struct SweepRow {
  int resolution = 0;  ///< N or K
  std::optional<double> err;
  std::optional<double> neg;
  std::string status = "ok";
  double seconds = 0.0;
};

/// One run per N at fixed K; per-run outputs go to out_dir/N<n> and the table to out_dir/converge_n.csv.
std::vector<SweepRow> cmd_converge_n(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);

/// One run per K at fixed N; the exact reference is projected with order max(K) + 4 so the error
/// includes the gPC truncation of the solution.
std::vector<SweepRow> cmd_converge_k(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);

/// CSV of a sweep. Wall-clock time is logged but kept out of the table so reruns are byte-identical.
std::string sweep_csv(const std::string& label, const std::vector<SweepRow>& rows, bool with_neg);

solver::InitialReport cmd_validate_ic(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool passed() const;
};

/// ||d_t f - Q^R(f, f)|| in L2_v L2_z on `grid` for the exact BKW profile at absolute time t.
double bkw_residual(const velocity::VelocityGrid& grid, const gpc::Basis& basis, const kernel::KernelModel& kernel,
                    double t, collision::OracleQuadrature quad);

/// Relative coefficient-L2 distance between the Galerkin right-hand side and the projected oracle.
double rhs_oracle_distance(const velocity::SpectralField& field, const gpc::Basis& basis,
                           const kernel::KernelModel& kernel, collision::CollisionWorkspace& ws,
                           collision::OracleQuadrature quad);

/// Spectral-vs-oracle agreement on the projected initial data and the BKW residual at t = 1.
OracleReport cmd_oracle_check(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace ksg::cli
