#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ksg/collision.hpp"
#include "ksg/diagnostics.hpp"
#include "ksg/gpc.hpp"
#include "ksg/initial.hpp"
#include "ksg/kernel.hpp"
#include "ksg/velocity.hpp"
#include "ksg/weights.hpp"

namespace ksg::solver {

enum class Integrator { Euler, RK4 };

/// Any coefficient larger than this aborts the run.
inline constexpr double kBlowUpThreshold = 1e12;

struct KernelSpec {
  double gamma = 0.0;
  std::vector<double> b = {1.0};
  double angular_constant = kernel::KernelModel::kDefaultAngularConstant;
};

struct InitialSpec {
  initial::Family family = initial::Family::Bkw;
  double t0 = 0.0;
  initial::Affine density{1.0, 0.0};
  initial::Affine temperature{1.0, 0.0};
  double shift1 = 0.0;
  double shift2 = 0.0;
  double support_tol = 1e-3;  ///< f0 below tol * peak outside B_S counts as "supported in B_S"
};

struct OutputSpec {
  int cadence = 10;  ///< diagnostics every `cadence` steps (plus the first and last)
  std::vector<double> snapshot_times;
  std::filesystem::path dir;           ///< empty: write nothing
  std::filesystem::path weight_cache;  ///< empty: do not cache weight tables
};

struct RunConfig {
  double S = 3.5;
  int N = 16;
  int K = 0;
  int z_quad_order = 0;  ///< 0 selects 2K + 8
  KernelSpec kernel;
  std::optional<weights::QuadratureSpec> weight_quad;  ///< unset: QuadratureSpec::defaults(N)
  Integrator integrator = Integrator::RK4;
  double dt = 0.01;
  double t_end = 1.0;
  InitialSpec ic;
  OutputSpec output;

  velocity::Truncation truncation() const { return velocity::truncation_params(S); }
  kernel::KernelModel make_kernel() const;
  initial::InitialCondition make_initial() const;
  weights::QuadratureSpec quadrature() const { return weight_quad.value_or(weights::QuadratureSpec::defaults(N)); }
  int quad_order() const { return z_quad_order > 0 ? z_quad_order : gpc::Basis::default_quad_order(K); }
  long steps() const;
};

/// Throws PreconditionError naming the offending key for any violated constraint.
void validate_config(const RunConfig& config);

/// Everything derived from a configuration that the time loop needs.
class Problem {
 public:
  explicit Problem(const RunConfig& config);

  const RunConfig& config() const { return config_; }
  const velocity::VelocityGrid& grid() const { return grid_; }
  const gpc::Basis& basis() const { return basis_; }
  const kernel::KernelModel& kernel() const { return kernel_; }
  const initial::InitialCondition& initial_condition() const { return ic_; }
  const gpc::TripleProductTensor& tensor() const { return tensor_; }
  const weights::WeightTable& table() const { return *table_; }
  collision::CollisionWorkspace& workspace() { return *workspace_; }

  /// Exact solution when the initial condition has one.
  std::optional<diagnostics::Reference> reference() const;

 private:
  RunConfig config_;
  velocity::VelocityGrid grid_;
  gpc::Basis basis_;
  kernel::KernelModel kernel_;
  initial::InitialCondition ic_;
  gpc::TripleProductTensor tensor_;
  std::unique_ptr<weights::WeightTable> table_;
  std::unique_ptr<collision::CollisionWorkspace> workspace_;
};

using RhsEvaluator = std::function<void(const velocity::SpectralField&, std::span<Complex>)>;

RhsEvaluator galerkin_rhs(collision::CollisionWorkspace& ws);

struct SimState {
  velocity::SpectralField field;
  long step_index = 0;
  std::deque<diagnostics::DiagnosticsRecord> recent;
};

/// Rejects initial data that has not decayed below `tol` times its peak inside B_S.
void check_support(const initial::InitialCondition& ic, double S, double tol);

/// P_N^K f0 via the forward transform.
velocity::SpectralField project_initial(const initial::InitialCondition& ic, const velocity::VelocityGrid& grid,
                                        const gpc::Basis& basis);

/// ||f0 - P_N^K f0||_{L2_v L2_z} measured on the 2N-refined grid.
double projection_residual(const velocity::SpectralField& projected, const initial::InitialCondition& ic,
                           const gpc::Basis& basis);

struct InitialReport {
  // (i) mass of every gPC mode, projection vs. exact
  std::vector<double> mass_projected;
  std::vector<double> mass_exact;
  double mass_defect = 0.0;
  bool mass_ok = false;
  // (ii) norm contraction
  double l2h1_projected = 0.0, l2h1_exact = 0.0;
  double h1h1_projected = 0.0, h1h1_exact = 0.0;
  bool contraction_ok = false;
  // (iii) L1_v H1_z control, ratio = projected / exact
  double l1h1_projected = 0.0, l1h1_exact = 0.0, l1h1_ratio = 0.0;
  // (iv) negative part of the projection
  double negative_l2h1 = 0.0;
  double projection_residual = 0.0;
};

/**
 * Checks conditions (i)-(iv) on projected initial data. "Exact" quantities of f0 come from
 * a 4N x (K + 8) reference projection.
 */
InitialReport validate_initial(const velocity::SpectralField& field, const initial::InitialCondition& ic,
                               const gpc::Basis& basis);

/// One Euler or classical RK4 step; throws RuntimeFailure naming the step on blow-up.
void step(SimState& state, const RhsEvaluator& rhs, double dt, Integrator integrator);

struct RunResult {
  SimState state;
  std::vector<diagnostics::DiagnosticsRecord> series;
  std::vector<std::filesystem::path> files;
  double seconds = 0.0;
};

/// Integrate to t_end, emitting diagnostics every cadence steps and snapshots at the
/// configured times. Output goes to config.output.dir when set.
RunResult run(const RunConfig& config);
RunResult run(Problem& problem);

}  // namespace ksg::solver
