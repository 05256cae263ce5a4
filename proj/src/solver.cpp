#include "ksg/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <algorithm>

namespace ksg::solver {

using velocity::SpectralField;
using velocity::VelocityGrid;

kernel::KernelModel RunConfig::make_kernel() const {
  return kernel::KernelModel(kernel.gamma, kernel.b, truncation().R, kernel.angular_constant);
}

initial::InitialCondition RunConfig::make_initial() const {
  if (ic.family == initial::Family::Bkw) return initial::InitialCondition::bkw(ic.t0, make_kernel());
  return initial::InitialCondition::bi_gaussian(ic.density, ic.temperature, ic.shift1, ic.shift2);
}

long RunConfig::steps() const {
  const long n = std::lround(t_end / dt);
  require(std::abs(n * dt - t_end) <= 1e-9 * std::max(1.0, t_end), "time.t_end must be a multiple of time.dt");
  return n;
}

namespace {

// 0, ..., steps; each entry the step index of a configured snapshot time.
std::vector<long> snapshot_steps(const RunConfig& config) {
  std::vector<long> out;
  for (double t : config.output.snapshot_times) {
    const long s = std::lround(t / config.dt);
    require(std::abs(s * config.dt - t) <= 1e-9 * std::max(1.0, t),
            "output.snapshot_times: every time must be a multiple of time.dt");
    require(t >= 0.0 && s <= config.steps(), "output.snapshot_times: times must lie in [0, t_end]");
    out.push_back(s);
  }
  return out;
}

}  // namespace

void validate_config(const RunConfig& c) {
  require(c.S > 0.0 && std::isfinite(c.S), "grid.S must be positive");
  require(c.N >= 1, "grid.N must be at least 1");
  require(c.K >= 0, "grid.K must be non-negative");
  require(c.z_quad_order == 0 || c.z_quad_order >= c.K + 1, "grid.z_quad_order must be at least K + 1");
  require(c.dt > 0.0 && std::isfinite(c.dt), "time.dt must be positive");
  require(c.t_end >= 0.0 && std::isfinite(c.t_end), "time.t_end must be non-negative");
  c.steps();
  require(c.output.cadence >= 1, "output.cadence must be at least 1");
  snapshot_steps(c);
  const auto q = c.quadrature();
  require(q.radial >= 2 && q.angular_q >= 2 && q.angular_sigma >= 2,
          "kernel quadrature orders must be at least 2");
  require(q.angular_q % 2 == 0 && q.angular_sigma % 2 == 0, "kernel angular quadrature orders must be even");
  require(c.kernel.angular_constant > 0.0, "kernel.angular_constant must be positive");
  require(!c.kernel.b.empty() && c.kernel.b.size() <= 3, "kernel.b must have 1 to 3 coefficients");

  const auto model = c.make_kernel();
  for (const auto& check : kernel::validate(model)) {
    if (check.passed) continue;
    const std::string key = check.name == "b_positive" ? "kernel.b" : "kernel.gamma";
    throw PreconditionError(key + ": " + check.detail);
  }
  const int deg = model.b_degree();
  require(c.quad_order() >= (3 * c.K + deg + 2) / 2,
          "grid.z_quad_order too small to integrate the triple products exactly");

  if (c.ic.family == initial::Family::BiGaussian) {
    require(c.ic.density.c0 - std::abs(c.ic.density.c1) > 0.0, "ic.density must stay positive on [-1, 1]");
    require(c.ic.temperature.c0 - std::abs(c.ic.temperature.c1) > 0.0,
            "ic.temperature must stay positive on [-1, 1]");
  } else {
    require(c.ic.t0 >= 0.0, "ic.t0 must be non-negative");
  }
  require(c.ic.support_tol > 0.0 && c.ic.support_tol < 1.0, "ic.support_tol must lie in (0, 1)");
  check_support(c.make_initial(), c.S, c.ic.support_tol);
}

Problem::Problem(const RunConfig& config)
    : config_(config),
      grid_(config.N, config.truncation().L),
      basis_(config.K, config.quad_order()),
      kernel_(config.make_kernel()),
      ic_(config.make_initial()),
      tensor_(gpc::triple_product_tensor(
          basis_, [k = kernel_](double z) { return k.b(z); }, kernel_.b_degree())) {
  const auto quad = config.quadrature();
  if (config.output.weight_cache.empty())
    table_ = std::make_unique<weights::WeightTable>(weights::compute_weight_table(grid_, kernel_, quad));
  else
    table_ = std::make_unique<weights::WeightTable>(
        weights::load_or_compute(config.output.weight_cache, grid_, kernel_, quad));
  workspace_ = std::make_unique<collision::CollisionWorkspace>(*table_, tensor_);
}

std::optional<diagnostics::Reference> Problem::reference() const {
  if (!ic_.has_exact_solution()) return std::nullopt;
  return diagnostics::Reference(
      [ic = ic_](double t, double v1, double v2, double z) { return ic.exact(t, v1, v2, z); });
}

RhsEvaluator galerkin_rhs(collision::CollisionWorkspace& ws) {
  return [&ws](const SpectralField& f, std::span<Complex> out) { collision::eval_galerkin_rhs(f, ws, out); };
}

void check_support(const initial::InitialCondition& ic, double S, double tol) {
  const double radius = ic.effective_support(tol);
  if (radius > S) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "ic support exceeds S: f0 > %g * max f0 out to |v| = %.2f > S = %g", tol,
                  radius, S);
    throw PreconditionError(buf);
  }
}

namespace {

std::vector<double> sample(const initial::InitialCondition& ic, const VelocityGrid& grid, const gpc::Basis& basis) {
  const int M = grid.points_per_axis();
  const std::size_t npts = grid.size();
  std::vector<double> values(npts * basis.quad_order());
  for (int q = 0; q < basis.quad_order(); ++q)
    for (int j1 = 0; j1 < M; ++j1)
      for (int j2 = 0; j2 < M; ++j2)
        values[q * npts + j1 * M + j2] = ic(grid.node(j1), grid.node(j2), basis.nodes()[q]);
  return values;
}

}  // namespace

SpectralField project_initial(const initial::InitialCondition& ic, const VelocityGrid& grid,
                              const gpc::Basis& basis) {
  return velocity::forward_transform(grid, basis, sample(ic, grid, basis));
}

double projection_residual(const SpectralField& projected, const initial::InitialCondition& ic,
                           const gpc::Basis& basis) {
  const auto fine = velocity::pad_modes(projected, 2 * projected.grid().N());
  const auto values = velocity::inverse_transform(fine, basis);
  const auto exact = sample(ic, fine.grid(), basis);
  const std::size_t npts = fine.grid().size();
  double total = 0.0;
  for (int q = 0; q < basis.quad_order(); ++q) {
    double acc = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
      const double d = values[q * npts + p] - exact[q * npts + p];
      acc += d * d;
    }
    total += basis.weights()[q] * acc;
  }
  return std::sqrt(total * fine.grid().cell_measure());
}

InitialReport validate_initial(const SpectralField& field, const initial::InitialCondition& ic,
                               const gpc::Basis& basis) {
  constexpr double kSlack = 1e-10;
  const VelocityGrid ref_grid(4 * field.grid().N(), field.grid().L());
  const gpc::Basis ref_basis(field.order() + 8);
  const auto ref = project_initial(ic, ref_grid, ref_basis);
  const gpc::Basis& b = basis;

  InitialReport r;
  r.mass_projected = diagnostics::per_mode_mass(field);
  const auto ref_mass = diagnostics::per_mode_mass(ref);
  r.mass_exact.assign(ref_mass.begin(), ref_mass.begin() + field.gpc_size());
  double scale = 0.0;
  for (std::size_t k = 0; k < r.mass_exact.size(); ++k) {
    r.mass_defect = std::max(r.mass_defect, std::abs(r.mass_projected[k] - r.mass_exact[k]));
    scale = std::max(scale, std::abs(r.mass_exact[k]));
  }
  r.mass_ok = r.mass_defect <= 1e-10 * std::max(scale, 1e-300);

  r.l2h1_projected = diagnostics::mixed_sobolev_norm(field, 0, 1);
  r.h1h1_projected = diagnostics::mixed_sobolev_norm(field, 1, 1);
  r.l2h1_exact = diagnostics::mixed_sobolev_norm(ref, 0, 1);
  r.h1h1_exact = diagnostics::mixed_sobolev_norm(ref, 1, 1);
  r.contraction_ok = r.l2h1_projected <= r.l2h1_exact * (1.0 + kSlack) + kSlack &&
                     r.h1h1_projected <= r.h1h1_exact * (1.0 + kSlack) + kSlack;

  r.l1h1_projected = diagnostics::l1_h1_norm(field, b);
  r.l1h1_exact = diagnostics::l1_h1_norm(ref, ref_basis);
  r.l1h1_ratio = r.l1h1_exact > 0.0 ? r.l1h1_projected / r.l1h1_exact : 0.0;

  r.negative_l2h1 = diagnostics::negative_part_norm(field, b);
  r.projection_residual = projection_residual(field, ic, b);
  return r;
}

namespace {

void check_finite(const SpectralField& f, long step_index) {
  for (const Complex& c : f.coeffs()) {
    const double a = std::abs(c);
    if (!std::isfinite(a) || a > kBlowUpThreshold)
      throw RuntimeFailure("blow-up detected at step " + std::to_string(step_index) +
                           ": coefficient magnitude " + std::to_string(a));
  }
}

}  // namespace

void step(SimState& state, const RhsEvaluator& rhs, double dt, Integrator integrator) {
  auto& y = state.field.coeffs();
  const std::size_t n = y.size();
  const double t0 = state.field.time();
  const long next = state.step_index + 1;

  if (integrator == Integrator::Euler) {
    std::vector<Complex> k1(n);
    rhs(state.field, k1);
    for (std::size_t i = 0; i < n; ++i) y[i] += dt * k1[i];
  } else {
    std::vector<Complex> k1(n), k2(n), k3(n), k4(n);
    SpectralField stage = state.field;
    auto& ys = stage.coeffs();
    rhs(state.field, k1);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + (0.5 * dt) * k1[i];
    stage.set_time(t0 + 0.5 * dt);
    rhs(stage, k2);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + (0.5 * dt) * k2[i];
    rhs(stage, k3);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + dt * k3[i];
    stage.set_time(t0 + dt);
    rhs(stage, k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  state.step_index = next;
  check_finite(state.field, next);
}

RunResult run(const RunConfig& config) {
  validate_config(config);
  Problem problem(config);
  return run(problem);
}

RunResult run(Problem& problem) {
  constexpr std::size_t kRecentRecords = 16;
  const auto start = std::chrono::steady_clock::now();
  const RunConfig& config = problem.config();
  const long steps = config.steps();
  const auto snaps = snapshot_steps(config);
  const auto reference = problem.reference();
  const diagnostics::Reference* ref = reference ? &*reference : nullptr;
  const auto rhs = galerkin_rhs(problem.workspace());

  RunResult result{SimState{project_initial(problem.initial_condition(), problem.grid(), problem.basis()), 0, {}},
                   {}, {}, 0.0};
  SimState& state = result.state;

  const bool write = !config.output.dir.empty();
  std::ofstream csv;
  if (write) {
    std::filesystem::create_directories(config.output.dir);
    const auto path = config.output.dir / "diagnostics.csv";
    csv.open(path, std::ios::trunc);
    if (!csv) throw FormatError("cannot open " + path.string());
    csv << diagnostics::csv_header(config.K) << '\n';
    result.files.push_back(path);
  }

  auto record = [&] {
    auto rec = diagnostics::make_record(state.field, problem.basis(), ref);
    if (csv.is_open()) csv << diagnostics::csv_row(rec) << '\n';
    state.recent.push_back(rec);
    if (state.recent.size() > kRecentRecords) state.recent.pop_front();
    result.series.push_back(std::move(rec));
  };
  auto snapshot = [&] {
    if (!write) return;
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%08ld.ksgf", state.step_index);
    const auto path = config.output.dir / name;
    velocity::write_snapshot(path, state.field);
    result.files.push_back(path);
  };
  auto wants_snapshot = [&](long s) { return std::find(snaps.begin(), snaps.end(), s) != snaps.end(); };

  record();
  if (wants_snapshot(0)) snapshot();
  for (long s = 0; s < steps; ++s) {
    step(state, rhs, config.dt, config.integrator);
    state.field.set_time(static_cast<double>(state.step_index) * config.dt);
    if (state.step_index % config.output.cadence == 0 || state.step_index == steps) record();
    if (wants_snapshot(state.step_index)) snapshot();
  }
  if (write) {
    const auto path = config.output.dir / "final.ksgf";
    velocity::write_snapshot(path, state.field);
    result.files.push_back(path);
    csv.close();
    if (!csv) throw FormatError("failed writing diagnostics.csv");
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace ksg::solver
