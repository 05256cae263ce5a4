#include "ksg/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ksg/bkw.hpp"

namespace ksg::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string());
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

std::string fmt_optional(const std::optional<double>& v) {
  return v ? diagnostics::format_double(*v) : std::string();
}

// L2_v H1_z norm of a - b for fields on the same grid and order.
double distance(const velocity::SpectralField& a, const velocity::SpectralField& b) {
  auto diff = a;
  for (std::size_t i = 0; i < diff.coeffs().size(); ++i) diff.coeffs()[i] -= b.coeffs()[i];
  return diagnostics::mixed_sobolev_norm(diff, 0, 1);
}

}  // namespace

std::filesystem::path cmd_precompute_weights(const Config& config, const std::filesystem::path& out_dir,
                                             std::ostream& log) {
  const auto& run = config.run;
  const std::filesystem::path dir = !run.output.weight_cache.empty() ? run.output.weight_cache : out_dir;
  require(!dir.empty(), "precompute-weights needs output.weight_cache or --out");
  const velocity::VelocityGrid grid(run.N, run.truncation().L);
  const auto kernel = run.make_kernel();
  const auto start = Clock::now();
  const auto table = weights::load_or_compute(dir, grid, kernel, run.quadrature());
  const auto path = weights::cache_path(dir, table.key());
  log << "weights: " << path.string() << " (" << table.entries().size() << " entries, "
      << seconds_since(start) << " s)\n";
  return path;
}

std::vector<SweepRow> cmd_converge_n(const Config& config, const std::filesystem::path& out_dir, std::ostream& log) {
  require(!config.sweep.n_list.empty(), "sweep.n_list must not be empty");
  const bool self = config.sweep.reference == SweepReference::Self;
  if (!self)
    require(config.run.make_initial().has_exact_solution(),
            "sweep.reference = exact needs BKW data with a Maxwell kernel (gamma = 0)");
  int n_ref = 0;
  for (int n : config.sweep.n_list) n_ref = std::max(n_ref, n);

  std::vector<SweepRow> rows;
  std::vector<std::optional<velocity::SpectralField>> finals;
  for (int n : config.sweep.n_list) {
    SweepRow row;
    row.resolution = n;
    const auto start = Clock::now();
    try {
      solver::RunConfig rc = config.run;
      rc.N = n;
      if (!out_dir.empty()) rc.output.dir = out_dir / ("N" + std::to_string(n));
      solver::validate_config(rc);
      solver::Problem problem(rc);
      auto result = solver::run(problem);
      const auto& last = result.series.back();
      row.neg = last.neg_L2H1;
      if (!self) row.err = last.err_L2H1;
      finals.emplace_back(std::move(result.state.field));
    } catch (const Error& e) {
      row.status = std::string("failed: ") + e.what();
      finals.emplace_back(std::nullopt);
    }
    row.seconds = seconds_since(start);
    log << "converge-n: N = " << n << " " << row.status << " err = " << fmt_optional(row.err) << " neg = "
        << fmt_optional(row.neg) << " (" << row.seconds << " s)\n";
    rows.push_back(std::move(row));
  }

  if (self) {
    const velocity::SpectralField* ref = nullptr;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].resolution == n_ref && finals[i]) ref = &*finals[i];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!finals[i]) continue;
      if (!ref) {
        rows[i].status = "failed: reference run failed";
        continue;
      }
      rows[i].err = distance(velocity::restrict_modes(*ref, rows[i].resolution), *finals[i]);
    }
  }
  if (!out_dir.empty()) write_text(out_dir / "converge_n.csv", sweep_csv("N", rows, true));
  return rows;
}

std::vector<SweepRow> cmd_converge_k(const Config& config, const std::filesystem::path& out_dir, std::ostream& log) {
  require(!config.sweep.k_list.empty(), "sweep.k_list must not be empty");
  const bool self = config.sweep.reference == SweepReference::Self;
  if (!self)
    require(config.run.make_initial().has_exact_solution(),
            "sweep.reference = exact needs BKW data with a Maxwell kernel (gamma = 0)");
  int k_max = 0;
  for (int k : config.sweep.k_list) k_max = std::max(k_max, k);
  const gpc::Basis ref_basis(k_max + 4);

  std::vector<SweepRow> rows;
  std::vector<std::optional<velocity::SpectralField>> finals;
  for (int k : config.sweep.k_list) {
    SweepRow row;
    row.resolution = k;
    const auto start = Clock::now();
    try {
      solver::RunConfig rc = config.run;
      rc.K = k;
      rc.z_quad_order = 0;
      if (!out_dir.empty()) rc.output.dir = out_dir / ("K" + std::to_string(k));
      solver::validate_config(rc);
      solver::Problem problem(rc);
      auto result = solver::run(problem);
      row.neg = result.series.back().neg_L2H1;
      if (!self) {
        const auto ref = *problem.reference();
        row.err = diagnostics::error_vs_reference(result.state.field, problem.basis(), ref, &ref_basis);
      }
      finals.emplace_back(std::move(result.state.field));
    } catch (const Error& e) {
      row.status = std::string("failed: ") + e.what();
      finals.emplace_back(std::nullopt);
    }
    row.seconds = seconds_since(start);
    log << "converge-k: K = " << k << " " << row.status << " err = " << fmt_optional(row.err) << " ("
        << row.seconds << " s)\n";
    rows.push_back(std::move(row));
  }

  if (self) {
    const velocity::SpectralField* ref = nullptr;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].resolution == k_max && finals[i]) ref = &*finals[i];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!finals[i]) continue;
      if (!ref) {
        rows[i].status = "failed: reference run failed";
        continue;
      }
      rows[i].err = distance(velocity::with_gpc_order(*finals[i], k_max), *ref);
    }
  }
  if (!out_dir.empty()) write_text(out_dir / "converge_k.csv", sweep_csv("K", rows, false));
  return rows;
}

std::string sweep_csv(const std::string& label, const std::vector<SweepRow>& rows, bool with_neg) {
  std::ostringstream out;
  out << label << ",err_L2H1" << (with_neg ? ",neg_L2H1" : "") << ",status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << r.resolution << ',' << fmt_optional(r.err);
    if (with_neg) out << ',' << fmt_optional(r.neg);
    out << ',' << status << '\n';
  }
  return out.str();
}

solver::InitialReport cmd_validate_ic(const Config& config, const std::filesystem::path& out_dir, std::ostream& log) {
  const auto& rc = config.run;
  const velocity::VelocityGrid grid(rc.N, rc.truncation().L);
  const gpc::Basis basis(rc.K, rc.quad_order());
  const auto ic = rc.make_initial();
  const auto field = solver::project_initial(ic, grid, basis);
  const auto r = solver::validate_initial(field, ic, basis);

  std::ostringstream out;
  auto line = [&out](const std::string& name, double value) {
    out << name << ',' << diagnostics::format_double(value) << '\n';
  };
  out << "quantity,value\n";
  for (std::size_t k = 0; k < r.mass_projected.size(); ++k) {
    line("mass_projected_" + std::to_string(k), r.mass_projected[k]);
    line("mass_exact_" + std::to_string(k), r.mass_exact[k]);
  }
  line("mass_defect", r.mass_defect);
  line("mass_ok", r.mass_ok ? 1.0 : 0.0);
  line("L2H1_projected", r.l2h1_projected);
  line("L2H1_exact", r.l2h1_exact);
  line("H1H1_projected", r.h1h1_projected);
  line("H1H1_exact", r.h1h1_exact);
  line("contraction_ok", r.contraction_ok ? 1.0 : 0.0);
  line("L1H1_projected", r.l1h1_projected);
  line("L1H1_exact", r.l1h1_exact);
  line("L1H1_ratio", r.l1h1_ratio);
  line("neg_L2H1", r.negative_l2h1);
  line("projection_residual", r.projection_residual);
  log << out.str();
  if (!out_dir.empty()) write_text(out_dir / "validate_ic.csv", out.str());
  return r;
}

bool OracleReport::passed() const {
  for (const auto& c : checks)
    if (!c.skipped && !c.passed) return false;
  return true;
}

double bkw_residual(const velocity::VelocityGrid& grid, const gpc::Basis& basis, const kernel::KernelModel& kernel,
                    double t, collision::OracleQuadrature quad) {
  require(kernel.gamma() == 0.0, "bkw_residual: the BKW profile solves the Maxwell-molecule equation only");
  const int nz = basis.quad_order();
  std::vector<double> b(nz), rates(nz);
  for (int q = 0; q < nz; ++q) {
    b[q] = kernel.b(basis.nodes()[q]);
    rates[q] = bkw::rate(kernel, basis.nodes()[q]);
  }
  const collision::PointFunction f = [&rates, t](double v1, double v2, std::span<double> out) {
    const double v_sq = v1 * v1 + v2 * v2;
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = bkw::density(t, v_sq, rates[q]);
  };
  const auto q_values = collision::oracle_direct_QR(grid, b, kernel, f, quad);
  const int M = grid.points_per_axis();
  const std::size_t npts = grid.size();
  double total = 0.0;
  for (int q = 0; q < nz; ++q) {
    double acc = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
      const double v1 = grid.node(static_cast<int>(p) / M), v2 = grid.node(static_cast<int>(p) % M);
      const double r = bkw::time_derivative(t, v1 * v1 + v2 * v2, rates[q]) - q_values[q * npts + p];
      acc += r * r;
    }
    total += basis.weights()[q] * acc;
  }
  return std::sqrt(total * grid.cell_measure());
}

double rhs_oracle_distance(const velocity::SpectralField& field, const gpc::Basis& basis,
                           const kernel::KernelModel& kernel, collision::CollisionWorkspace& ws,
                           collision::OracleQuadrature quad) {
  const auto spectral = collision::eval_galerkin_rhs(field, ws);
  const auto oracle = collision::oracle_rhs(field, basis, kernel, quad);
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < oracle.coeffs().size(); ++i) {
    diff += std::norm(spectral.coeffs()[i] - oracle.coeffs()[i]);
    norm += std::norm(oracle.coeffs()[i]);
  }
  return norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

OracleReport cmd_oracle_check(const Config& config, const std::filesystem::path& out_dir, std::ostream& log) {
  constexpr double kRhsTolerance = 1e-6;
  constexpr double kResidualTolerance = 1e-3;
  const auto& rc = config.run;
  if (rc.N > kOracleMaxN)
    throw ConfigError("oracle-check: grid.N = " + std::to_string(rc.N) + " exceeds the oracle limit of " +
                      std::to_string(kOracleMaxN));

  solver::Problem problem(rc);
  const auto field = solver::project_initial(problem.initial_condition(), problem.grid(), problem.basis());
  OracleReport report;

  const double rel = rhs_oracle_distance(field, problem.basis(), problem.kernel(), problem.workspace(), {});
  report.checks.push_back({"rhs_vs_oracle_rel", rel, kRhsTolerance, rel <= kRhsTolerance, false});

  const auto rhs = collision::eval_galerkin_rhs(field, problem.workspace());
  double zero_mode = 0.0;
  for (int k = 0; k <= rc.K; ++k) zero_mode = std::max(zero_mode, std::abs(rhs.at(k, 0, 0)));
  report.checks.push_back({"rhs_zero_mode_max", zero_mode, 0.0, zero_mode == 0.0, false});

  if (problem.kernel().gamma() == 0.0) {
    const double res = bkw_residual(problem.grid(), problem.basis(), problem.kernel(), 1.0, {});
    report.checks.push_back({"bkw_residual_t1", res, kResidualTolerance, res <= kResidualTolerance, false});
  } else {
    report.checks.push_back({"bkw_residual_t1", 0.0, kResidualTolerance, false, true});
  }

  std::ostringstream out;
  out << "check,value,threshold,result\n";
  for (const auto& c : report.checks)
    out << c.name << ',' << diagnostics::format_double(c.value) << ',' << diagnostics::format_double(c.threshold)
        << ',' << (c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL") << '\n';
  log << out.str();
  if (!out_dir.empty()) write_text(out_dir / "oracle_check.csv", out.str());
  return report;
}

}  // namespace ksg::cli
