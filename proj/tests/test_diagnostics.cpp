#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ksg/diagnostics.hpp"
#include "ksg/initial.hpp"
#include "ksg/solver.hpp"
#include "oracles.hpp"

using namespace ksg;
using doctest::Approx;
using velocity::SpectralField;
using velocity::VelocityGrid;

namespace {

SpectralField project(const VelocityGrid& grid, const gpc::Basis& basis,
                      const std::function<double(double, double, double)>& f) {
  const int M = grid.points_per_axis();
  std::vector<double> values(grid.size() * basis.quad_order());
  for (int q = 0; q < basis.quad_order(); ++q)
    for (int j1 = 0; j1 < M; ++j1)
      for (int j2 = 0; j2 < M; ++j2) values[(q * M + j1) * M + j2] = f(grid.node(j1), grid.node(j2), basis.nodes()[q]);
  return velocity::forward_transform(grid, basis, values);
}

}  // namespace

TEST_CASE("per-mode mass") {
  const VelocityGrid grid(4, 2.0);
  SUBCASE("constant one") {
    gpc::Basis basis(0);
    const auto f = project(grid, basis, [](double, double, double) { return 1.0; });
    CHECK(diagnostics::per_mode_mass(f)[0] == Approx(16.0).epsilon(1e-14));
  }
  SUBCASE("z-independent data") {
    gpc::Basis basis(3);
    const auto f = project(grid, basis, [](double v1, double, double) { return 2.0 + std::cos(kPi * v1 / 2.0); });
    const auto m = diagnostics::per_mode_mass(f);
    CHECK(m[0] == Approx(32.0).epsilon(1e-14));
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(m[k]) <= 1e-14);
  }
  SUBCASE("imaginary zero mode") {
    SpectralField f(grid, 0);
    f.at(0, 0, 0) = Complex(1.0, 1e-6);
    CHECK_THROWS_AS(diagnostics::per_mode_mass(f), RuntimeFailure);
  }
}

TEST_CASE("mixed Sobolev norms") {
  const VelocityGrid grid(6, 2.5);
  gpc::Basis basis(2);
  SUBCASE("zero field") {
    SpectralField f(grid, 2);
    CHECK(diagnostics::mixed_sobolev_norm(f, 1, 1) == 0.0);
  }
  SUBCASE("z-independent fields have no z-derivative part") {
    const auto f = project(grid, basis, [](double v1, double v2, double) { return std::exp(-v1 * v1 - 0.5 * v2 * v2); });
    for (int k : {0, 1, 2}) CHECK(diagnostics::mixed_sobolev_norm(f, k, 1) == Approx(diagnostics::mixed_sobolev_norm(f, k, 0)).epsilon(1e-14));
  }
  SUBCASE("L2 norm equals grid quadrature") {
    const auto f = oracle::random_hermitian(grid, 2, 17);
    const auto nodal = velocity::inverse_transform(f, basis);
    double acc = 0.0;
    for (int q = 0; q < basis.quad_order(); ++q)
      for (std::size_t p = 0; p < grid.size(); ++p) acc += basis.weights()[q] * nodal[q * grid.size() + p] * nodal[q * grid.size() + p];
    CHECK(diagnostics::mixed_sobolev_norm(f, 0, 0) == Approx(std::sqrt(acc * grid.cell_measure())).epsilon(1e-10));
  }
  SUBCASE("single mode with linear z dependence against dense quadrature") {
    const double L = grid.L();
    // f = (1 + 0.5 z) 2 cos(pi v1 / L) + 0.3 z 2 sin(2 pi v2 / L)
    auto fn = [L](double v1, double v2, double z) {
      return (1 + 0.5 * z) * 2 * std::cos(kPi * v1 / L) + 0.3 * z * 2 * std::sin(2 * kPi * v2 / L);
    };
    const auto f = project(grid, basis, fn);
    const int P = 40;
    const double h = 2 * L / P, e = 1e-4;
    auto integrand = [&](double z) {
      double acc = 0.0;
      for (int i = 0; i < P; ++i)
        for (int j = 0; j < P; ++j) {
          const double v1 = -L + i * h, v2 = -L + j * h;
          const double f0 = fn(v1, v2, z);
          const double d1 = (fn(v1 + e, v2, z) - fn(v1 - e, v2, z)) / (2 * e);
          const double d2 = (fn(v1, v2 + e, z) - fn(v1, v2 - e, z)) / (2 * e);
          const double dz = (fn(v1, v2, z + e) - fn(v1, v2, z - e)) / (2 * e);
          const double dz1 = (fn(v1 + e, v2, z + e) - fn(v1 - e, v2, z + e) - fn(v1 + e, v2, z - e) + fn(v1 - e, v2, z - e)) / (4 * e * e);
          const double dz2 = (fn(v1, v2 + e, z + e) - fn(v1, v2 - e, z + e) - fn(v1, v2 + e, z - e) + fn(v1, v2 - e, z - e)) / (4 * e * e);
          acc += f0 * f0 + d1 * d1 + d2 * d2 + dz * dz + dz1 * dz1 + dz2 * dz2;
        }
      return acc * h * h;
    };
    const double ref = std::sqrt(0.5 * oracle::simpson(integrand, -1, 1, 40));
    CHECK(diagnostics::mixed_sobolev_norm(f, 1, 1) == Approx(ref).epsilon(1e-6));
  }
  SUBCASE("r above one is rejected") {
    SpectralField f(grid, 2);
    CHECK_THROWS_AS(diagnostics::mixed_sobolev_norm(f, 0, 2), PreconditionError);
  }
}

TEST_CASE("negative part") {
  const VelocityGrid grid(5, 2.0);
  gpc::Basis basis(2);
  SUBCASE("non-negative data") {
    const auto f = project(grid, basis, [](double v1, double v2, double z) { return 1.2 + std::cos(kPi * v1 / 2) * (0.5 + 0.2 * z) + 0.1 * std::sin(kPi * v2); });
    CHECK(diagnostics::negative_part_norm(f, basis) == 0.0);
  }
  SUBCASE("negative constant") {
    const auto f = project(grid, basis, [](double, double, double) { return -0.7; });
    CHECK(diagnostics::negative_part_norm(f, basis) == Approx(0.7 * 4.0).epsilon(1e-13));
  }
  SUBCASE("negative and linear in z") {
    const auto f = project(grid, basis, [](double, double, double z) { return -0.7 * (1 + 0.5 * z); });
    const double expect = 0.7 * 4.0 * std::sqrt(1 + 0.25 / 3 + 0.25);
    CHECK(diagnostics::negative_part_norm(f, basis) == Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("error against a reference") {
  const VelocityGrid grid(5, 3.0);
  gpc::Basis basis(2);
  const auto f = oracle::random_hermitian(grid, 2, 2);
  const diagnostics::Reference own = [&](double, double v1, double v2, double z) {
    std::vector<double> s(3);
    velocity::evaluate_point(f, v1, v2, s);
    return s[0] * basis.eval(0, z) + s[1] * basis.eval(1, z) + s[2] * basis.eval(2, z);
  };
  CHECK(diagnostics::error_vs_reference(f, basis, own) <= 1e-12);

  // symmetric in the two arguments
  const auto g = oracle::random_hermitian(grid, 2, 3);
  const diagnostics::Reference gref = [&](double, double v1, double v2, double z) {
    std::vector<double> s(3);
    velocity::evaluate_point(g, v1, v2, s);
    return s[0] * basis.eval(0, z) + s[1] * basis.eval(1, z) + s[2] * basis.eval(2, z);
  };
  const double ab = diagnostics::error_vs_reference(f, basis, gref);
  const double ba = diagnostics::error_vs_reference(g, basis, own);
  CHECK(ab > 0.0);
  CHECK(ab == Approx(ba).epsilon(1e-12));

  // the initial error of a projected BKW start is zero
  const kernel::KernelModel k(0.0, {1.0, 0.2}, 6.0);
  const auto ic = initial::InitialCondition::bkw(0.3, k);
  const auto f0 = solver::project_initial(ic, grid, basis);
  const diagnostics::Reference exact = [&](double t, double v1, double v2, double z) { return ic.exact(t, v1, v2, z); };
  CHECK(diagnostics::error_vs_reference(f0, basis, exact) <= 1e-15);

  // a higher-order reference basis adds the gPC tail and never lowers the error
  gpc::Basis wide(6);
  CHECK(diagnostics::error_vs_reference(f0, basis, exact, &wide) > 0.0);
  gpc::Basis narrow(1);
  CHECK_THROWS_AS(diagnostics::error_vs_reference(f0, basis, exact, &narrow), PreconditionError);
}

TEST_CASE("moment statistics") {
  SUBCASE("deterministic and centered") {
    const VelocityGrid grid(18, 9.0);
    gpc::Basis basis(2);
    const auto f = project(grid, basis, [](double v1, double v2, double) { return std::exp(-(v1 * v1 + v2 * v2) / 2) / (2 * kPi); });
    const auto m = diagnostics::moment_stats(f);
    CHECK(m.density.mean == Approx(1.0).epsilon(1e-10));
    CHECK(m.energy.mean == Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(m.momentum[0].mean) <= 1e-14);
    CHECK(std::abs(m.momentum[1].mean) <= 1e-14);
    CHECK(m.density.std <= 1e-15);
    CHECK(m.energy.std <= 1e-14);
    CHECK(m.momentum[0].std <= 1e-15);
  }
  SUBCASE("bi-Gaussian with affine temperature") {
    const VelocityGrid grid(24, 10.0);
    gpc::Basis basis(1);
    const auto ic = initial::InitialCondition::bi_gaussian({1.0, 0.0}, {0.8, 0.2}, 1.0, 0.5);
    const auto f = solver::project_initial(ic, grid, basis);
    const auto m = diagnostics::moment_stats(f);
    // E(z) = (2 T(z) + |u|^2) / 2 per unit density
    CHECK(m.energy.mean == Approx(0.5 * (1.6 + 1.25)).epsilon(1e-10));
    CHECK(m.energy.std == Approx(0.2 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(std::abs(m.momentum[0].mean) <= 1e-13);
    CHECK(m.density.mean == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("csv records") {
  const VelocityGrid grid(3, 2.0);
  gpc::Basis basis(1);
  const auto f = oracle::random_hermitian(grid, 1, 1);
  const auto rec = diagnostics::make_record(f, basis, nullptr);
  CHECK(rec.norm_L1H1 >= 0.0);
  CHECK(rec.norm_L2H1 >= 0.0);
  CHECK(rec.norm_H1H1 >= rec.norm_L2H1);
  CHECK_FALSE(rec.err_L2H1.has_value());
  const auto header = diagnostics::csv_header(1);
  const auto row = diagnostics::csv_row(rec);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(header.rfind("t,mass_0,mass_1,", 0) == 0);
  // 17 significant digits round-trip
  const double x = 0.1 + 0.2;
  CHECK(std::stod(diagnostics::format_double(x)) == x);
}
