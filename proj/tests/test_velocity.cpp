#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ksg/velocity.hpp"
#include "oracles.hpp"

using namespace ksg;
using doctest::Approx;
using velocity::SpectralField;
using velocity::VelocityGrid;

namespace {

std::vector<double> sample(const VelocityGrid& grid, const gpc::Basis& basis,
                           const std::function<double(double, double, double)>& f) {
  const int M = grid.points_per_axis();
  std::vector<double> out(grid.size() * basis.quad_order());
  for (int q = 0; q < basis.quad_order(); ++q)
    for (int j1 = 0; j1 < M; ++j1)
      for (int j2 = 0; j2 < M; ++j2) out[(q * M + j1) * M + j2] = f(grid.node(j1), grid.node(j2), basis.nodes()[q]);
  return out;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("truncation parameters") {
  const auto t1 = velocity::truncation_params(1.0);
  CHECK(t1.R == 2.0);
  CHECK(t1.L == Approx(2.2071068).epsilon(1e-7));
  const auto t3 = velocity::truncation_params(3.0);
  CHECK(t3.R == 6.0);
  CHECK(t3.L == Approx(6.6213203).epsilon(1e-7));
  CHECK_THROWS_AS(velocity::truncation_params(0.0), PreconditionError);
  CHECK_THROWS_AS(velocity::truncation_params(-1.0), PreconditionError);
}

TEST_CASE("forward transform of simple functions") {
  const VelocityGrid grid(4, 2.5);
  gpc::Basis basis(1);
  SUBCASE("constant") {
    const auto f = velocity::forward_transform(grid, basis, sample(grid, basis, [](double, double, double) { return 1.0; }));
    CHECK(f.at(0, 0, 0).real() == Approx(1.0).epsilon(1e-14));
    double rest = 0.0;
    for (const auto& c : f.coeffs()) rest += std::abs(c);
    CHECK(rest - 1.0 < 1e-13);
  }
  SUBCASE("cosine along v1") {
    const double L = grid.L();
    const auto f = velocity::forward_transform(
        grid, basis, sample(grid, basis, [L](double v1, double, double) { return std::cos(kPi * v1 / L); }));
    CHECK(std::abs(f.at(0, 1, 0) - 0.5) < 1e-14);
    CHECK(std::abs(f.at(0, -1, 0) - 0.5) < 1e-14);
    double rest = 0.0;
    for (const auto& c : f.coeffs()) rest += std::abs(c);
    CHECK(std::abs(rest - 1.0) < 1e-13);
  }
  SUBCASE("shape mismatch") {
    std::vector<double> wrong(grid.size(), 1.0);
    CHECK_THROWS_AS(velocity::forward_transform(grid, basis, wrong), PreconditionError);
  }
}

TEST_CASE("round trips") {
  const VelocityGrid grid(5, 3.0);
  gpc::Basis basis(2);
  const auto f = oracle::random_hermitian(grid, 2, 7);

  const auto nodal = velocity::inverse_transform(f, basis);
  const auto back = velocity::forward_transform(grid, basis, nodal);
  const double scale = std::abs(f.at(0, 0, 0));
  CHECK(max_diff(back.coeffs(), f.coeffs()) <= 1e-12 * scale);

  // inverse after forward on arbitrary node values of a band-limited function
  const auto again = velocity::inverse_transform(back, basis);
  double worst = 0.0;
  for (std::size_t i = 0; i < nodal.size(); ++i) worst = std::max(worst, std::abs(again[i] - nodal[i]));
  CHECK(worst <= 1e-12);

  // any real data gives Hermitian coefficients
  oracle::Lcg rng(3);
  std::vector<double> noise(nodal.size());
  for (double& v : noise) v = rng.next();
  CHECK(velocity::forward_transform(grid, basis, noise).hermitian_defect() <= 1e-15);
}

TEST_CASE("inverse transform") {
  const VelocityGrid grid(3, 2.0);
  gpc::Basis basis(0);
  SUBCASE("zero field") {
    SpectralField f(grid, 0);
    for (double v : velocity::inverse_transform(f, basis)) CHECK(v == 0.0);
  }
  SUBCASE("mode (1, 0) with its partner") {
    SpectralField f(grid, 0);
    f.at(0, 1, 0) = 1.0;
    f.at(0, -1, 0) = 1.0;
    const auto values = velocity::inverse_transform(f, basis);
    const int M = grid.points_per_axis();
    for (int j1 = 0; j1 < M; ++j1)
      for (int j2 = 0; j2 < M; ++j2)
        CHECK(values[j1 * M + j2] == Approx(2.0 * std::cos(kPi * grid.node(j1) / grid.L())).epsilon(1e-13));
  }
  SUBCASE("non-Hermitian state is rejected") {
    SpectralField f(grid, 0);
    f.at(0, 1, 0) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(velocity::inverse_transform(f, basis), RuntimeFailure);
  }
}

TEST_CASE("point evaluation matches the grid") {
  const VelocityGrid grid(4, 2.0);
  gpc::Basis basis(1);
  const auto f = oracle::random_hermitian(grid, 1, 11);
  const auto slices = velocity::slice_values(f);
  const int M = grid.points_per_axis();
  std::vector<double> out(2);
  for (int j1 = 0; j1 < M; j1 += 3)
    for (int j2 = 0; j2 < M; j2 += 2) {
      velocity::evaluate_point(f, grid.node(j1), grid.node(j2), out);
      for (int k = 0; k < 2; ++k) CHECK(out[k] == Approx(slices[k * grid.size() + j1 * M + j2]).epsilon(1e-12));
    }
  // periodicity
  std::vector<double> a(2), b(2);
  velocity::evaluate_point(f, 0.3, -1.1, a);
  velocity::evaluate_point(f, 0.3 + 2 * grid.L(), -1.1 - 2 * grid.L(), b);
  CHECK(a[0] == Approx(b[0]).epsilon(1e-12));
}

TEST_CASE("Sobolev norms in v") {
  const VelocityGrid grid(3, 2.0);
  gpc::Basis basis(0);
  SUBCASE("zero and constant fields") {
    SpectralField f(grid, 0);
    CHECK(velocity::sobolev_norm_v(f, basis, 2, 0) == 0.0);
    f.at(0, 0, 0) = 1.5;
    CHECK(velocity::sobolev_norm_v(f, basis, 0, 0) == Approx(1.5 * 2.0 * grid.L()).epsilon(1e-14));
    CHECK(velocity::sobolev_norm_v(f, basis, 3, 0) == Approx(1.5 * 2.0 * grid.L()).epsilon(1e-14));
  }
  SUBCASE("single mode against finite differences and trapezoid") {
    SpectralField f(grid, 0);
    const Complex c(0.3, -0.2);
    f.at(0, 1, 2) = c;
    f.at(0, -1, -2) = std::conj(c);
    const double L = grid.L();
    auto fn = [&](double v1, double v2) { return 2.0 * (c * std::polar(1.0, kPi * (v1 + 2 * v2) / L)).real(); };
    const int P = 64;
    const double h = 2 * L / P, eps = 1e-4;
    double acc = 0.0;
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < P; ++j) {
        const double v1 = -L + i * h, v2 = -L + j * h;
        const double d1 = (fn(v1 + eps, v2) - fn(v1 - eps, v2)) / (2 * eps);
        const double d2 = (fn(v1, v2 + eps) - fn(v1, v2 - eps)) / (2 * eps);
        acc += fn(v1, v2) * fn(v1, v2) + d1 * d1 + d2 * d2;
      }
    CHECK(velocity::sobolev_norm_v(f, basis, 1, 0) == Approx(std::sqrt(acc * h * h)).epsilon(1e-6));
  }
}

TEST_CASE("grid Lp norms") {
  const VelocityGrid grid(3, 1.5);
  std::vector<double> ones(grid.size(), 1.0);
  CHECK(velocity::lp_norm_v(grid, ones, 1) == Approx(4 * 1.5 * 1.5).epsilon(1e-14));
  CHECK(velocity::lp_norm_v(grid, ones, 2) == Approx(2 * 1.5).epsilon(1e-14));
  std::vector<double> spike(grid.size(), 0.0);
  spike[5] = -1.0;
  CHECK(velocity::lp_norm_v(grid, spike, 0) == 1.0);
  CHECK_THROWS_AS(velocity::lp_norm_v(grid, ones, 3), PreconditionError);
}

TEST_CASE("mode restriction, padding and gPC resizing") {
  const VelocityGrid grid(4, 2.0);
  const auto f = oracle::random_hermitian(grid, 2, 5);
  const auto small = velocity::restrict_modes(f, 2);
  CHECK(small.grid().N() == 2);
  CHECK(small.at(1, -2, 1) == f.at(1, -2, 1));
  const auto big = velocity::pad_modes(small, 4);
  CHECK(big.at(1, -2, 1) == f.at(1, -2, 1));
  CHECK(big.at(1, 3, 0) == Complex{});
  const auto k4 = velocity::with_gpc_order(f, 4);
  CHECK(k4.at(2, 1, 1) == f.at(2, 1, 1));
  CHECK(k4.at(4, 1, 1) == Complex{});
  CHECK(velocity::with_gpc_order(f, 1).order() == 1);
}

TEST_CASE("snapshot files") {
  const auto dir = std::filesystem::temp_directory_path() / "ksg_test_velocity";
  std::filesystem::create_directories(dir);
  const VelocityGrid grid(3, 2.25);
  auto f = oracle::random_hermitian(grid, 2, 9);
  f.set_time(0.75);
  const auto path = dir / "snap.ksgf";
  velocity::write_snapshot(path, f);
  const auto g = velocity::read_snapshot(path);
  CHECK(g.grid() == f.grid());
  CHECK(g.order() == 2);
  CHECK(g.time() == 0.75);
  CHECK(g.coeffs() == f.coeffs());

  SUBCASE("truncated file") {
    const auto cut = dir / "cut.ksgf";
    std::filesystem::copy_file(path, cut, std::filesystem::copy_options::overwrite_existing);
    std::filesystem::resize_file(cut, std::filesystem::file_size(path) - 1);
    CHECK_THROWS_AS(velocity::read_snapshot(cut), FormatError);
  }
  SUBCASE("trailing bytes") {
    const auto extra = dir / "extra.ksgf";
    std::filesystem::copy_file(path, extra, std::filesystem::copy_options::overwrite_existing);
    std::ofstream(extra, std::ios::app | std::ios::binary) << 'x';
    CHECK_THROWS_AS(velocity::read_snapshot(extra), FormatError);
  }
  SUBCASE("wrong magic") {
    const auto bad = dir / "bad.ksgf";
    std::ofstream(bad, std::ios::binary) << "NOPE1 and more";
    CHECK_THROWS_AS(velocity::read_snapshot(bad), FormatError);
  }
}
