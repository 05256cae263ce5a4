#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ksg/bkw.hpp"
#include "ksg/commands.hpp"
#include "ksg/initial.hpp"
#include "oracles.hpp"

using namespace ksg;
using doctest::Approx;

namespace {

// int_{R^2} g(|v|^2) dv by Simpson in the radius.
double radial_integral(const std::function<double(double)>& g) {
  return 2 * kPi * oracle::simpson([&](double r) { return r * g(r * r); }, 0.0, 20.0, 40000);
}

}  // namespace

TEST_CASE("BKW profile") {
  const kernel::KernelModel k(0.0, {1.0, 0.2}, 7.0);
  CHECK(bkw::rate(k, 0.5) == Approx(1.1).epsilon(1e-15));

  for (double t : {0.0, 0.3, 1.0, 5.0}) {
    const double lam = 0.9;
    CHECK(radial_integral([&](double v2) { return bkw::density(t, v2, lam); }) == Approx(1.0).epsilon(1e-12));
    CHECK(radial_integral([&](double v2) { return v2 * bkw::density(t, v2, lam); }) == Approx(2.0).epsilon(1e-12));
    for (double v2 : {0.0, 0.5, 2.0, 9.0}) {
      const double h = 1e-5;
      const double fd = (bkw::density(t + h, v2, lam) - bkw::density(t - h, v2, lam)) / (2 * h);
      CHECK(bkw::time_derivative(t, v2, lam) == Approx(fd).epsilon(1e-7).scale(1e-6));
    }
  }
  // at t = 0 the profile is |v|^2 exp(-|v|^2) / pi, non-negative
  for (double v2 : {0.0, 1.0, 4.0}) CHECK(bkw::density(0.0, v2, 1.0) == Approx(v2 * std::exp(-v2) / kPi).epsilon(1e-14));
  // long-time limit is the unit Maxwellian
  CHECK(bkw::density(400.0, 1.0, 1.0) == Approx(std::exp(-0.5) / (2 * kPi)).epsilon(1e-12));
}

TEST_CASE("BKW residual through the direct-quadrature oracle") {
  const auto tr = velocity::truncation_params(3.0);
  const velocity::VelocityGrid grid(4, tr.L);
  const gpc::Basis basis(1);
  const kernel::KernelModel k(0.0, {1.0, 0.2}, tr.R);
  const double res = cli::bkw_residual(grid, basis, k, 1.0, {});
  CHECK(res <= 1e-6);
  // a slightly wrong collision frequency is caught
  const kernel::KernelModel off(0.0, {1.0, 0.2}, tr.R, 1.02 * kernel::KernelModel::kDefaultAngularConstant);
  const velocity::VelocityGrid& g = grid;
  const double wrong = [&] {
    // evaluate the profile with the unperturbed rate against the perturbed operator
    const int nz = basis.quad_order();
    std::vector<double> b(nz), rates(nz);
    for (int q = 0; q < nz; ++q) {
      b[q] = off.b(basis.nodes()[q]);
      rates[q] = bkw::rate(k, basis.nodes()[q]);
    }
    const collision::PointFunction f = [&](double v1, double v2, std::span<double> out) {
      for (int q = 0; q < nz; ++q) out[q] = bkw::density(1.0, v1 * v1 + v2 * v2, rates[q]);
    };
    const auto Q = collision::oracle_direct_QR(g, b, off, f, {});
    double acc = 0.0;
    const int M = g.points_per_axis();
    for (int q = 0; q < nz; ++q)
      for (std::size_t p = 0; p < g.size(); ++p) {
        const double v1 = g.node(static_cast<int>(p) / M), v2 = g.node(static_cast<int>(p) % M);
        const double r = bkw::time_derivative(1.0, v1 * v1 + v2 * v2, rates[q]) - Q[q * g.size() + p];
        acc += basis.weights()[q] * r * r;
      }
    return std::sqrt(acc * g.cell_measure());
  }();
  CHECK(wrong > 100 * res);
}

TEST_CASE("initial condition families") {
  const kernel::KernelModel k(0.0, {1.0, 0.2}, 7.0);
  SUBCASE("BKW") {
    const auto ic = initial::InitialCondition::bkw(0.5, k);
    CHECK(ic.name() == "bkw");
    CHECK(ic.has_exact_solution());
    CHECK(ic(0.3, -0.4, 0.2) == Approx(bkw::density(0.5, 0.25, bkw::rate(k, 0.2))).epsilon(1e-15));
    CHECK(ic.exact(0.0, 0.3, -0.4, 0.2) == ic(0.3, -0.4, 0.2));
    CHECK(ic.exact(1.0, 0.3, -0.4, 0.2) == Approx(bkw::density(1.5, 0.25, bkw::rate(k, 0.2))).epsilon(1e-15));
    const auto hs = initial::InitialCondition::bkw(0.5, kernel::KernelModel(1.0, {1.0}, 7.0));
    CHECK_FALSE(hs.has_exact_solution());
    CHECK_THROWS_AS(hs.exact(0.0, 0.0, 0.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(initial::InitialCondition::bkw(-1.0, k), PreconditionError);
  }
  SUBCASE("bi-Gaussian") {
    const auto ic = initial::InitialCondition::bi_gaussian({1.0, 0.1}, {0.8, 0.2}, 1.0, 0.5);
    CHECK(ic.name() == "bigaussian");
    CHECK_FALSE(ic.has_exact_solution());
    for (double z : {-1.0, 0.0, 0.7}) {
      const double mass = oracle::simpson(
          [&](double v1) { return oracle::simpson([&](double v2) { return ic(v1, v2, z); }, -12, 12, 600); }, -12,
          12, 600);
      CHECK(mass == Approx(1.0 + 0.1 * z).epsilon(1e-10));
    }
    CHECK(ic(0.4, 0.1, 0.3) == Approx(ic(-0.4, -0.1, 0.3)).epsilon(1e-15));
    CHECK_THROWS_AS(initial::InitialCondition::bi_gaussian({0.1, 0.2}, {1.0, 0.0}, 0, 0), PreconditionError);
    CHECK_THROWS_AS(initial::InitialCondition::bi_gaussian({1.0, 0.0}, {0.5, -0.5}, 0, 0), PreconditionError);
  }
  SUBCASE("effective support") {
    // BKW at t0 = 0: f / max f = r^2 exp(1 - r^2); solve r^2 exp(1 - r^2) = tol on r > 1 by bisection
    const auto ic = initial::InitialCondition::bkw(0.0, k);
    for (double tol : {1e-3, 1e-2}) {
      double lo = 1.0, hi = 10.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * mid * std::exp(1 - mid * mid) > tol ? lo : hi) = mid;
      }
      CHECK(ic.effective_support(tol) == Approx(lo).epsilon(0.01 / lo));
    }
  }
}
