#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ksg/kernel.hpp"

using namespace ksg;
using doctest::Approx;

namespace {

const kernel::CheckResult& find(const std::vector<kernel::CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  return checks.front();
}

}  // namespace

TEST_CASE("truncated kinetic part") {
  kernel::KernelModel maxwell(0.0, {1.0}, 2.0);
  CHECK(maxwell.kinetic(1.5) == 1.0);
  CHECK(maxwell.kinetic(0.0) == 1.0);
  kernel::KernelModel hard(1.0, {1.0}, 2.0);
  CHECK(hard.kinetic(0.5) == 0.5);
  CHECK(hard.kinetic(2.5) == 0.0);
  CHECK(hard.kinetic(2.0) == 2.0);
  CHECK_THROWS_AS(hard.kinetic(-0.1), PreconditionError);

  kernel::KernelModel vhs(0.4, {1.0}, 3.0);
  double prev = -1.0;
  for (double q = 0.0; q <= 3.0; q += 0.05) {
    CHECK(vhs.kinetic(q) >= prev);
    prev = vhs.kinetic(q);
  }
  for (double q = 3.01; q < 10.0; q += 0.5) CHECK(vhs.kinetic(q) == 0.0);
}

TEST_CASE("uncertain factor") {
  kernel::KernelModel k(0.0, {1.0, 0.2, 0.05}, 4.0);
  CHECK(k.b(0.5) == Approx(1.0 + 0.1 + 0.0125).epsilon(1e-15));
  CHECK(k.b_degree() == 2);
  CHECK_FALSE(k.deterministic());
  CHECK(kernel::KernelModel(0.0, {2.0, 0.0}, 1.0).deterministic());
  CHECK(k.angular_constant() == Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
  CHECK_THROWS_AS(kernel::KernelModel(0.0, {1, 2, 3, 4}, 1.0), PreconditionError);
  CHECK_THROWS_AS(kernel::KernelModel(0.0, {}, 1.0), PreconditionError);
  CHECK_THROWS_AS(kernel::KernelModel(0.0, {1.0}, 0.0), PreconditionError);
}

TEST_CASE("validation report") {
  SUBCASE("Maxwell and hard-sphere defaults pass") {
    CHECK(kernel::all_passed(kernel::validate(kernel::KernelModel(0.0, {1.0}, 5.0))));
    CHECK(kernel::all_passed(kernel::validate(kernel::KernelModel(1.0, {1.0, 0.2}, 5.0))));
  }
  SUBCASE("b = 1 - 2z fails positivity near z = 1") {
    const auto checks = kernel::validate(kernel::KernelModel(0.0, {1.0, -2.0}, 5.0));
    const auto& pos = find(checks, "b_positive");
    CHECK_FALSE(pos.passed);
    CHECK(pos.witness > 0.9);
    CHECK_FALSE(kernel::all_passed(checks));
  }
  SUBCASE("gamma = 1.5 fails the range check") {
    const auto checks = kernel::validate(kernel::KernelModel(1.5, {1.0}, 5.0));
    CHECK_FALSE(find(checks, "gamma_range").passed);
    CHECK(find(checks, "gamma_range").witness == 1.5);
    CHECK(find(checks, "b_positive").passed);
  }
}
