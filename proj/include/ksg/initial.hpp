#pragma once

#include <string>
#include <vector>

#include "ksg/kernel.hpp"

namespace ksg::initial {

enum class Family { Bkw, BiGaussian };

/// c0 + c1 z.
struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;
  double at(double z) const { return c0 + c1 * z; }
};

/**
 * Initial data f0(v, z) on the whole plane.
 *
 * Bkw: the BKW profile at time t0 with collision frequency taken from the kernel's b(z).
 * BiGaussian: density(z) / 2 * [M(v - u; T(z)) + M(v + u; T(z))] with M the isotropic
 * Maxwellian of temperature T.
 */
class InitialCondition {
 public:
  static InitialCondition bkw(double t0, const kernel::KernelModel& kernel);
  static InitialCondition bi_gaussian(Affine density, Affine temperature, double shift1, double shift2);

  Family family() const { return family_; }
  std::string name() const;
  double t0() const { return t0_; }

  double operator()(double v1, double v2, double z) const;

  /// Smallest radius beyond which f0 <= tol * max f0 for every z in [-1, 1] (sampled).
  double effective_support(double tol) const;

  /// BKW with a Maxwell kernel has a closed-form solution.
  bool has_exact_solution() const { return family_ == Family::Bkw && exact_available_; }
  /// Exact solution at simulation time t (the profile at t0 + t).
  double exact(double t, double v1, double v2, double z) const;

 private:
  InitialCondition() = default;

  Family family_ = Family::Bkw;
  double t0_ = 0.0;
  std::vector<double> b_coeffs_;
  double angular_constant_ = 0.0;
  bool exact_available_ = false;
  Affine density_{1.0, 0.0};
  Affine temperature_{1.0, 0.0};
  double shift1_ = 0.0, shift2_ = 0.0;

  double rate(double z) const;
};

}  // namespace ksg::initial
