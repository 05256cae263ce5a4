#pragma once

#include <string>
#include <vector>

#include "ksg/common.hpp"

namespace ksg::kernel {

/**
 * VHS collision kernel B = b_ang * b(z) * |q|^gamma truncated to |q| <= R.
 *
 * The angular part is the constant b_ang (isotropic scattering); all uncertainty sits in
 * the scalar factor b(z) = b0 + b1 z + b2 z^2.
 */
class KernelModel {
 public:
  static constexpr double kDefaultAngularConstant = 1.0 / (2.0 * kPi);

  KernelModel(double gamma, std::vector<double> b_coeffs, double R,
              double angular_constant = kDefaultAngularConstant);

  double gamma() const { return gamma_; }
  double R() const { return R_; }
  double angular_constant() const { return angular_constant_; }
  const std::vector<double>& b_coeffs() const { return b_coeffs_; }
  int b_degree() const;
  bool deterministic() const { return b_degree() == 0; }

  /// 1_{|q| <= R} |q|^gamma.
  double kinetic(double q_mag) const;
  double b(double z) const;

 private:
  double gamma_;
  std::vector<double> b_coeffs_;
  double R_;
  double angular_constant_;
};

struct CheckResult {
  std::string name;
  bool passed;
  double witness;  ///< point where the check is tightest (z for positivity, gamma or R otherwise)
  std::string detail;
};

/// Positivity of b on [-1, 1], boundedness of the truncated kinetic part and gamma in [0, 1].
std::vector<CheckResult> validate(const KernelModel& model);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace ksg::kernel
