#include "ksg/initial.hpp"

#include <algorithm>
#include <cmath>

#include "ksg/bkw.hpp"

namespace ksg::initial {

InitialCondition InitialCondition::bkw(double t0, const kernel::KernelModel& kernel) {
  require(t0 >= 0.0, "bkw initial condition: t0 must be non-negative");
  InitialCondition ic;
  ic.family_ = Family::Bkw;
  ic.t0_ = t0;
  ic.b_coeffs_ = kernel.b_coeffs();
  ic.angular_constant_ = kernel.angular_constant();
  ic.exact_available_ = kernel.gamma() == 0.0;
  return ic;
}

InitialCondition InitialCondition::bi_gaussian(Affine density, Affine temperature, double shift1, double shift2) {
  require(density.c0 - std::abs(density.c1) > 0.0, "bi-Gaussian: density must stay positive on [-1, 1]");
  require(temperature.c0 - std::abs(temperature.c1) > 0.0, "bi-Gaussian: temperature must stay positive on [-1, 1]");
  InitialCondition ic;
  ic.family_ = Family::BiGaussian;
  ic.density_ = density;
  ic.temperature_ = temperature;
  ic.shift1_ = shift1;
  ic.shift2_ = shift2;
  return ic;
}

std::string InitialCondition::name() const { return family_ == Family::Bkw ? "bkw" : "bigaussian"; }

double InitialCondition::rate(double z) const {
  double b = 0.0;
  for (auto it = b_coeffs_.rbegin(); it != b_coeffs_.rend(); ++it) b = b * z + *it;
  return 2.0 * kPi * angular_constant_ * b;
}

double InitialCondition::operator()(double v1, double v2, double z) const {
  if (family_ == Family::Bkw) return bkw::density(t0_, v1 * v1 + v2 * v2, rate(z));
  const double T = temperature_.at(z);
  const double norm = density_.at(z) / (2.0 * (2.0 * kPi * T));
  const double a1 = v1 - shift1_, a2 = v2 - shift2_;
  const double b1 = v1 + shift1_, b2 = v2 + shift2_;
  return norm * (std::exp(-(a1 * a1 + a2 * a2) / (2.0 * T)) + std::exp(-(b1 * b1 + b2 * b2) / (2.0 * T)));
}

double InitialCondition::effective_support(double tol) const {
  constexpr int kAngles = 64;
  constexpr double kStep = 0.01;
  constexpr double kMaxRadius = 60.0;
  const double zs[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double peak = 0.0;
  std::vector<double> ring_max;
  for (double r = 0.0; r <= kMaxRadius; r += kStep) {
    double m = 0.0;
    for (int a = 0; a < kAngles; ++a) {
      const double th = 2.0 * kPi * a / kAngles;
      for (double z : zs) m = std::max(m, (*this)(r * std::cos(th), r * std::sin(th), z));
    }
    ring_max.push_back(m);
    peak = std::max(peak, m);
  }
  for (std::size_t i = ring_max.size(); i-- > 0;)
    if (ring_max[i] > tol * peak) return (i + 1) * kStep;
  return 0.0;
}

double InitialCondition::exact(double t, double v1, double v2, double z) const {
  require(has_exact_solution(), "exact solution is only available for BKW data with a Maxwell kernel");
  return bkw::density(t0_ + t, v1 * v1 + v2 * v2, rate(z));
}

}  // namespace ksg::initial
