#include "ksg/bkw.hpp"

#include <cmath>

namespace ksg::bkw {

double rate(const kernel::KernelModel& kernel, double z) {
  return 2.0 * kPi * kernel.angular_constant() * kernel.b(z);
}

double sigma(double t, double rate) { return 1.0 - 0.5 * std::exp(-rate * t / 8.0); }

double density(double t, double v_sq, double rate) {
  const double s = sigma(t, rate);
  return std::exp(-v_sq / (2.0 * s)) / (2.0 * kPi * s * s) * ((2.0 * s - 1.0) + (1.0 - s) * v_sq / (2.0 * s));
}

double time_derivative(double t, double v_sq, double rate) {
  const double s = sigma(t, rate);
  const double e = std::exp(-v_sq / (2.0 * s));
  const double poly = (2.0 * s - 1.0) / (s * s) + (1.0 - s) * v_sq / (2.0 * s * s * s);
  const double dpoly = 2.0 * (1.0 - s) / (s * s * s) + v_sq * (2.0 * s - 3.0) / (2.0 * s * s * s * s);
  const double df_ds = e / (2.0 * kPi) * (poly * v_sq / (2.0 * s * s) + dpoly);
  const double ds_dt = rate / 16.0 * std::exp(-rate * t / 8.0);
  return df_ds * ds_dt;
}

}  // namespace ksg::bkw
