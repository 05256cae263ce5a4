#include "ksg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ksg::kernel {

KernelModel::KernelModel(double gamma, std::vector<double> b_coeffs, double R, double angular_constant)
    : gamma_(gamma), b_coeffs_(std::move(b_coeffs)), R_(R), angular_constant_(angular_constant) {
  require(!b_coeffs_.empty() && b_coeffs_.size() <= 3, "kernel: b(z) must be a polynomial of degree <= 2");
  require(R_ > 0.0, "kernel: cut-off radius R must be positive");
  require(angular_constant_ > 0.0, "kernel: angular constant must be positive");
}

int KernelModel::b_degree() const {
  int deg = static_cast<int>(b_coeffs_.size()) - 1;
  while (deg > 0 && b_coeffs_[deg] == 0.0) --deg;
  return deg;
}

double KernelModel::kinetic(double q_mag) const {
  require(q_mag >= 0.0, "eval_kinetic: |q| must be non-negative");
  if (q_mag > R_) return 0.0;
  if (gamma_ == 0.0) return 1.0;
  return std::pow(q_mag, gamma_);
}

double KernelModel::b(double z) const {
  double acc = 0.0;
  for (auto it = b_coeffs_.rbegin(); it != b_coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<CheckResult> validate(const KernelModel& model) {
  std::vector<CheckResult> out;

  {
    // Chebyshev points plus both endpoints
    constexpr int kSamples = 64;
    double zmin = 1.0, bmin = model.b(1.0);
    auto probe = [&](double z) {
      const double v = model.b(z);
      if (v < bmin) {
        bmin = v;
        zmin = z;
      }
    };
    probe(-1.0);
    for (int i = 0; i < kSamples; ++i) probe(std::cos(kPi * (i + 0.5) / kSamples));
    std::ostringstream msg;
    msg << "min b(z) = " << bmin << " at z = " << zmin;
    out.push_back({"b_positive", bmin > 0.0, zmin, msg.str()});
  }

  {
    const bool in_range = model.gamma() >= 0.0 && model.gamma() <= 1.0;
    std::ostringstream msg;
    msg << "gamma = " << model.gamma() << (in_range ? " in [0, 1]" : " outside [0, 1]");
    out.push_back({"gamma_range", in_range, model.gamma(), msg.str()});
  }

  {
    // sup of the truncated kinetic part is R^gamma for gamma >= 0
    const double sup = model.gamma() >= 0.0 ? std::pow(model.R(), model.gamma()) : INFINITY;
    const bool bounded = std::isfinite(sup);
    std::ostringstream msg;
    msg << "sup_{|q|<=R} Phi = " << sup;
    out.push_back({"kinetic_bounded", bounded, model.R(), msg.str()});
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace ksg::kernel
