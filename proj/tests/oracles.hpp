#pragma once

// Independent reference computations used only by the tests. None of these share code paths
// with the library routines they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ksg/collision.hpp"
#include "ksg/gpc.hpp"
#include "ksg/velocity.hpp"
#include "ksg/weights.hpp"

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

/// Legendre P_k by the explicit three-term recurrence.
inline double legendre(int k, double z) {
  double p0 = 1.0, p1 = z;
  if (k == 0) return p0;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2 * n + 1) * z * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

inline double psi(int k, double z) { return std::sqrt(2.0 * k + 1.0) * legendre(k, z); }

/// E[b Psi^k Psi^i Psi^j] with pi = 1/2 by Simpson's rule.
inline double triple_product(const std::function<double(double)>& b, int k, int i, int j) {
  return 0.5 * simpson([&](double z) { return b(z) * psi(k, z) * psi(i, z) * psi(j, z); }, -1.0, 1.0, 20000);
}

/// Gauss-Legendre nodes and weights on [-1, 1]: Newton on the three-term recurrence.
inline void gl_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre(n, z);
      dp = n * (z * p - legendre(n - 1, z)) / (z * z - 1.0);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double p = legendre(n, z);
    dp = n * (z * p - legendre(n - 1, z)) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// G(l, m) by the literal quadruple loop: Gauss-Legendre in |q|, trapezoid in the angle of q
/// and in sigma, complex exponentials evaluated directly.
inline Complex naive_weight(int l1, int l2, int m1, int m2, double L, double R, double gamma, double b_ang,
                            int radial, int angular_q, int angular_sigma) {
  std::vector<double> x, w;
  gl_nodes(radial, x, w);
  Complex total{};
  for (int r = 0; r < radial; ++r) {
    const double rho = 0.5 * R * (x[r] + 1.0), wr = 0.5 * R * w[r];
    const double phi = gamma == 0.0 ? 1.0 : std::pow(rho, gamma);
    for (int a = 0; a < angular_q; ++a) {
      const double th = 2.0 * kPi * a / angular_q;
      const double q1 = rho * std::cos(th), q2 = rho * std::sin(th);
      const Complex outer = std::exp(Complex(0.0, -kPi * (m1 * q1 + m2 * q2) / L));
      Complex inner{};
      for (int s = 0; s < angular_sigma; ++s) {
        const double ph = 2.0 * kPi * s / angular_sigma;
        const double d1 = q1 - rho * std::cos(ph), d2 = q2 - rho * std::sin(ph);
        inner += (std::exp(Complex(0.0, kPi * ((l1 + m1) * d1 + (l2 + m2) * d2) / (2.0 * L))) - 1.0) *
                 (2.0 * kPi / angular_sigma);
      }
      total += wr * rho * (2.0 * kPi / angular_q) * outer * phi * b_ang * inner;
    }
  }
  return total;
}

/// Continuous G(l, m): the angular integrals reduce to Bessel functions,
/// G = 4 pi^2 b_ang int_0^R rho Phi [J0(pi rho |l-m| / 2L) J0(pi rho |l+m| / 2L) - J0(pi rho |m| / L)] drho.
inline double bessel_weight(int l1, int l2, int m1, int m2, double L, double R, double gamma, double b_ang) {
  const double a = std::hypot(l1 - m1, l2 - m2) * kPi / (2.0 * L);
  const double b = std::hypot(l1 + m1, l2 + m2) * kPi / (2.0 * L);
  const double c = std::hypot(m1, m2) * kPi / L;
  std::vector<double> x, w;
  gl_nodes(160, x, w);
  double acc = 0.0;
  for (int r = 0; r < 160; ++r) {
    const double rho = 0.5 * R * (x[r] + 1.0);
    const double phi = gamma == 0.0 ? 1.0 : std::pow(rho, gamma);
    acc += 0.5 * R * w[r] * rho * phi *
           (std::cyl_bessel_j(0.0, a * rho) * std::cyl_bessel_j(0.0, b * rho) - std::cyl_bessel_j(0.0, c * rho));
  }
  return 4.0 * kPi * kPi * b_ang * acc;
}

/// Q^k_n by the textbook double loop over l in the cube with m = n - l.
inline ksg::velocity::SpectralField naive_rhs(const ksg::velocity::SpectralField& f,
                                              const ksg::weights::WeightTable& table,
                                              const ksg::gpc::TripleProductTensor& S) {
  const int N = f.grid().N(), K = f.order();
  ksg::velocity::SpectralField out(f.grid(), K, f.time());
  for (int k = 0; k <= K; ++k)
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n2 = -N; n2 <= N; ++n2) {
        Complex acc{};
        for (int i = 0; i <= K; ++i)
          for (int j = 0; j <= K; ++j)
            for (int l1 = -N; l1 <= N; ++l1)
              for (int l2 = -N; l2 <= N; ++l2) {
                const int m1 = n1 - l1, m2 = n2 - l2;
                if (std::abs(m1) > N || std::abs(m2) > N) continue;
                acc += S(k, i, j) * table(l1, l2, m1, m2) * f.at(i, l1, l2) * f.at(j, m1, m2);
              }
        out.at(k, n1, n2) = acc;
      }
  return out;
}

/// Deterministic pseudo-random numbers in [-1, 1] (fixed sequence, no library RNG).
class Lcg {
 public:
  explicit Lcg(unsigned long long seed) : state_(seed) {}
  double next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state_ >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
  }

 private:
  unsigned long long state_;
};

/// A Hermitian field with coefficients decaying like exp(-|n|^2 / 4) and gPC weight 0.3^k.
inline ksg::velocity::SpectralField random_hermitian(const ksg::velocity::VelocityGrid& grid, int K,
                                                     unsigned long long seed) {
  Lcg rng(seed);
  const int N = grid.N();
  ksg::velocity::SpectralField f(grid, K);
  for (int k = 0; k <= K; ++k)
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n2 = -N; n2 <= N; ++n2) {
        if (n1 < 0 || (n1 == 0 && n2 < 0)) continue;
        const double amp = std::exp(-(n1 * n1 + n2 * n2) / 4.0) * std::pow(0.3, k);
        Complex c(amp * rng.next(), amp * rng.next());
        if (n1 == 0 && n2 == 0) c = Complex(amp * (1.0 + 0.1 * rng.next()), 0.0);
        f.at(k, n1, n2) = c;
        f.at(k, -n1, -n2) = std::conj(c);
      }
  return f;
}

}  // namespace oracle
