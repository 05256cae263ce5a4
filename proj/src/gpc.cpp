#include "ksg/gpc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ksg/common.hpp"

namespace ksg::gpc {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double normalized_legendre(int k, double z) {
  require(k >= 0, "normalized_legendre: negative degree");
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = z;
  for (int j = 1; j < k; ++j) {
    const double p2 = ((2.0 * j + 1.0) * z * p1 - j * p0) / (j + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return std::sqrt(2.0 * k + 1.0) * p1;
}

Basis::Basis(int order, int quad_order) : order_(order) {
  require(order >= 0, "gpc basis: order K must be non-negative");
  // degree-2K products need 2Q - 1 >= 2K
  require(quad_order >= order + 1,
          "gpc basis: quadrature order " + std::to_string(quad_order) +
              " cannot integrate degree-" + std::to_string(2 * order) + " products exactly");
  gauss_legendre(quad_order, nodes_, weights_);
  for (auto& w : weights_) w *= 0.5;
  table_.resize(static_cast<std::size_t>(size()) * nodes_.size());
  for (int k = 0; k <= order_; ++k)
    for (std::size_t q = 0; q < nodes_.size(); ++q)
      table_[k * nodes_.size() + q] = normalized_legendre(k, nodes_[q]);
}

double Basis::eval(int k, double z) const {
  require(k >= 0 && k <= order_, "gpc basis: degree " + std::to_string(k) + " outside [0, K]");
  return normalized_legendre(k, z);
}

std::vector<double> Basis::project(std::span<const double> values) const {
  require(values.size() == nodes_.size(), "project_z: expected one value per quadrature node");
  std::vector<double> c(size(), 0.0);
  for (int k = 0; k <= order_; ++k) {
    double acc = 0.0;
    for (std::size_t q = 0; q < nodes_.size(); ++q) acc += weights_[q] * values[q] * at_node(k, q);
    c[k] = acc;
  }
  return c;
}

double Basis::reconstruct_at_node(std::span<const double> coeffs, int q) const {
  double acc = 0.0;
  const int n = std::min<int>(static_cast<int>(coeffs.size()), size());
  for (int k = 0; k < n; ++k) acc += coeffs[k] * at_node(k, q);
  return acc;
}

std::vector<double> Basis::gram() const {
  const int n = size();
  std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < nodes_.size(); ++q) acc += weights_[q] * at_node(i, q) * at_node(j, q);
      g[i * n + j] = acc;
    }
  return g;
}

std::vector<double> derivative_coeffs(std::span<const double> coeffs) {
  // Psi^k' = sum_{j < k, k - j odd} sqrt(2k+1) sqrt(2j+1) Psi^j
  const int n = static_cast<int>(coeffs.size());
  std::vector<double> d(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = j + 1; k < n; k += 2) acc += std::sqrt(2.0 * k + 1.0) * coeffs[k];
    d[j] = std::sqrt(2.0 * j + 1.0) * acc;
  }
  return d;
}

TripleProductTensor triple_product_tensor(const Basis& basis, const std::function<double(double)>& b,
                                          int b_degree) {
  const int order = basis.order();
  const int n = basis.size();
  const int nq = basis.quad_order();
  if (b_degree >= 0) {
    const int needed = (3 * order + b_degree + 2) / 2;  // ceil((3K + deg + 1) / 2)
    require(nq >= needed, "triple_product_tensor: quadrature order " + std::to_string(nq) +
                              " below the exactness bound " + std::to_string(needed));
  }
  std::vector<double> bq(nq);
  for (int q = 0; q < nq; ++q) {
    bq[q] = b(basis.nodes()[q]);
    if (!(bq[q] > 0.0))
      throw PreconditionError("triple_product_tensor: b(z) = " + std::to_string(bq[q]) +
                              " is not positive at z = " + std::to_string(basis.nodes()[q]));
  }

  const auto idx = [n](int k, int i, int j) { return (static_cast<std::size_t>(k) * n + i) * n + j; };
  std::vector<double> raw(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int q = 0; q < nq; ++q)
          acc += basis.weights()[q] * bq[q] * basis.at_node(k, q) * basis.at_node(i, q) * basis.at_node(j, q);
        raw[idx(k, i, j)] = acc;
      }

  double asym = 0.0;
  std::vector<double> sym(raw.size(), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = k; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const std::array<std::size_t, 6> perms = {idx(k, i, j), idx(k, j, i), idx(i, k, j),
                                                  idx(i, j, k), idx(j, k, i), idx(j, i, k)};
        double lo = raw[perms[0]], hi = raw[perms[0]], sum = 0.0;
        for (auto p : perms) {
          lo = std::min(lo, raw[p]);
          hi = std::max(hi, raw[p]);
          sum += raw[p];
        }
        asym = std::max(asym, hi - lo);
        const double mean = sum / 6.0;
        for (auto p : perms) sym[p] = mean;
      }
  return TripleProductTensor(order, std::move(sym), asym);
}

}  // namespace ksg::gpc
