#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ksg::gpc {

enum class Family { LegendreUniform };

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Legendre polynomial normalized against pi(z) = 1/2 on [-1, 1]: sqrt(2k+1) P_k(z).
double normalized_legendre(int k, double z);

/**
 * Orthonormal polynomial basis in the random variable z with its Gauss quadrature.
 *
 * The quadrature weights already contain the density pi(z) = 1/2, so they sum to one
 * and integrate E[g] = sum_q w_q g(z_q) for polynomials of degree < 2 * quad_order.
 */
class Basis {
 public:
  /// Default quadrature order used when none is requested: 2K + 8.
  static int default_quad_order(int order) { return 2 * order + 8; }

  Basis(int order, int quad_order);
  explicit Basis(int order) : Basis(order, default_quad_order(order)) {}

  Family family() const { return Family::LegendreUniform; }
  int order() const { return order_; }
  int size() const { return order_ + 1; }
  int quad_order() const { return static_cast<int>(nodes_.size()); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Psi^k(z) for 0 <= k <= K.
  double eval(int k, double z) const;

  /// Psi^k at quadrature node q (tabulated).
  double at_node(int k, int q) const { return table_[static_cast<std::size_t>(k) * nodes_.size() + q]; }

  /// c_k = sum_q w_q values[q] Psi^k(z_q).
  std::vector<double> project(std::span<const double> values_at_nodes) const;

  /// Value of the expansion sum_k c_k Psi^k at node q.
  double reconstruct_at_node(std::span<const double> coeffs, int q) const;

  /// Row-major (K+1) x (K+1) Gram matrix computed with the basis quadrature.
  std::vector<double> gram() const;

 private:
  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> table_;
};

/// Coefficients of d/dz of an expansion in the same basis; the top coefficient is zero.
std::vector<double> derivative_coeffs(std::span<const double> coeffs);

/// S[k][i][j] = E[b Psi^k Psi^i Psi^j], fully permutation symmetric.
class TripleProductTensor {
 public:
  TripleProductTensor(int order, std::vector<double> entries, double raw_asymmetry)
      : order_(order), entries_(std::move(entries)), raw_asymmetry_(raw_asymmetry) {}

  int order() const { return order_; }
  int size() const { return order_ + 1; }

  double operator()(int k, int i, int j) const {
    const auto n = static_cast<std::size_t>(order_ + 1);
    return entries_[(k * n + i) * n + j];
  }

  /// Largest |S[k][i][j] - S[perm]| seen before symmetrization.
  double raw_asymmetry() const { return raw_asymmetry_; }

  std::span<const double> entries() const { return entries_; }

 private:
  int order_;
  std::vector<double> entries_;
  double raw_asymmetry_;
};

/**
 * Assemble S with the basis quadrature. b must be strictly positive at every node.
 * When b_degree >= 0 the quadrature is also checked to integrate b * Psi^k Psi^i Psi^j exactly.
 */
TripleProductTensor triple_product_tensor(const Basis& basis, const std::function<double(double)>& b,
                                          int b_degree = -1);

}  // namespace ksg::gpc
