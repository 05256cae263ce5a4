#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ksg/common.hpp"
#include "ksg/gpc.hpp"
#include "ksg/kernel.hpp"
#include "ksg/velocity.hpp"
#include "ksg/weights.hpp"

namespace ksg::collision {

/// Entries of S below this magnitude are skipped in the gPC double sum.
inline constexpr double kTensorSkip = 1e-15;

/**
 * Scratch space bound to one weight table and one triple-product tensor.
 * The table must outlive the workspace.
 */
class CollisionWorkspace {
 public:
  CollisionWorkspace(const weights::WeightTable& table, const gpc::TripleProductTensor& tensor);

  int N() const { return N_; }
  int K() const { return K_; }

 private:
  friend void eval_galerkin_rhs(const velocity::SpectralField&, CollisionWorkspace&, std::span<Complex>);

  struct Pair {
    int i, j;
  };

  const weights::WeightTable* table_;
  gpc::TripleProductTensor tensor_;
  int N_;
  int K_;
  bool real_weights_;
  std::vector<double> g_real_;
  std::vector<Pair> pairs_;
  std::vector<double> f_re_, f_im_;
  std::vector<double> acc_re_, acc_im_;
};

/**
 * Q^{R,k}_n = sum_{i,j} S[k][i][j] sum_{l + m = n} G(l, m) f^i_l f^j_m with l, m restricted
 * to the mode cube. `out` has the field's coefficient layout.
 */
void eval_galerkin_rhs(const velocity::SpectralField& field, CollisionWorkspace& ws, std::span<Complex> out);

/// Convenience overload returning a fresh field (time copied from the input).
velocity::SpectralField eval_galerkin_rhs(const velocity::SpectralField& field, CollisionWorkspace& ws);

// ---------------------------------------------------------------------------------------------
// Direct quadrature of the continuous truncated operator, independent of the weight table.

struct OracleQuadrature {
  int radial = 24;
  int angular_q = 48;
  int angular_sigma = 48;

  OracleQuadrature doubled() const { return {2 * radial, 2 * angular_q, 2 * angular_sigma}; }
};

/// Values of f at an arbitrary velocity, one per z node.
using PointFunction = std::function<void(double v1, double v2, std::span<double> out)>;

/// A PointFunction that sums the periodic Fourier x gPC series of `field` at the basis nodes.
PointFunction field_evaluator(const velocity::SpectralField& field, const gpc::Basis& basis);

struct OracleValues {
  std::vector<double> gain;  ///< layout [q][j1][j2]
  std::vector<double> loss;
};

/**
 * Q^{R,+} and Q^{R,-} = f L^R[f] at every point of `target` and every z node, with
 * v' = v - (q - |q| sigma) / 2 and v'_* = v - (q + |q| sigma) / 2.
 * `b_at_nodes[q]` is the uncertain factor b(z_q).
 */
OracleValues oracle_split(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                          const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad);

std::vector<double> oracle_gain(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad);
std::vector<double> oracle_loss(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad);
std::vector<double> oracle_direct_QR(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                     const kernel::KernelModel& kernel, const PointFunction& f,
                                     OracleQuadrature quad);

/// Grid fine enough that sampling Q^R of an N-mode field (modes up to 2N) does not alias
/// into the N cube: N_fine = ceil(3N / 2).
velocity::VelocityGrid oracle_grid(const velocity::VelocityGrid& grid);

/// Forward transform of oracle values on `fine` restricted to the N cube of the result.
velocity::SpectralField oracle_project(const velocity::VelocityGrid& fine, const gpc::Basis& basis,
                                       std::span<const double> values, int N);

/// Projected oracle Q^R(f, f) for a spectral field, on the coefficient layout of `field`.
velocity::SpectralField oracle_rhs(const velocity::SpectralField& field, const gpc::Basis& basis,
                                   const kernel::KernelModel& kernel, OracleQuadrature quad);

}  // namespace ksg::collision
