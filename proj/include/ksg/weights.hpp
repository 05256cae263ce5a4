#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ksg/common.hpp"
#include "ksg/kernel.hpp"
#include "ksg/velocity.hpp"

namespace ksg::weights {

/// Radial Gauss-Legendre order on [0, R] and uniform (trapezoid) orders for the angle of q
/// and for sigma. Angular orders must be even so the angle grids are antipodally symmetric.
struct QuadratureSpec {
  int radial = 32;
  int angular_q = 64;
  int angular_sigma = 64;

  /// Orders that resolve every mode pair of an N grid: max(32, 4N) radial, max(64, 8N) angular.
  static QuadratureSpec defaults(int N);
  QuadratureSpec doubled() const { return {2 * radial, 2 * angular_q, 2 * angular_sigma}; }
  bool operator==(const QuadratureSpec&) const = default;
};

/// Everything the table depends on; hashed to detect stale caches.
struct TableKey {
  int N;
  double L;
  double R;
  double gamma;
  double angular_constant;
  QuadratureSpec quad;

  std::uint64_t hash() const;
};

TableKey make_key(const velocity::VelocityGrid& grid, const kernel::KernelModel& kernel, QuadratureSpec quad);

/// G(l, m) for l, m in {-N..N}^2, stored dense in (l1, l2, m1, m2) row-major order.
class WeightTable {
 public:
  WeightTable(TableKey key, std::vector<Complex> entries);

  const TableKey& key() const { return key_; }
  int N() const { return key_.N; }
  std::size_t modes() const { return modes_; }

  std::size_t index(int l1, int l2, int m1, int m2) const {
    const int M = 2 * key_.N + 1;
    return (static_cast<std::size_t>(l1 + key_.N) * M + (l2 + key_.N)) * modes_ +
           static_cast<std::size_t>(m1 + key_.N) * M + (m2 + key_.N);
  }
  Complex operator()(int l1, int l2, int m1, int m2) const { return entries_[index(l1, l2, m1, m2)]; }

  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& mutable_entries() { return entries_; }

 private:
  TableKey key_;
  std::size_t modes_;
  std::vector<Complex> entries_;
};

/**
 * G(l, m) = int_{B_R} e^{-i pi m.q / L} int_{S^1} Phi(|q|) b_ang (e^{i pi (l+m).(q - |q| sigma) / 2L} - 1) dsigma dq
 * with Gauss-Legendre in |q| and trapezoid rules in both angles.
 *
 * The double angular sum factors into products of the one-angle sums
 * A(rho, p) = sum_j w_j exp(i pi rho p.omega_j / 2L), so each entry is
 *   b_ang sum_r w_r rho_r Phi(rho_r) [A_q(rho_r, l-m) A_sigma(rho_r, l+m) - |S^1| A_q(rho_r, 2m)],
 * an exact regrouping of the same quadrature nodes.
 */
WeightTable compute_weight_table(const velocity::VelocityGrid& grid, const kernel::KernelModel& kernel,
                                 QuadratureSpec quad);

/// Cache file "KSGW1": little-endian header (N, L, R, gamma, angular constant, three quadrature
/// orders, parameter hash) then G as float64 (re, im) pairs in (l1, l2, m1, m2) order.
void save_table(const WeightTable& table, const std::filesystem::path& path);
/// Loads and checks the header against its own hash.
WeightTable load_table(const std::filesystem::path& path);
/// As above and additionally rejects a table whose parameters differ from `expected`.
WeightTable load_table(const std::filesystem::path& path, const TableKey& expected);

/// Load `dir/weights_N<N>_<hash>.ksgw` when present and matching, otherwise build and store it.
WeightTable load_or_compute(const std::filesystem::path& dir, const velocity::VelocityGrid& grid,
                            const kernel::KernelModel& kernel, QuadratureSpec quad);

std::filesystem::path cache_path(const std::filesystem::path& dir, const TableKey& key);

}  // namespace ksg::weights
