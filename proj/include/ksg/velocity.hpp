#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "ksg/common.hpp"
#include "ksg/gpc.hpp"

namespace ksg::velocity {

inline constexpr int kDim = 2;

struct Truncation {
  double R;  ///< cut-off radius of the relative velocity
  double L;  ///< half length of the periodic box [-L, L]^2
};

/// R = 2S and the smallest anti-aliasing box L = (3 + sqrt 2) / 2 * S.
Truncation truncation_params(double support_radius);

/**
 * Periodic velocity box [-L, L)^2 with modes n in {-N..N}^2 and M = 2N + 1 uniform
 * points per axis (critical sampling, so the discrete transforms are square).
 */
class VelocityGrid {
 public:
  VelocityGrid(int N, double L);

  int N() const { return N_; }
  double L() const { return L_; }
  int points_per_axis() const { return 2 * N_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(points_per_axis()) * points_per_axis(); }
  double spacing() const { return 2.0 * L_ / points_per_axis(); }
  double cell_measure() const { return spacing() * spacing(); }
  double box_measure() const { return 4.0 * L_ * L_; }
  double node(int j) const { return -L_ + j * spacing(); }

  /// Flat offset of mode (n1, n2), each in [-N, N].
  std::size_t mode_index(int n1, int n2) const {
    return static_cast<std::size_t>(n1 + N_) * points_per_axis() + (n2 + N_);
  }
  /// pi n / L, the wavenumber of mode component n.
  double wavenumber(int n) const { return kPi * n / L_; }

  bool operator==(const VelocityGrid& other) const { return N_ == other.N_ && L_ == other.L_; }

 private:
  int N_;
  double L_;
};

/**
 * Coefficients f^k_n of the joint Fourier x gPC expansion.
 * Layout: coeffs[(k * M + n1 + N) * M + n2 + N].
 */
class SpectralField {
 public:
  SpectralField(VelocityGrid grid, int K, double t = 0.0);

  const VelocityGrid& grid() const { return grid_; }
  int order() const { return K_; }
  int gpc_size() const { return K_ + 1; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  std::size_t slice_size() const { return grid_.size(); }
  std::span<Complex> slice(int k) { return std::span<Complex>(coeffs_).subspan(k * slice_size(), slice_size()); }
  std::span<const Complex> slice(int k) const {
    return std::span<const Complex>(coeffs_).subspan(k * slice_size(), slice_size());
  }

  Complex& at(int k, int n1, int n2) { return coeffs_[k * slice_size() + grid_.mode_index(n1, n2)]; }
  const Complex& at(int k, int n1, int n2) const { return coeffs_[k * slice_size() + grid_.mode_index(n1, n2)]; }

  std::vector<Complex>& coeffs() { return coeffs_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Largest |f^k_n - conj(f^k_{-n})| over all k, n.
  double hermitian_defect() const;

 private:
  VelocityGrid grid_;
  int K_;
  double t_;
  std::vector<Complex> coeffs_;
};

/// In-place 2-D discrete Fourier analysis of one M x M slice (values -> coefficients).
void forward_v(const VelocityGrid& grid, std::span<const Complex> values, std::span<Complex> coeffs);
/// Synthesis of one slice at the grid points (coefficients -> values).
void inverse_v(const VelocityGrid& grid, std::span<const Complex> coeffs, std::span<Complex> values);

/**
 * Nodal values are laid out [q][j1][j2] over the quadrature nodes of the basis and the
 * uniform velocity grid. Forward = Fourier analysis in v composed with project_z.
 */
SpectralField forward_transform(const VelocityGrid& grid, const gpc::Basis& basis,
                                std::span<const double> nodal_values, double t = 0.0);

/// Evaluate the expansion at every (z node, grid point); layout [q][j1][j2].
std::vector<double> inverse_transform(const SpectralField& field, const gpc::Basis& basis);

/// Physical values of each gPC slice on the grid; layout [k][j1][j2].
std::vector<double> slice_values(const SpectralField& field);

/// f^k(v) for all k at an arbitrary point, through the periodic Fourier series.
void evaluate_point(const SpectralField& field, double v1, double v2, std::span<double> out);

/// Fourier coefficients of f(., z_q): sum_k f^k_n Psi^k(z_q).
std::vector<Complex> coeffs_at_node(const SpectralField& field, const gpc::Basis& basis, int q);

/// sum_{|nu| <= k} prod_i (pi n_i / L)^{2 nu_i}, the H^k_v multiplier of mode n.
double sobolev_weight(const VelocityGrid& grid, int n1, int n2, int k);

/// ||f(., z_q)||_{H^k_v} from the coefficients.
double sobolev_norm_v(const SpectralField& field, const gpc::Basis& basis, int k, int q);

/// Uniform-grid L^p norm of one physical slice, p in {1, 2, inf} (pass p = 0 for inf).
double lp_norm_v(const VelocityGrid& grid, std::span<const double> values, int p);

/// Copy into a grid with N_small <= N by keeping the central modes.
SpectralField restrict_modes(const SpectralField& field, int N_small);
/// Zero-pad to a grid with N_large >= N on the same box.
SpectralField pad_modes(const SpectralField& field, int N_large);
/// Zero-pad or truncate the gPC dimension to order K.
SpectralField with_gpc_order(const SpectralField& field, int K);

/// Snapshot file "KSGF1": little-endian header (d, N, K as uint32; L, t as float64) then
/// (re, im) float64 pairs in (k, n1, n2) row-major order.
void write_snapshot(const std::filesystem::path& path, const SpectralField& field);
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace ksg::velocity
