#include "ksg/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "binary_io.hpp"

namespace ksg::velocity {

Truncation truncation_params(double support_radius) {
  require(support_radius > 0.0, "truncation_params: support radius S must be positive");
  return {2.0 * support_radius, 0.5 * (3.0 + std::sqrt(2.0)) * support_radius};
}

VelocityGrid::VelocityGrid(int N, double L) : N_(N), L_(L) {
  require(N >= 0, "velocity grid: N must be non-negative");
  require(L > 0.0, "velocity grid: L must be positive");
}

SpectralField::SpectralField(VelocityGrid grid, int K, double t)
    : grid_(grid), K_(K), t_(t), coeffs_(static_cast<std::size_t>(K + 1) * grid.size()) {
  require(K >= 0, "spectral field: gPC order must be non-negative");
}

double SpectralField::hermitian_defect() const {
  const int N = grid_.N();
  double defect = 0.0;
  for (int k = 0; k <= K_; ++k)
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n2 = -N; n2 <= N; ++n2)
        defect = std::max(defect, std::abs(at(k, n1, n2) - std::conj(at(k, -n1, -n2))));
  return defect;
}

namespace {

// E[n][j] = exp(-i pi n v_j / L) = (-1)^n exp(-2 pi i n j / M), rows n = -N..N.
std::vector<Complex> analysis_matrix(const VelocityGrid& grid) {
  const int M = grid.points_per_axis();
  const int N = grid.N();
  std::vector<Complex> twiddle(M);
  for (int r = 0; r < M; ++r) twiddle[r] = std::polar(1.0, -2.0 * kPi * r / M);
  std::vector<Complex> E(static_cast<std::size_t>(M) * M);
  for (int n = -N; n <= N; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const int nm = ((n % M) + M) % M;
    for (int j = 0; j < M; ++j) E[(n + N) * M + j] = sign * twiddle[(nm * j) % M];
  }
  return E;
}

}  // namespace

void forward_v(const VelocityGrid& grid, std::span<const Complex> values, std::span<Complex> coeffs) {
  const int M = grid.points_per_axis();
  require(values.size() == grid.size() && coeffs.size() == grid.size(), "forward_v: slice shape mismatch");
  const auto E = analysis_matrix(grid);
  std::vector<Complex> tmp(grid.size());
  const double scale = 1.0 / M;
  for (int j1 = 0; j1 < M; ++j1)
    for (int n2 = 0; n2 < M; ++n2) {
      Complex acc{};
      for (int j2 = 0; j2 < M; ++j2) acc += values[j1 * M + j2] * E[n2 * M + j2];
      tmp[j1 * M + n2] = acc * scale;
    }
  for (int n1 = 0; n1 < M; ++n1)
    for (int n2 = 0; n2 < M; ++n2) {
      Complex acc{};
      for (int j1 = 0; j1 < M; ++j1) acc += E[n1 * M + j1] * tmp[j1 * M + n2];
      coeffs[n1 * M + n2] = acc * scale;
    }
}

void inverse_v(const VelocityGrid& grid, std::span<const Complex> coeffs, std::span<Complex> values) {
  const int M = grid.points_per_axis();
  require(values.size() == grid.size() && coeffs.size() == grid.size(), "inverse_v: slice shape mismatch");
  const auto E = analysis_matrix(grid);
  std::vector<Complex> tmp(grid.size());
  for (int n1 = 0; n1 < M; ++n1)
    for (int j2 = 0; j2 < M; ++j2) {
      Complex acc{};
      for (int n2 = 0; n2 < M; ++n2) acc += coeffs[n1 * M + n2] * std::conj(E[n2 * M + j2]);
      tmp[n1 * M + j2] = acc;
    }
  for (int j1 = 0; j1 < M; ++j1)
    for (int j2 = 0; j2 < M; ++j2) {
      Complex acc{};
      for (int n1 = 0; n1 < M; ++n1) acc += std::conj(E[n1 * M + j1]) * tmp[n1 * M + j2];
      values[j1 * M + j2] = acc;
    }
}

SpectralField forward_transform(const VelocityGrid& grid, const gpc::Basis& basis,
                                std::span<const double> nodal_values, double t) {
  const std::size_t npts = grid.size();
  const int nq = basis.quad_order();
  require(nodal_values.size() == npts * nq,
          "forward_transform: expected " + std::to_string(npts * nq) + " nodal values, got " +
              std::to_string(nodal_values.size()));
  SpectralField field(grid, basis.order(), t);
  std::vector<Complex> zcoeffs(npts);
  std::vector<double> column(nq);
  for (int k = 0; k <= basis.order(); ++k) {
    for (std::size_t p = 0; p < npts; ++p) {
      double acc = 0.0;
      for (int q = 0; q < nq; ++q) acc += basis.weights()[q] * nodal_values[q * npts + p] * basis.at_node(k, q);
      zcoeffs[p] = acc;
    }
    forward_v(grid, zcoeffs, field.slice(k));
  }
  return field;
}

std::vector<double> slice_values(const SpectralField& field) {
  const auto& grid = field.grid();
  const std::size_t npts = grid.size();
  std::vector<double> out(npts * field.gpc_size());
  std::vector<Complex> values(npts);
  double residue = 0.0, scale = 1.0;
  for (int k = 0; k <= field.order(); ++k) {
    inverse_v(grid, field.slice(k), values);
    for (std::size_t p = 0; p < npts; ++p) {
      out[k * npts + p] = values[p].real();
      residue = std::max(residue, std::abs(values[p].imag()));
      scale = std::max(scale, std::abs(values[p].real()));
    }
  }
  if (!(residue <= 1e-9 * scale))
    throw RuntimeFailure("inverse_transform: imaginary residue " + std::to_string(residue) +
                         " indicates a non-Hermitian (corrupted) field");
  return out;
}

std::vector<double> inverse_transform(const SpectralField& field, const gpc::Basis& basis) {
  require(basis.order() == field.order(), "inverse_transform: basis order differs from field order");
  const std::size_t npts = field.grid().size();
  const auto slices = slice_values(field);
  const int nq = basis.quad_order();
  std::vector<double> out(npts * nq, 0.0);
  for (int q = 0; q < nq; ++q)
    for (int k = 0; k <= field.order(); ++k) {
      const double psi = basis.at_node(k, q);
      for (std::size_t p = 0; p < npts; ++p) out[q * npts + p] += psi * slices[k * npts + p];
    }
  return out;
}

void evaluate_point(const SpectralField& field, double v1, double v2, std::span<double> out) {
  const auto& grid = field.grid();
  const int N = grid.N();
  const int M = grid.points_per_axis();
  require(out.size() == static_cast<std::size_t>(field.gpc_size()), "evaluate_point: output size mismatch");
  std::vector<Complex> e1(M), e2(M);
  const Complex w1 = std::polar(1.0, grid.wavenumber(1) * v1);
  const Complex w2 = std::polar(1.0, grid.wavenumber(1) * v2);
  e1[N] = e2[N] = 1.0;
  for (int n = 1; n <= N; ++n) {
    e1[N + n] = e1[N + n - 1] * w1;
    e2[N + n] = e2[N + n - 1] * w2;
    e1[N - n] = std::conj(e1[N + n]);
    e2[N - n] = std::conj(e2[N + n]);
  }
  for (int k = 0; k <= field.order(); ++k) {
    const auto c = field.slice(k);
    double acc = 0.0;
    for (int i1 = 0; i1 < M; ++i1) {
      Complex h{};
      for (int i2 = 0; i2 < M; ++i2) h += c[i1 * M + i2] * e2[i2];
      acc += (e1[i1] * h).real();
    }
    out[k] = acc;
  }
}

std::vector<Complex> coeffs_at_node(const SpectralField& field, const gpc::Basis& basis, int q) {
  std::vector<Complex> c(field.slice_size());
  for (int k = 0; k <= field.order(); ++k) {
    const double psi = basis.at_node(k, q);
    const auto s = field.slice(k);
    for (std::size_t p = 0; p < c.size(); ++p) c[p] += psi * s[p];
  }
  return c;
}

double sobolev_weight(const VelocityGrid& grid, int n1, int n2, int k) {
  const double a1 = grid.wavenumber(n1) * grid.wavenumber(n1);
  const double a2 = grid.wavenumber(n2) * grid.wavenumber(n2);
  double total = 0.0;
  for (int nu1 = 0; nu1 <= k; ++nu1)
    for (int nu2 = 0; nu1 + nu2 <= k; ++nu2) total += std::pow(a1, nu1) * std::pow(a2, nu2);
  return total;
}

double sobolev_norm_v(const SpectralField& field, const gpc::Basis& basis, int k, int q) {
  require(k >= 0, "sobolev_norm_v: derivative order must be non-negative");
  const auto& grid = field.grid();
  const int N = grid.N();
  const auto c = coeffs_at_node(field, basis, q);
  double acc = 0.0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) acc += sobolev_weight(grid, n1, n2, k) * std::norm(c[grid.mode_index(n1, n2)]);
  return std::sqrt(acc * grid.box_measure());
}

double lp_norm_v(const VelocityGrid& grid, std::span<const double> values, int p) {
  require(values.size() == grid.size(), "lp_norm_v: expected one value per grid point");
  switch (p) {
    case 0: {
      double m = 0.0;
      for (double v : values) m = std::max(m, std::abs(v));
      return m;
    }
    case 1: {
      double acc = 0.0;
      for (double v : values) acc += std::abs(v);
      return acc * grid.cell_measure();
    }
    case 2: {
      double acc = 0.0;
      for (double v : values) acc += v * v;
      return std::sqrt(acc * grid.cell_measure());
    }
    default:
      throw PreconditionError("lp_norm_v: unsupported p = " + std::to_string(p) + " (use 1, 2 or 0 for inf)");
  }
}

SpectralField restrict_modes(const SpectralField& field, int N_small) {
  const int N = field.grid().N();
  require(N_small >= 0 && N_small <= N, "restrict_modes: target N must be in [0, N]");
  SpectralField out(VelocityGrid(N_small, field.grid().L()), field.order(), field.time());
  for (int k = 0; k <= field.order(); ++k)
    for (int n1 = -N_small; n1 <= N_small; ++n1)
      for (int n2 = -N_small; n2 <= N_small; ++n2) out.at(k, n1, n2) = field.at(k, n1, n2);
  return out;
}

SpectralField pad_modes(const SpectralField& field, int N_large) {
  const int N = field.grid().N();
  require(N_large >= N, "pad_modes: target N must be at least N");
  SpectralField out(VelocityGrid(N_large, field.grid().L()), field.order(), field.time());
  for (int k = 0; k <= field.order(); ++k)
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n2 = -N; n2 <= N; ++n2) out.at(k, n1, n2) = field.at(k, n1, n2);
  return out;
}

SpectralField with_gpc_order(const SpectralField& field, int K) {
  SpectralField out(field.grid(), K, field.time());
  const int kmax = std::min(K, field.order());
  for (int k = 0; k <= kmax; ++k) std::copy(field.slice(k).begin(), field.slice(k).end(), out.slice(k).begin());
  return out;
}

namespace {
constexpr char kSnapshotMagic[6] = "KSGF1";
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& field) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open snapshot for writing: " + path.string());
  out.write(kSnapshotMagic, 5);
  detail::write_le<std::uint32_t>(out, kDim);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().N()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.order()));
  detail::write_le<double>(out, field.grid().L());
  detail::write_le<double>(out, field.time());
  for (const auto& c : field.coeffs()) {
    detail::write_le<double>(out, c.real());
    detail::write_le<double>(out, c.imag());
  }
  if (!out) throw FormatError("failed writing snapshot: " + path.string());
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot: " + path.string());
  detail::expect_magic(in, kSnapshotMagic, "snapshot");
  const auto d = detail::read_le<std::uint32_t>(in, "snapshot header");
  if (d != kDim) throw FormatError("snapshot dimension " + std::to_string(d) + " is not supported");
  const auto N = detail::read_le<std::uint32_t>(in, "snapshot header");
  const auto K = detail::read_le<std::uint32_t>(in, "snapshot header");
  const auto L = detail::read_le<double>(in, "snapshot header");
  const auto t = detail::read_le<double>(in, "snapshot header");
  if (N > 4096 || K > 4096) throw FormatError("snapshot header out of range");
  SpectralField field(VelocityGrid(static_cast<int>(N), L), static_cast<int>(K), t);
  for (auto& c : field.coeffs()) {
    const double re = detail::read_le<double>(in, "snapshot coefficients");
    const double im = detail::read_le<double>(in, "snapshot coefficients");
    c = Complex(re, im);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in snapshot: " + path.string());
  return field;
}

}  // namespace ksg::velocity
