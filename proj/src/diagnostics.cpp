#include "ksg/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ksg::diagnostics {

using velocity::SpectralField;

std::vector<double> per_mode_mass(const SpectralField& field) {
  const double box = field.grid().box_measure();
  std::vector<double> mass(field.gpc_size());
  for (int k = 0; k <= field.order(); ++k) {
    const Complex c = field.at(k, 0, 0);
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c.real())))
      throw RuntimeFailure("per_mode_mass: zero mode of slice " + std::to_string(k) + " has imaginary part " +
                           std::to_string(c.imag()));
    mass[k] = box * c.real();
  }
  return mass;
}

double mixed_sobolev_norm(const SpectralField& field, int k, int r) {
  require(k >= 0, "mixed_sobolev_norm: k must be non-negative");
  require(r == 0 || r == 1, "mixed_sobolev_norm: only z-orders r in {0, 1} are supported");
  const auto& grid = field.grid();
  const int N = grid.N();
  const int nk = field.gpc_size();
  std::vector<double> coeff(nk), deriv;
  double total = 0.0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) {
      const double w = velocity::sobolev_weight(grid, n1, n2, k);
      double acc = 0.0;
      for (int part = 0; part < 2; ++part) {
        for (int kk = 0; kk < nk; ++kk)
          coeff[kk] = part == 0 ? field.at(kk, n1, n2).real() : field.at(kk, n1, n2).imag();
        for (double c : coeff) acc += c * c;
        if (r == 1) {
          deriv = gpc::derivative_coeffs(coeff);
          for (double d : deriv) acc += d * d;
        }
      }
      total += w * acc;
    }
  return std::sqrt(total * grid.box_measure());
}

namespace {

// Nodal values of f and of d_z f, layout [q][point].
struct NodalWithDerivative {
  std::vector<double> f;
  std::vector<double> dz;
};

NodalWithDerivative nodal_with_derivative(const SpectralField& field, const gpc::Basis& basis) {
  require(basis.order() == field.order(), "diagnostics: basis order differs from field order");
  const std::size_t npts = field.grid().size();
  const int nk = field.gpc_size();
  const auto slices = velocity::slice_values(field);
  // derivative slices via the exact gPC differentiation matrix, applied pointwise
  std::vector<double> dslices(slices.size());
  std::vector<double> column(nk);
  for (std::size_t p = 0; p < npts; ++p) {
    for (int k = 0; k < nk; ++k) column[k] = slices[k * npts + p];
    const auto d = gpc::derivative_coeffs(column);
    for (int k = 0; k < nk; ++k) dslices[k * npts + p] = d[k];
  }
  const int nq = basis.quad_order();
  NodalWithDerivative out{std::vector<double>(npts * nq, 0.0), std::vector<double>(npts * nq, 0.0)};
  for (int q = 0; q < nq; ++q)
    for (int k = 0; k < nk; ++k) {
      const double psi = basis.at_node(k, q);
      for (std::size_t p = 0; p < npts; ++p) {
        out.f[q * npts + p] += psi * slices[k * npts + p];
        out.dz[q * npts + p] += psi * dslices[k * npts + p];
      }
    }
  return out;
}

}  // namespace

double l1_h1_norm(const SpectralField& field, const gpc::Basis& basis) {
  const auto nodal = nodal_with_derivative(field, basis);
  const std::size_t npts = field.grid().size();
  double total = 0.0;
  for (std::size_t p = 0; p < npts; ++p) {
    double h1 = 0.0;
    for (int q = 0; q < basis.quad_order(); ++q) {
      const double f = nodal.f[q * npts + p], d = nodal.dz[q * npts + p];
      h1 += basis.weights()[q] * (f * f + d * d);
    }
    total += std::sqrt(h1);
  }
  return total * field.grid().cell_measure();
}

double negative_part_norm(const SpectralField& field, const gpc::Basis& basis) {
  const auto nodal = nodal_with_derivative(field, basis);
  const std::size_t npts = field.grid().size();
  double total = 0.0;
  for (int q = 0; q < basis.quad_order(); ++q) {
    double acc = 0.0;
    for (std::size_t p = 0; p < npts; ++p) {
      const double f = nodal.f[q * npts + p];
      if (f < 0.0) {
        const double d = nodal.dz[q * npts + p];
        acc += f * f + d * d;
      }
    }
    total += basis.weights()[q] * acc;
  }
  return std::sqrt(total * field.grid().cell_measure());
}

double error_vs_reference(const SpectralField& field, const gpc::Basis& basis, const Reference& reference,
                          const gpc::Basis* reference_basis) {
  const gpc::Basis& rb = reference_basis ? *reference_basis : basis;
  require(rb.order() >= field.order(), "error_vs_reference: reference basis order below the field order");
  const auto& grid = field.grid();
  const int M = grid.points_per_axis();
  const std::size_t npts = grid.size();
  std::vector<double> values(npts * rb.quad_order());
  for (int q = 0; q < rb.quad_order(); ++q)
    for (std::size_t p = 0; p < npts; ++p)
      values[q * npts + p] = reference(field.time(), grid.node(static_cast<int>(p) / M),
                                       grid.node(static_cast<int>(p) % M), rb.nodes()[q]);
  auto diff = velocity::forward_transform(grid, rb, values, field.time());
  const auto padded = velocity::with_gpc_order(field, rb.order());
  for (std::size_t i = 0; i < diff.coeffs().size(); ++i) diff.coeffs()[i] -= padded.coeffs()[i];
  return mixed_sobolev_norm(diff, 0, 1);
}

MomentStats moment_stats(const SpectralField& field) {
  // int_{-L}^{L} v^a e^{i pi n v / L} dv for a = 0, 1, 2
  const auto& grid = field.grid();
  const int N = grid.N();
  const double L = grid.L();
  auto moment1d = [&](int a, int n) -> Complex {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    switch (a) {
      case 0: return n == 0 ? Complex(2.0 * L) : Complex(0.0);
      case 1: return n == 0 ? Complex(0.0) : Complex(0.0, -2.0 * L * L * sign / (kPi * n));
      default: return n == 0 ? Complex(2.0 * L * L * L / 3.0) : Complex(4.0 * L * L * L * sign / (kPi * kPi * n * n));
    }
  };
  const int nk = field.gpc_size();
  std::vector<double> rho(nk), mom1(nk), mom2(nk), energy(nk);
  for (int k = 0; k < nk; ++k) {
    Complex r{}, p1{}, p2{}, e{};
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n2 = -N; n2 <= N; ++n2) {
        const Complex c = field.at(k, n1, n2);
        const Complex i0 = moment1d(0, n1), j0 = moment1d(0, n2);
        r += c * i0 * j0;
        p1 += c * moment1d(1, n1) * j0;
        p2 += c * i0 * moment1d(1, n2);
        e += 0.5 * c * (moment1d(2, n1) * j0 + i0 * moment1d(2, n2));
      }
    rho[k] = r.real();
    mom1[k] = p1.real();
    mom2[k] = p2.real();
    energy[k] = e.real();
  }
  auto stat = [](const std::vector<double>& c) {
    double var = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) var += c[k] * c[k];
    return MomentStat{c[0], std::sqrt(var)};
  };
  return {stat(rho), {stat(mom1), stat(mom2)}, stat(energy)};
}

DiagnosticsRecord make_record(const SpectralField& field, const gpc::Basis& basis, const Reference* reference) {
  DiagnosticsRecord rec;
  rec.t = field.time();
  rec.per_mode_mass = per_mode_mass(field);
  rec.moments = moment_stats(field);
  rec.norm_L1H1 = l1_h1_norm(field, basis);
  rec.norm_L2H1 = mixed_sobolev_norm(field, 0, 1);
  rec.norm_H1H1 = mixed_sobolev_norm(field, 1, 1);
  rec.neg_L2H1 = negative_part_norm(field, basis);
  if (reference) rec.err_L2H1 = error_vs_reference(field, basis, *reference);
  return rec;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_header(int K) {
  std::ostringstream out;
  out << "t";
  for (int k = 0; k <= K; ++k) out << ",mass_" << k;
  out << ",density_mean,density_std,momentum1_mean,momentum1_std,momentum2_mean,momentum2_std"
      << ",energy_mean,energy_std,norm_L1H1,norm_L2H1,norm_H1H1,neg_L2H1,err_L2H1";
  return out.str();
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::ostringstream out;
  out << format_double(r.t);
  for (double m : r.per_mode_mass) out << ',' << format_double(m);
  const auto& mo = r.moments;
  for (const auto& s : {mo.density, mo.momentum[0], mo.momentum[1], mo.energy})
    out << ',' << format_double(s.mean) << ',' << format_double(s.std);
  out << ',' << format_double(r.norm_L1H1) << ',' << format_double(r.norm_L2H1) << ',' << format_double(r.norm_H1H1)
      << ',' << format_double(r.neg_L2H1) << ',' << (r.err_L2H1 ? format_double(*r.err_L2H1) : std::string("nan"));
  return out.str();
}

}  // namespace ksg::diagnostics
