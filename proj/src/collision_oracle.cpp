#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "ksg/collision.hpp"

namespace ksg::collision {

namespace {

// Real trigonometric series evaluation of every gPC slice of a Hermitian field, followed by
// reconstruction at the z nodes.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const velocity::SpectralField& field, const gpc::Basis& basis)
      : N_(field.grid().N()), K_(field.order()), k1_(field.grid().wavenumber(1)), nz_(basis.quad_order()) {
    double scale = 1.0;
    for (const auto& c : field.coeffs()) scale = std::max(scale, std::abs(c));
    if (field.hermitian_defect() > 1e-10 * scale)
      throw PreconditionError("oracle: field is not Hermitian, so it does not represent a real function");
    const int M = 2 * N_ + 1;
    // keep rows n1 >= 0 only
    coeffs_.resize(static_cast<std::size_t>(K_ + 1) * (N_ + 1) * M);
    for (int k = 0; k <= K_; ++k)
      for (int n1 = 0; n1 <= N_; ++n1)
        for (int n2 = -N_; n2 <= N_; ++n2) coeffs_[(k * (N_ + 1) + n1) * M + n2 + N_] = field.at(k, n1, n2);
    psi_.resize(static_cast<std::size_t>(K_ + 1) * nz_);
    for (int k = 0; k <= K_; ++k)
      for (int q = 0; q < nz_; ++q) psi_[k * nz_ + q] = basis.at_node(k, q);
  }

  void operator()(double v1, double v2, std::span<double> out) const {
    const int M = 2 * N_ + 1;
    thread_local std::vector<Complex> e1, e2;
    thread_local std::vector<double> slices;
    e1.resize(N_ + 1);
    e2.resize(M);
    slices.resize(K_ + 1);
    const Complex w1 = std::polar(1.0, k1_ * v1);
    const Complex w2 = std::polar(1.0, k1_ * v2);
    e1[0] = 1.0;
    e2[N_] = 1.0;
    for (int n = 1; n <= N_; ++n) {
      e1[n] = e1[n - 1] * w1;
      e2[N_ + n] = e2[N_ + n - 1] * w2;
      e2[N_ - n] = std::conj(e2[N_ + n]);
    }
    for (int k = 0; k <= K_; ++k) {
      const Complex* row0 = &coeffs_[(k * (N_ + 1)) * M];
      // n1 = 0 row: Hermitian within the row
      double acc = row0[N_].real();
      for (int n2 = 1; n2 <= N_; ++n2) acc += 2.0 * (row0[N_ + n2] * e2[N_ + n2]).real();
      for (int n1 = 1; n1 <= N_; ++n1) {
        const Complex* row = &coeffs_[(k * (N_ + 1) + n1) * M];
        Complex h{};
        for (int i2 = 0; i2 < M; ++i2) h += row[i2] * e2[i2];
        acc += 2.0 * (e1[n1] * h).real();
      }
      slices[k] = acc;
    }
    for (int q = 0; q < nz_; ++q) {
      double v = 0.0;
      for (int k = 0; k <= K_; ++k) v += slices[k] * psi_[k * nz_ + q];
      out[q] = v;
    }
  }

 private:
  int N_, K_;
  double k1_;
  int nz_;
  std::vector<Complex> coeffs_;
  std::vector<double> psi_;
};

}  // namespace

PointFunction field_evaluator(const velocity::SpectralField& field, const gpc::Basis& basis) {
  require(basis.order() == field.order(), "field_evaluator: basis order differs from field order");
  auto eval = std::make_shared<SeriesEvaluator>(field, basis);
  return [eval](double v1, double v2, std::span<double> out) { (*eval)(v1, v2, out); };
}

OracleValues oracle_split(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                          const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad) {
  require(quad.radial >= 2 && quad.angular_q >= 2 && quad.angular_sigma >= 2,
          "oracle: quadrature orders must be at least 2");
  require(quad.angular_sigma % 2 == 0, "oracle: sigma order must be even (antipodal pairing)");
  const int nz = static_cast<int>(b_at_nodes.size());
  require(nz >= 1, "oracle: need at least one z node");

  std::vector<double> rho, wr;
  gpc::gauss_legendre(quad.radial, rho, wr);
  const double R = kernel.R();
  std::vector<double> radial(rho.size());
  for (std::size_t r = 0; r < rho.size(); ++r) {
    rho[r] = 0.5 * R * (rho[r] + 1.0);
    wr[r] *= 0.5 * R;
    radial[r] = kernel.angular_constant() * wr[r] * rho[r] * kernel.kinetic(rho[r]);
  }
  const int Mq = quad.angular_q, Ms = quad.angular_sigma, half = Ms / 2;
  const double wq = 2.0 * kPi / Mq, ws = 2.0 * kPi / Ms;
  std::vector<double> cq(Mq), sq(Mq), cs(Ms), ss(Ms);
  for (int j = 0; j < Mq; ++j) {
    cq[j] = std::cos(2.0 * kPi * j / Mq);
    sq[j] = std::sin(2.0 * kPi * j / Mq);
  }
  for (int s = 0; s < Ms; ++s) {
    cs[s] = std::cos(2.0 * kPi * s / Ms);
    ss[s] = std::sin(2.0 * kPi * s / Ms);
  }
  const double sphere = ws * Ms;

  const int M = target.points_per_axis();
  const std::size_t npts = target.size();
  OracleValues out{std::vector<double>(npts * nz), std::vector<double>(npts * nz)};

#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < static_cast<int>(npts); ++p) {
    const double v1 = target.node(p / M), v2 = target.node(p % M);
    std::vector<double> fv(nz), tmp(nz), gain(nz, 0.0), loss(nz, 0.0), ring(static_cast<std::size_t>(Ms) * nz);
    f(v1, v2, fv);
    for (std::size_t r = 0; r < rho.size(); ++r) {
      if (radial[r] == 0.0) continue;
      for (int j = 0; j < Mq; ++j) {
        const double q1 = rho[r] * cq[j], q2 = rho[r] * sq[j];
        f(v1 - q1, v2 - q2, tmp);
        const double lw = radial[r] * wq * sphere;
        for (int z = 0; z < nz; ++z) loss[z] += lw * tmp[z];
        // points v - q/2 + |q| sigma_s / 2; sigma_{s + Ms/2} = -sigma_s
        for (int s = 0; s < Ms; ++s)
          f(v1 - 0.5 * q1 + 0.5 * rho[r] * cs[s], v2 - 0.5 * q2 + 0.5 * rho[r] * ss[s],
            std::span<double>(ring).subspan(static_cast<std::size_t>(s) * nz, nz));
        const double gw = radial[r] * wq * ws;
        for (int z = 0; z < nz; ++z) {
          double acc = 0.0;
          for (int s = 0; s < Ms; ++s) acc += ring[s * nz + z] * ring[((s + half) % Ms) * nz + z];
          gain[z] += gw * acc;
        }
      }
    }
    for (int z = 0; z < nz; ++z) {
      out.gain[z * npts + p] = b_at_nodes[z] * gain[z];
      out.loss[z * npts + p] = b_at_nodes[z] * fv[z] * loss[z];
    }
  }
  return out;
}

std::vector<double> oracle_gain(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad) {
  return oracle_split(target, b_at_nodes, kernel, f, quad).gain;
}

std::vector<double> oracle_loss(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                const kernel::KernelModel& kernel, const PointFunction& f, OracleQuadrature quad) {
  return oracle_split(target, b_at_nodes, kernel, f, quad).loss;
}

std::vector<double> oracle_direct_QR(const velocity::VelocityGrid& target, std::span<const double> b_at_nodes,
                                     const kernel::KernelModel& kernel, const PointFunction& f,
                                     OracleQuadrature quad) {
  auto split = oracle_split(target, b_at_nodes, kernel, f, quad);
  for (std::size_t i = 0; i < split.gain.size(); ++i) split.gain[i] -= split.loss[i];
  return std::move(split.gain);
}

velocity::VelocityGrid oracle_grid(const velocity::VelocityGrid& grid) {
  return velocity::VelocityGrid((3 * grid.N() + 1) / 2, grid.L());
}

velocity::SpectralField oracle_project(const velocity::VelocityGrid& fine, const gpc::Basis& basis,
                                       std::span<const double> values, int N) {
  return velocity::restrict_modes(velocity::forward_transform(fine, basis, values), N);
}

velocity::SpectralField oracle_rhs(const velocity::SpectralField& field, const gpc::Basis& basis,
                                   const kernel::KernelModel& kernel, OracleQuadrature quad) {
  const auto fine = oracle_grid(field.grid());
  std::vector<double> b(basis.quad_order());
  for (int q = 0; q < basis.quad_order(); ++q) b[q] = kernel.b(basis.nodes()[q]);
  const auto values = oracle_direct_QR(fine, b, kernel, field_evaluator(field, basis), quad);
  auto out = oracle_project(fine, basis, values, field.grid().N());
  out.set_time(field.time());
  return out;
}

}  // namespace ksg::collision
