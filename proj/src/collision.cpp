#include "ksg/collision.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ksg::collision {

CollisionWorkspace::CollisionWorkspace(const weights::WeightTable& table, const gpc::TripleProductTensor& tensor)
    : table_(&table), tensor_(tensor), N_(table.N()), K_(tensor.order()) {
  const auto& g = table.entries();
  real_weights_ = std::all_of(g.begin(), g.end(), [](const Complex& c) { return c.imag() == 0.0; });
  g_real_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) g_real_[i] = g[i].real();

  const int n = K_ + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double biggest = 0.0;
      for (int k = 0; k < n; ++k) biggest = std::max(biggest, std::abs(tensor_(k, i, j)));
      if (biggest >= kTensorSkip) pairs_.push_back({i, j});
    }
  const std::size_t modes = table.modes();
  f_re_.resize(n * modes);
  f_im_.resize(n * modes);
  acc_re_.resize(pairs_.size() * modes);
  acc_im_.resize(pairs_.size() * modes);
}

namespace {

// One output row block n1: accumulates every pair's convolution for all n2.
template <bool RealWeights>
void convolve_row(int n1, int N, std::size_t modes, const double* g_re, const Complex* g_cplx,
                  const double* f_re, const double* f_im, std::span<const std::pair<int, int>> pairs,
                  double* acc_re, double* acc_im) {
  const int M = 2 * N + 1;
  const int l1_lo = std::max(-N, n1 - N), l1_hi = std::min(N, n1 + N);
  for (int l1 = l1_lo; l1 <= l1_hi; ++l1) {
    const int m1 = n1 - l1;
    for (int l2 = -N; l2 <= N; ++l2) {
      const std::size_t l_idx = static_cast<std::size_t>(l1 + N) * M + (l2 + N);
      const std::size_t row = l_idx * modes + static_cast<std::size_t>(m1 + N) * M;
      const int lo = std::max(0, -l2), hi = std::min(2 * N, 2 * N - l2);  // m2 + N range
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const double ar = f_re[i * modes + l_idx], ai = f_im[i * modes + l_idx];
        const double* fr = f_re + j * modes + static_cast<std::size_t>(m1 + N) * M;
        const double* fi = f_im + j * modes + static_cast<std::size_t>(m1 + N) * M;
        double* cr = acc_re + p * modes + static_cast<std::size_t>(n1 + N) * M + l2;
        double* ci = acc_im + p * modes + static_cast<std::size_t>(n1 + N) * M + l2;
        if constexpr (RealWeights) {
          const double* g = g_re + row;
#pragma omp simd
          for (int mi = lo; mi <= hi; ++mi) {
            const double tr = g[mi] * fr[mi], ti = g[mi] * fi[mi];
            cr[mi] += ar * tr - ai * ti;
            ci[mi] += ar * ti + ai * tr;
          }
        } else {
          const Complex* g = g_cplx + row;
          for (int mi = lo; mi <= hi; ++mi) {
            const double tr = g[mi].real() * fr[mi] - g[mi].imag() * fi[mi];
            const double ti = g[mi].real() * fi[mi] + g[mi].imag() * fr[mi];
            cr[mi] += ar * tr - ai * ti;
            ci[mi] += ar * ti + ai * tr;
          }
        }
      }
    }
  }
}

}  // namespace

void eval_galerkin_rhs(const velocity::SpectralField& field, CollisionWorkspace& ws, std::span<Complex> out) {
  const int N = ws.N_;
  require(field.grid().N() == N, "eval_galerkin_rhs: field N = " + std::to_string(field.grid().N()) +
                                     " but weight table N = " + std::to_string(N));
  require(field.order() == ws.K_, "eval_galerkin_rhs: field gPC order differs from tensor order");
  require(field.grid().L() == ws.table_->key().L, "eval_galerkin_rhs: field L differs from weight table L");
  require(out.size() == field.coeffs().size(), "eval_galerkin_rhs: output size mismatch");

  const std::size_t modes = field.slice_size();
  const auto& c = field.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    ws.f_re_[i] = c[i].real();
    ws.f_im_[i] = c[i].imag();
  }
  std::fill(ws.acc_re_.begin(), ws.acc_re_.end(), 0.0);
  std::fill(ws.acc_im_.begin(), ws.acc_im_.end(), 0.0);

  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : ws.pairs_) pairs.emplace_back(p.i, p.j);
  const double* g_re = ws.g_real_.data();
  const Complex* g_cplx = ws.table_->entries().data();
  const bool real_weights = ws.real_weights_;

#pragma omp parallel for schedule(dynamic)
  for (int n1 = -N; n1 <= N; ++n1) {
    if (real_weights)
      convolve_row<true>(n1, N, modes, g_re, g_cplx, ws.f_re_.data(), ws.f_im_.data(), pairs, ws.acc_re_.data(),
                         ws.acc_im_.data());
    else
      convolve_row<false>(n1, N, modes, g_re, g_cplx, ws.f_re_.data(), ws.f_im_.data(), pairs, ws.acc_re_.data(),
                          ws.acc_im_.data());
  }

  for (int k = 0; k <= ws.K_; ++k) {
    Complex* dst = out.data() + k * modes;
    std::fill(dst, dst + modes, Complex{});
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double s = ws.tensor_(k, pairs[p].first, pairs[p].second);
      if (std::abs(s) < kTensorSkip) continue;
      const double* ar = ws.acc_re_.data() + p * modes;
      const double* ai = ws.acc_im_.data() + p * modes;
      for (std::size_t n = 0; n < modes; ++n) dst[n] += s * Complex(ar[n], ai[n]);
    }
  }
}

velocity::SpectralField eval_galerkin_rhs(const velocity::SpectralField& field, CollisionWorkspace& ws) {
  velocity::SpectralField out(field.grid(), field.order(), field.time());
  eval_galerkin_rhs(field, ws, out.coeffs());
  return out;
}

}  // namespace ksg::collision
