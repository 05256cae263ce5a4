#include "ksg/weights.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "binary_io.hpp"
#include "ksg/gpc.hpp"

namespace ksg::weights {

QuadratureSpec QuadratureSpec::defaults(int N) {
  return {std::max(32, 4 * N), std::max(64, 8 * N), std::max(64, 8 * N)};
}

std::uint64_t TableKey::hash() const {
  detail::Fnv1a h;
  h.add<std::uint32_t>(static_cast<std::uint32_t>(N));
  h.add(L);
  h.add(R);
  h.add(gamma);
  h.add(angular_constant);
  h.add<std::uint32_t>(static_cast<std::uint32_t>(quad.radial));
  h.add<std::uint32_t>(static_cast<std::uint32_t>(quad.angular_q));
  h.add<std::uint32_t>(static_cast<std::uint32_t>(quad.angular_sigma));
  return h.value();
}

TableKey make_key(const velocity::VelocityGrid& grid, const kernel::KernelModel& kernel, QuadratureSpec quad) {
  return {grid.N(), grid.L(), kernel.R(), kernel.gamma(), kernel.angular_constant(), quad};
}

WeightTable::WeightTable(TableKey key, std::vector<Complex> entries)
    : key_(key), modes_(static_cast<std::size_t>(2 * key.N + 1) * (2 * key.N + 1)), entries_(std::move(entries)) {
  require(entries_.size() == modes_ * modes_, "weight table: entry count does not match N");
}

namespace {

// A[(p1, p2)][r] = sum_j w_j exp(i c_r (p1 cos th_j + p2 sin th_j)), c_r = pi rho_r / 2L,
// p in {-2N..2N}^2. The grid is antipodal (th_{j + M/2} = th_j + pi), so A is real:
// A = sum_{j < M/2} 2 w cos(c_r p.omega_j).
std::vector<double> angular_sums(int N, double L, std::span<const double> rho, int order) {
  const int P = 4 * N + 1;
  const int half = order / 2;
  const double w = 2.0 * kPi / order;
  std::vector<double> cs(half), sn(half);
  for (int j = 0; j < half; ++j) {
    cs[j] = std::cos(2.0 * kPi * j / order);
    sn[j] = std::sin(2.0 * kPi * j / order);
  }
  const std::size_t nr = rho.size();
  std::vector<double> A(static_cast<std::size_t>(P) * P * nr);
#pragma omp parallel for schedule(dynamic)
  for (int p1 = -2 * N; p1 <= 2 * N; ++p1)
    for (int p2 = -2 * N; p2 <= 2 * N; ++p2) {
      double* row = &A[(static_cast<std::size_t>(p1 + 2 * N) * P + (p2 + 2 * N)) * nr];
      for (std::size_t r = 0; r < nr; ++r) {
        const double c = kPi * rho[r] / (2.0 * L);
        double acc = 0.0;
        for (int j = 0; j < half; ++j) acc += std::cos(c * (p1 * cs[j] + p2 * sn[j]));
        row[r] = 2.0 * w * acc;
      }
    }
  return A;
}

}  // namespace

WeightTable compute_weight_table(const velocity::VelocityGrid& grid, const kernel::KernelModel& kernel,
                                 QuadratureSpec quad) {
  require(quad.radial >= 2 && quad.angular_q >= 2 && quad.angular_sigma >= 2,
          "compute_weight_table: quadrature orders must be at least 2");
  require(quad.angular_q % 2 == 0 && quad.angular_sigma % 2 == 0,
          "compute_weight_table: angular orders must be even");
  require(kernel.R() <= grid.L(), "compute_weight_table: need R <= L (R = " + std::to_string(kernel.R()) +
                                      ", L = " + std::to_string(grid.L()) + ")");

  const int N = grid.N();
  const double L = grid.L();
  const double R = kernel.R();

  std::vector<double> rho, wr;
  gpc::gauss_legendre(quad.radial, rho, wr);
  for (std::size_t r = 0; r < rho.size(); ++r) {
    rho[r] = 0.5 * R * (rho[r] + 1.0);
    wr[r] *= 0.5 * R;
  }
  const std::size_t nr = rho.size();
  std::vector<double> radial(nr);
  for (std::size_t r = 0; r < nr; ++r) radial[r] = kernel.angular_constant() * wr[r] * rho[r] * kernel.kinetic(rho[r]);

  const auto Aq = angular_sums(N, L, rho, quad.angular_q);
  const auto As = angular_sums(N, L, rho, quad.angular_sigma);
  const int P = 4 * N + 1;
  const auto arow = [&](const std::vector<double>& A, int p1, int p2) {
    return &A[(static_cast<std::size_t>(p1 + 2 * N) * P + (p2 + 2 * N)) * nr];
  };
  const double* sigma_total = arow(As, 0, 0);

  const int M = grid.points_per_axis();
  const std::size_t modes = grid.size();
  std::vector<Complex> G(modes * modes);
#pragma omp parallel for schedule(dynamic)
  for (int l1 = -N; l1 <= N; ++l1)
    for (int l2 = -N; l2 <= N; ++l2)
      for (int m1 = -N; m1 <= N; ++m1)
        for (int m2 = -N; m2 <= N; ++m2) {
          const double* a = arow(Aq, l1 - m1, l2 - m2);
          const double* s = arow(As, l1 + m1, l2 + m2);
          const double* t = arow(Aq, 2 * m1, 2 * m2);
          double acc = 0.0;
          for (std::size_t r = 0; r < nr; ++r) acc += radial[r] * (a[r] * s[r] - sigma_total[r] * t[r]);
          const std::size_t idx = (static_cast<std::size_t>(l1 + N) * M + (l2 + N)) * modes +
                                  static_cast<std::size_t>(m1 + N) * M + (m2 + N);
          G[idx] = acc;
        }
  return WeightTable(make_key(grid, kernel, quad), std::move(G));
}

namespace {

constexpr char kTableMagic[6] = "KSGW1";

TableKey read_header(std::istream& in, std::uint64_t& stored_hash) {
  detail::expect_magic(in, kTableMagic, "weight table");
  TableKey key{};
  key.N = static_cast<int>(detail::read_le<std::uint32_t>(in, "weight table header"));
  key.L = detail::read_le<double>(in, "weight table header");
  key.R = detail::read_le<double>(in, "weight table header");
  key.gamma = detail::read_le<double>(in, "weight table header");
  key.angular_constant = detail::read_le<double>(in, "weight table header");
  key.quad.radial = static_cast<int>(detail::read_le<std::uint32_t>(in, "weight table header"));
  key.quad.angular_q = static_cast<int>(detail::read_le<std::uint32_t>(in, "weight table header"));
  key.quad.angular_sigma = static_cast<int>(detail::read_le<std::uint32_t>(in, "weight table header"));
  stored_hash = detail::read_le<std::uint64_t>(in, "weight table header");
  return key;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void save_table(const WeightTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open weight table for writing: " + path.string());
  const auto& key = table.key();
  out.write(kTableMagic, 5);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.N));
  detail::write_le<double>(out, key.L);
  detail::write_le<double>(out, key.R);
  detail::write_le<double>(out, key.gamma);
  detail::write_le<double>(out, key.angular_constant);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.quad.radial));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.quad.angular_q));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.quad.angular_sigma));
  detail::write_le<std::uint64_t>(out, key.hash());
  for (const auto& g : table.entries()) {
    detail::write_le<double>(out, g.real());
    detail::write_le<double>(out, g.imag());
  }
  if (!out) throw FormatError("failed writing weight table: " + path.string());
}

WeightTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open weight table: " + path.string());
  std::uint64_t stored = 0;
  const TableKey key = read_header(in, stored);
  if (stored != key.hash()) throw FormatError("weight table header hash mismatch: " + path.string());
  if (key.N < 0 || key.N > 64) throw FormatError("weight table N out of range: " + path.string());
  const std::size_t modes = static_cast<std::size_t>(2 * key.N + 1) * (2 * key.N + 1);
  std::vector<Complex> entries(modes * modes);
  std::vector<double> raw(2 * entries.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(double)))
    throw FormatError("truncated weight table: " + path.string());
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in weight table: " + path.string());
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i] = Complex(detail::to_little(raw[2 * i]), detail::to_little(raw[2 * i + 1]));
  return WeightTable(key, std::move(entries));
}

WeightTable load_table(const std::filesystem::path& path, const TableKey& expected) {
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open weight table: " + path.string());
    std::uint64_t stored = 0;
    read_header(in, stored);
    if (stored != expected.hash())
      throw FormatError("weight table parameter hash mismatch (stale cache): " + path.string());
  }
  return load_table(path);
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const TableKey& key) {
  return dir / ("weights_N" + std::to_string(key.N) + "_" + hex(key.hash()) + ".ksgw");
}

WeightTable load_or_compute(const std::filesystem::path& dir, const velocity::VelocityGrid& grid,
                            const kernel::KernelModel& kernel, QuadratureSpec quad) {
  const TableKey key = make_key(grid, kernel, quad);
  const auto path = cache_path(dir, key);
  if (std::filesystem::exists(path)) return load_table(path, key);
  auto table = compute_weight_table(grid, kernel, quad);
  std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  save_table(table, tmp);
  std::filesystem::rename(tmp, path);
  return table;
}

}  // namespace ksg::weights
