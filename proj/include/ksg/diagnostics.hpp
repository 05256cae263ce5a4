#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ksg/gpc.hpp"
#include "ksg/velocity.hpp"

namespace ksg::diagnostics {

/// Reference solution f(t, v, z).
using Reference = std::function<double(double t, double v1, double v2, double z)>;

struct MomentStat {
  double mean = 0.0;
  double std = 0.0;
};

struct MomentStats {
  MomentStat density;
  MomentStat momentum[2];
  MomentStat energy;  ///< (1/2) int |v|^2 f dv
};

struct DiagnosticsRecord {
  double t = 0.0;
  std::vector<double> per_mode_mass;
  MomentStats moments;
  double norm_L1H1 = 0.0;
  double norm_L2H1 = 0.0;
  double norm_H1H1 = 0.0;
  double neg_L2H1 = 0.0;
  std::optional<double> err_L2H1;
};

/// (2L)^d Re f^k_0 for each k.
std::vector<double> per_mode_mass(const velocity::SpectralField& field);

/// sqrt( sum_{|nu| <= k} sum_{mu <= r} || d_v^nu d_z^mu f ||^2_{L2_v L2_z} ), r in {0, 1}.
double mixed_sobolev_norm(const velocity::SpectralField& field, int k, int r);

/// L^1_v H^1_z norm: int ||f(v, .)||_{H^1_z} dv by grid and z quadrature.
double l1_h1_norm(const velocity::SpectralField& field, const gpc::Basis& basis);

/// ||f^-||_{L2_v H1_z} on the grid x z nodes, with d_z f^- = -1_{f < 0} d_z f.
double negative_part_norm(const velocity::SpectralField& field, const gpc::Basis& basis);

/**
 * ||P_N^K f_ref - f||_{L2_v H1_z} at the field's time. When `reference_basis` has a higher
 * order than the field, the reference is projected with it and the field is zero-padded, so
 * the error also counts reference modes beyond K.
 */
double error_vs_reference(const velocity::SpectralField& field, const gpc::Basis& basis, const Reference& reference,
                          const gpc::Basis* reference_basis = nullptr);

MomentStats moment_stats(const velocity::SpectralField& field);

DiagnosticsRecord make_record(const velocity::SpectralField& field, const gpc::Basis& basis,
                              const Reference* reference);

/// CSV header for a run with gPC order K.
std::string csv_header(int K);
std::string csv_row(const DiagnosticsRecord& record);

/// "%.17g" formatting shared by every CSV writer.
std::string format_double(double value);

}  // namespace ksg::diagnostics
