#pragma once
// Published reference data and paths to the CSV fixtures under data/.

#include <array>
#include <string>

#include "ncvx/ncvx.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(NCVX_DATA_DIR) + "/" + name; }

inline ncvx::SampleSet load_samples(const std::string& name) {
  return ncvx::parse_samples_csv(ncvx::read_text_file(data_path(name)));
}

inline ncvx::MarginalSpec load_spec(const std::string& name) {
  return ncvx::parse_intervals(ncvx::read_text_file(data_path(name)));
}

inline ncvx::SampleSet table2() { return load_samples("table2_samples.csv"); }
inline ncvx::MarginalSpec table2_spec() { return load_spec("table2_intervals.csv"); }
inline ncvx::SampleSet cantilever() { return load_samples("cantilever_samples.csv"); }
inline ncvx::MarginalSpec cantilever_spec() { return load_spec("cantilever_intervals.csv"); }
inline ncvx::SampleSet geotech() { return load_samples("geotech_samples.csv"); }
inline ncvx::MarginalSpec geotech_spec() { return load_spec("geotech_intervals.csv"); }

/// Upper-triangle entries (r12, r13, r23) of published 3x3 matrices.
inline constexpr std::array<double, 3> kSccTable2 = {0.6361, -0.7102, -0.3422};
inline constexpr std::array<double, 3> kSccCantilever = {0.0342, 0.3011, -0.0019};
inline constexpr std::array<double, 3> kCccMeTable2 = {0.7623, -0.8831, -0.6732};
inline constexpr std::array<double, 3> kCccMp2Table2 = {0.73, -0.86, -0.58};

inline ncvx::Matrix from_upper3(const std::array<double, 3>& r) {
  return ncvx::Matrix{{1.0, r[0], r[1]}, {r[0], 1.0, r[2]}, {r[1], r[2], 1.0}};
}

/// Geotechnical CCC matrix as printed (row-major 6x6).
inline const ncvx::Matrix& geotech_ccc_printed() {
  static const ncvx::Matrix m{{1, 0.8278, 0.8314, 0.5534, -0.2433, -0.8100},
                              {0.8278, 1, 0.9472, 0.8171, 0.4179, -0.7280},
                              {0.8314, 0.9472, 1, 0.8332, 0.3573, -0.9080},
                              {0.5534, 0.8171, 0.8332, 1, -0.9080, -0.5712},
                              {-0.2433, 0.4179, 0.3573, -0.9080, 1, -0.2682},
                              {-0.8100, -0.7280, -0.9080, -0.5712, -0.2682, 1}};
  return m;
}

/// MP-II matrices of the CCC-based 3D example: R, H (two decimals) and S.
inline const ncvx::Matrix& mp2_ccc_correlation_printed() {
  static const ncvx::Matrix m{{1, 0.73, -0.86}, {0.73, 1, -0.58}, {-0.86, -0.58, 1}};
  return m;
}

inline const ncvx::Matrix& mp2_ccc_core_printed() {
  static const ncvx::Matrix m{{0.81, 0.37, -0.46}, {0.37, 0.90, -0.24}, {-0.46, -0.24, 0.86}};
  return m;
}

inline const ncvx::Matrix& mp2_ccc_shape_printed() {
  static const ncvx::Matrix m{
      {0.4939, 0.2232, -0.2830}, {0.2432, 0.6000, -0.1568}, {-0.2981, -0.1516, 0.5504}};
  return m;
}

/// MP-II shape matrix of the cantilever example as printed.
inline const ncvx::Matrix& cantilever_mp2_shape_printed() {
  static const ncvx::Matrix m{{0.8534, 0.0150, 0.1316}, {0.0171, 0.9807, -0.0023}, {0.1333, -0.0020, 0.8647}};
  return m;
}

struct TableRow {
  ncvx::ModelVariant variant;
  int enclosed;
  double nu_pct;
  double nu_bar_pct;
};

inline constexpr int kTable2Count = 20;

inline constexpr std::array<TableRow, 6> kTable4 = {{
    {ncvx::ModelVariant::Ellipsoid, 20, 27.86, 65.31},
    {ncvx::ModelVariant::MpII, 20, 17.33, 55.75},
    {ncvx::ModelVariant::MpI, 5, 2.97, 30.97},
    {ncvx::ModelVariant::Rectangular, 17, 16.37, 54.70},
    {ncvx::ModelVariant::LowerTriangular, 18, 24.51, 62.58},
    {ncvx::ModelVariant::UpperTriangular, 20, 24.49, 62.57},
}};

inline constexpr std::array<TableRow, 6> kTable3 = {{
    {ncvx::ModelVariant::Ellipsoid, 18, 15.90, 54.18},
    {ncvx::ModelVariant::MpII, 17, 9.17, 45.10},
    {ncvx::ModelVariant::MpI, 16, 8.26, 43.54},
    {ncvx::ModelVariant::Rectangular, 16, 14.74, 52.82},
    {ncvx::ModelVariant::LowerTriangular, 18, 19.79, 58.28},
    {ncvx::ModelVariant::UpperTriangular, 15, 18.07, 56.54},
}};

inline constexpr double kCantileverNuE = 49.90;
inline constexpr double kCantileverNuP = 70.62;

}  // namespace fixtures
