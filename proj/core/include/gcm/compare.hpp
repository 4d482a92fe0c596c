// Joining a Brody curve with a regular-fraction curve on energy.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gcm {

/// (energy, value) samples.
using Curve = std::vector<std::pair<double, double>>;

struct JoinedPoint {
  double energy = 0.0;    // Brody bin centroid
  double adjunct = 0.0;   // 1 - omega
  double f_reg = 0.0;
  double freg_energy = 0.0;
};

struct CompareOptions {
  double energy_tol = 0.1;  // max |E_brody - E_freg| for a join
  std::optional<double> window_min;
  std::optional<double> window_max;
};

struct Comparison {
  std::vector<JoinedPoint> points;
  double pearson = 0.0;   // NaN with fewer than 3 points or constant input
  bool restricted = false;  // ranges did not coincide; join limited to overlap
  double overlap_min = 0.0;
  double overlap_max = 0.0;
};

/// Each omega point inside the overlap of both energy ranges (and the
/// optional window) is joined to the nearest f_reg point within
/// energy_tol. Throws std::invalid_argument when nothing joins.
Comparison compare_curves(const Curve& omega, const Curve& f_reg,
                          const CompareOptions& options = {});

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Indices of the largest and smallest value (first occurrence).
std::pair<std::size_t, std::size_t> principal_extrema(std::span<const double> values);

/// Linear interpolation of a curve sorted by energy; clamped at the ends.
double interpolate(const Curve& curve, double energy);

}  // namespace gcm
