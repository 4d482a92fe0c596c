// Probability densities of eigenstates in the (x, y) shape plane.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gcm/basis.hpp"
#include "gcm/model.hpp"

namespace gcm {

/// Evaluates Psi = sum_q c_q psi_q at many points, reusing the grouping of
/// the basis by angular quantum number.
class WavefunctionEvaluator {
 public:
  WavefunctionEvaluator(std::span<const double> coeffs, const BasisSpec& spec);

  double amplitude(ShapeCoords c) const;
  /// Probability per unit area dx dy: |Psi|^2 in 2D and
  /// |Psi|^2 beta^3 |sin 3 gamma| in 5D.
  double density(CartesianCoords c) const;

 private:
  BasisSpec spec_;
  // coeff_[m][n]; zero where (n, m) is not in the basis.
  std::vector<std::vector<double>> coeff_;
  mutable std::vector<double> radial_;
  mutable std::vector<double> angular_;
};

double density_at(std::span<const double> coeffs, const BasisSpec& spec, CartesianCoords c);

struct GridAxis {
  double min = -1.0;
  double max = 1.0;
  std::size_t count = 2;

  double step() const { return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0; }
  double at(std::size_t i) const { return min + static_cast<double>(i) * step(); }
};

using Polyline = std::vector<CartesianCoords>;

struct DensityGrid {
  GridAxis x_axis;
  GridAxis y_axis;
  std::vector<double> values;  // values[iy * x_axis.count + ix]
  QuantScheme scheme = QuantScheme::TwoDEven;
  std::size_t level_index = 0;
  double energy = 0.0;
  std::vector<Polyline> boundary;  // V(x, y) = energy contours

  double at(std::size_t ix, std::size_t iy) const { return values[iy * x_axis.count + ix]; }
  double peak() const;
  /// Riemann sum of values times the cell area.
  double integral() const;
};

/// Contours of V = E from accessible_boundary on `samples` rays.
std::vector<Polyline> kinematic_boundary(const ModelParams& params, double E,
                                         std::size_t samples = 720);

DensityGrid density_grid(std::span<const double> coeffs, const BasisSpec& spec,
                         const ModelParams& params, const GridAxis& x_axis,
                         const GridAxis& y_axis, double energy, std::size_t level_index = 0,
                         unsigned threads = 1);

}  // namespace gcm
