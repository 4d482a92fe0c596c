#include "gcm/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcm/parallel.hpp"

namespace gcm {

WavefunctionEvaluator::WavefunctionEvaluator(std::span<const double> coeffs,
                                             const BasisSpec& spec)
    : spec_(spec) {
  spec.validate();
  if (coeffs.size() != spec.dimension)
    throw std::invalid_argument("density: coefficient count differs from the basis dimension");
  const auto states = enumerate_basis(spec);
  for (std::size_t q = 0; q < states.size(); ++q) {
    const auto [n, m] = states[q];
    if (static_cast<std::size_t>(m) >= coeff_.size()) coeff_.resize(m + 1);
    auto& row = coeff_[m];
    if (static_cast<std::size_t>(n) >= row.size()) row.resize(n + 1, 0.0);
    row[n] = coeffs[q];
  }
  std::size_t n_max = 0;
  for (const auto& row : coeff_) n_max = std::max(n_max, row.size());
  radial_.resize(n_max);
  angular_.resize(coeff_.size());
}

double WavefunctionEvaluator::amplitude(ShapeCoords c) const {
  angular_wavefunctions(spec_.scheme, c.gamma, angular_);
  double psi = 0.0;
  for (std::size_t m = 0; m < coeff_.size(); ++m) {
    const auto& row = coeff_[m];
    if (row.empty() || angular_[m] == 0.0) continue;
    std::span<double> r(radial_.data(), row.size());
    radial_wavefunctions(static_cast<int>(m), spec_, c.beta, r);
    double s = 0.0;
    for (std::size_t n = 0; n < row.size(); ++n) s += row[n] * r[n];
    psi += s * angular_[m];
  }
  return psi;
}

double WavefunctionEvaluator::density(CartesianCoords c) const {
  const ShapeCoords sc = to_polar(c);
  const double psi = amplitude(sc);
  double d = psi * psi;
  if (spec_.scheme == QuantScheme::FiveD)
    d *= sc.beta * sc.beta * sc.beta * std::abs(std::sin(3.0 * sc.gamma));
  return d;
}

double density_at(std::span<const double> coeffs, const BasisSpec& spec, CartesianCoords c) {
  return WavefunctionEvaluator(coeffs, spec).density(c);
}

double DensityGrid::peak() const {
  double p = 0.0;
  for (double v : values) p = std::max(p, v);
  return p;
}

double DensityGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * x_axis.step() * y_axis.step();
}

std::vector<Polyline> kinematic_boundary(const ModelParams& params, double E,
                                         std::size_t samples) {
  std::vector<Polyline> done, open;
  std::vector<CartesianCoords> first_edges;
  std::size_t prev_count = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j <= samples; ++j) {
    const double gamma = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(samples);
    std::vector<double> radii;
    for (const auto& [lo, hi] : accessible_boundary(params, E, gamma)) {
      if (lo > 0.0) radii.push_back(lo);
      if (hi > lo) radii.push_back(hi);
    }
    if (radii.size() != prev_count) {
      for (auto& p : open)
        if (p.size() > 1) done.push_back(std::move(p));
      open.assign(radii.size(), Polyline{});
      prev_count = radii.size();
    }
    for (std::size_t e = 0; e < radii.size(); ++e)
      open[e].push_back(to_cartesian({radii[e], gamma}));
  }
  for (auto& p : open)
    if (p.size() > 1) done.push_back(std::move(p));
  return done;
}

DensityGrid density_grid(std::span<const double> coeffs, const BasisSpec& spec,
                         const ModelParams& params, const GridAxis& x_axis,
                         const GridAxis& y_axis, double energy, std::size_t level_index,
                         unsigned threads) {
  if (x_axis.count < 2 || y_axis.count < 2 || !(x_axis.max > x_axis.min) ||
      !(y_axis.max > y_axis.min))
    throw std::invalid_argument("density_grid: each axis needs count >= 2 and max > min");
  DensityGrid g;
  g.x_axis = x_axis;
  g.y_axis = y_axis;
  g.scheme = spec.scheme;
  g.level_index = level_index;
  g.energy = energy;
  g.values.assign(x_axis.count * y_axis.count, 0.0);
  const WavefunctionEvaluator proto(coeffs, spec);
  parallel_for(y_axis.count, threads, [&](std::size_t iy) {
    const WavefunctionEvaluator eval = proto;  // scratch buffers are per copy
    const double y = y_axis.at(iy);
    for (std::size_t ix = 0; ix < x_axis.count; ++ix)
      g.values[iy * x_axis.count + ix] = eval.density({x_axis.at(ix), y});
  });
  g.boundary = kinematic_boundary(params, energy);
  return g;
}

}  // namespace gcm
