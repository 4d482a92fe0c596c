#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcm/log.hpp"
#include "gcm/spectral_stats.hpp"

namespace gcm {

namespace {

constexpr double kMaxUnfoldCondition = 1e10;

}  // namespace

std::vector<LevelBin> bin_levels(std::span<const double> levels, std::size_t bin_size,
                                 std::size_t shift) {
  if (bin_size == 0 || shift == 0)
    throw std::invalid_argument("bin_levels: bin_size and shift must be positive");
  std::vector<LevelBin> bins;
  if (levels.size() < bin_size) {
    log_warning("bin_levels: " + std::to_string(levels.size()) +
                " levels are fewer than one bin of " + std::to_string(bin_size));
    return bins;
  }
  for (std::size_t start = 0; start + bin_size <= levels.size(); start += shift) {
    LevelBin b;
    b.start = start;
    b.energies.assign(levels.begin() + static_cast<std::ptrdiff_t>(start),
                      levels.begin() + static_cast<std::ptrdiff_t>(start + bin_size));
    double sum = 0.0;
    for (double e : b.energies) sum += e;
    b.centroid = sum / static_cast<double>(bin_size);
    bins.push_back(std::move(b));
  }
  return bins;
}

std::vector<LevelBin> bin_levels(const Spectrum& spectrum, std::size_t bin_size,
                                 std::size_t shift) {
  return bin_levels(spectrum.converged(), bin_size, shift);
}

UnfoldedSpacings unfold(std::span<const double> energies, int degree) {
  if (degree < 0) throw std::invalid_argument("unfold: degree must be non-negative");
  const std::size_t n = energies.size();
  if (n < static_cast<std::size_t>(degree) + 2)
    throw std::invalid_argument("unfold: need at least degree + 2 levels");
  if (!std::is_sorted(energies.begin(), energies.end()))
    throw std::invalid_argument("unfold: energies must be ascending");

  const double lo = energies.front(), hi = energies.back();
  if (!(hi > lo)) throw DegenerateFitError("unfold: all levels coincide");
  const double center = 0.5 * (lo + hi), half = 0.5 * (hi - lo);

  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd V(static_cast<Eigen::Index>(n), cols);
  Eigen::VectorXd N(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (energies[i] - center) / half;
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      V(static_cast<Eigen::Index>(i), c) = p;
      p *= t;
    }
    N(static_cast<Eigen::Index>(i)) = static_cast<double>(i) + 0.5;
  }

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(condition < kMaxUnfoldCondition))
    throw DegenerateFitError("unfold: ill-conditioned polynomial fit (condition " +
                             std::to_string(condition) + "); lower the unfolding degree");
  const Eigen::VectorXd coef = svd.solve(N);
  const Eigen::VectorXd smooth = V * coef;

  UnfoldedSpacings out;
  out.condition = condition;
  out.spacings.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = smooth(static_cast<Eigen::Index>(i + 1)) - smooth(static_cast<Eigen::Index>(i));
    if (s > 0.0)
      out.spacings.push_back(s);
    else
      ++out.dropped;
  }
  if (out.spacings.empty()) throw DegenerateFitError("unfold: no positive spacings");
  double sum = 0.0;
  for (double s : out.spacings) sum += s;
  out.raw_mean = sum / static_cast<double>(out.spacings.size());
  for (double& s : out.spacings) s /= out.raw_mean;
  return out;
}

}  // namespace gcm
