#include "gcm/compare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcm/log.hpp"

namespace gcm {

namespace {

std::pair<double, double> range_of(const Curve& c) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [e, v] : c) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

}  // namespace

Comparison compare_curves(const Curve& omega, const Curve& f_reg, const CompareOptions& options) {
  if (omega.empty() || f_reg.empty()) throw std::invalid_argument("compare: empty input curve");
  const auto [wlo, whi] = range_of(omega);
  const auto [flo, fhi] = range_of(f_reg);
  Comparison cmp;
  cmp.overlap_min = std::max(wlo, flo) - options.energy_tol;
  cmp.overlap_max = std::min(whi, fhi) + options.energy_tol;
  if (options.window_min) cmp.overlap_min = std::max(cmp.overlap_min, *options.window_min);
  if (options.window_max) cmp.overlap_max = std::min(cmp.overlap_max, *options.window_max);
  cmp.restricted = wlo < flo - options.energy_tol || whi > fhi + options.energy_tol;
  if (cmp.restricted) log_warning("compare: energy ranges differ; join restricted to the overlap");

  for (const auto& [e, w] : omega) {
    if (e < cmp.overlap_min || e > cmp.overlap_max || !std::isfinite(w)) continue;
    const auto best = std::min_element(f_reg.begin(), f_reg.end(), [e](const auto& a, const auto& b) {
      return std::abs(a.first - e) < std::abs(b.first - e);
    });
    if (std::abs(best->first - e) > options.energy_tol || !std::isfinite(best->second)) continue;
    cmp.points.push_back({e, 1.0 - w, best->second, best->first});
  }
  if (cmp.points.empty()) throw std::invalid_argument("compare: the curves do not overlap in energy");

  std::vector<double> a, f;
  for (const auto& p : cmp.points) {
    a.push_back(p.adjunct);
    f.push_back(p.f_reg);
  }
  cmp.pearson = pearson_correlation(a, f);
  return cmp;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) return NAN;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return NAN;
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::size_t, std::size_t> principal_extrema(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("principal_extrema: empty input");
  const auto mx = std::max_element(values.begin(), values.end());
  const auto mn = std::min_element(values.begin(), values.end());
  return {static_cast<std::size_t>(mx - values.begin()),
          static_cast<std::size_t>(mn - values.begin())};
}

double interpolate(const Curve& curve, double energy) {
  if (curve.empty()) throw std::invalid_argument("interpolate: empty curve");
  if (energy <= curve.front().first) return curve.front().second;
  if (energy >= curve.back().first) return curve.back().second;
  const auto it = std::lower_bound(curve.begin(), curve.end(), energy,
                                   [](const auto& p, double e) { return p.first < e; });
  const auto& [e1, v1] = *it;
  const auto& [e0, v0] = *(it - 1);
  if (e1 == e0) return v1;
  return v0 + (v1 - v0) * (energy - e0) / (e1 - e0);
}

}  // namespace gcm
