#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gcm/spectral_stats.hpp"

namespace gcm {

namespace {

// |FFT(delta)|^2 / N for k = 0 .. N/2.
std::vector<double> delta_power(std::span<const double> spacings) {
  const std::size_t n = spacings.size();
  std::vector<double> delta(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += spacings[i] - 1.0;
    delta[i] = acc;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, delta);
  std::vector<double> power(n / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spec[k]) / static_cast<double>(n);
  return power;
}

NoiseExponent fit_power_law(const std::vector<double>& power, std::size_t n, double band_fraction) {
  if (!(band_fraction > 0.0 && band_fraction <= 1.0))
    throw std::invalid_argument("one_over_f_alpha: band_fraction must lie in (0, 1]");
  const std::size_t k_max = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::floor(band_fraction * static_cast<double>(n / 2))));
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k <= k_max && k < power.size(); ++k) {
    if (!(power[k] > 0.0)) continue;
    lx.push_back(std::log(static_cast<double>(k) / static_cast<double>(n)));
    ly.push_back(std::log(power[k]));
  }
  if (lx.size() < 3) throw std::invalid_argument("one_over_f_alpha: too few usable frequencies");
  const auto m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - my - slope * (lx[i] - mx);
    rss += r * r;
  }
  NoiseExponent out;
  out.alpha = -slope;
  out.alpha_stderr = std::sqrt(rss / (m - 2.0) / sxx);
  out.frequencies = lx.size();
  return out;
}

}  // namespace

NoiseExponent one_over_f_alpha(std::span<const double> spacings, double band_fraction) {
  if (spacings.size() < kMinNoiseSpacings)
    throw std::invalid_argument("one_over_f_alpha: at least 256 spacings required");
  return fit_power_law(delta_power(spacings), spacings.size(), band_fraction);
}

NoiseExponent one_over_f_alpha(std::span<const std::vector<double>> sequences,
                               double band_fraction) {
  if (sequences.empty()) throw std::invalid_argument("one_over_f_alpha: no sequences");
  const std::size_t n = sequences.front().size();
  if (n < kMinNoiseSpacings)
    throw std::invalid_argument("one_over_f_alpha: at least 256 spacings required");
  std::vector<double> mean(n / 2 + 1, 0.0);
  for (const auto& seq : sequences) {
    if (seq.size() != n) throw std::invalid_argument("one_over_f_alpha: sequences differ in length");
    const auto p = delta_power(seq);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k];
  }
  for (double& v : mean) v /= static_cast<double>(sequences.size());
  return fit_power_law(mean, n, band_fraction);
}

}  // namespace gcm
