#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gcm/random.hpp"
#include "gcm/spectral_stats.hpp"

namespace gcm {

double brody_alpha(double omega) {
  if (!(omega > -1.0)) throw std::invalid_argument("brody: omega must exceed -1");
  return std::pow(std::tgamma((omega + 2.0) / (omega + 1.0)), omega + 1.0);
}

double brody_pdf(double s, double omega) {
  if (s < 0.0) return 0.0;
  const double a = brody_alpha(omega);
  if (s == 0.0) return omega == 0.0 ? 1.0 : (omega < 0.0 ? INFINITY : 0.0);
  return (omega + 1.0) * a * std::pow(s, omega) * std::exp(-a * std::pow(s, omega + 1.0));
}

double brody_cdf(double s, double omega) {
  if (s <= 0.0) return 0.0;
  const double a = brody_alpha(omega);
  return -std::expm1(-a * std::pow(s, omega + 1.0));
}

BrodyFit fit_brody(std::span<const double> spacings) {
  if (spacings.size() < kMinFitSpacings)
    throw std::invalid_argument("fit_brody: at least 50 spacings required");
  std::vector<double> s(spacings.begin(), spacings.end());
  std::sort(s.begin(), s.end());

  const auto n = static_cast<double>(s.size());
  const double lo = s.front(), hi = s.back();
  if (!(hi > 0.0) || (hi - lo) <= 1e-9 * hi)
    throw DegenerateFitError("fit_brody: spacings have (numerically) zero variance");

  // T = ln(-ln(1 - I)) against X = ln s; points with I >= 1 - 1/(2N) sit on
  // the divergent end of the double log and are left out.
  const double i_max = 1.0 - 1.0 / (2.0 * n);
  std::vector<double> X, T;
  X.reserve(s.size());
  T.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double I = static_cast<double>(i + 1) / (n + 1.0);
    if (I >= i_max || !(s[i] > 0.0)) continue;
    X.push_back(std::log(s[i]));
    T.push_back(std::log(-std::log1p(-I)));
  }
  const auto m = static_cast<double>(X.size());
  if (X.size() < 3) throw DegenerateFitError("fit_brody: too few usable points");

  double mx = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    mt += T[i];
  }
  mx /= m;
  mt /= m;
  double sxx = 0.0, sxt = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxt += (X[i] - mx) * (T[i] - mt);
  }
  if (!(sxx > 0.0)) throw DegenerateFitError("fit_brody: degenerate abscissa");

  BrodyFit fit;
  fit.slope = sxt / sxx;
  fit.intercept = mt - fit.slope * mx;
  fit.omega = fit.slope - 1.0;
  fit.samples = X.size();
  double rss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = T[i] - fit.intercept - fit.slope * X[i];
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / m);
  if (fit.omega > -1.0) {
    fit.alpha_omega = brody_alpha(fit.omega);
    fit.intercept_gap = std::abs(fit.intercept - std::log(fit.alpha_omega));
  } else {
    fit.alpha_omega = NAN;
    fit.intercept_gap = INFINITY;
  }
  return fit;
}

std::vector<double> brody_sample(double omega, std::size_t count, std::uint64_t seed) {
  const double a = brody_alpha(omega);
  const double inv = 1.0 / (omega + 1.0);
  std::mt19937_64 rng(seed);
  std::vector<double> s(count);
  for (auto& v : s) v = std::pow(-std::log1p(-uniform01(rng)) / a, inv);
  return s;
}

std::vector<BiasRow> bias_study(std::size_t sample_size, std::span<const double> omegas,
                                std::size_t trials, std::uint64_t seed) {
  if (sample_size < kMinFitSpacings)
    throw std::invalid_argument("bias_study: sample_size must be at least 50");
  std::vector<BiasRow> rows;
  rows.reserve(omegas.size());
  for (std::size_t w = 0; w < omegas.size(); ++w) {
    BiasRow row;
    row.omega_true = omegas[w];
    row.sample_size = sample_size;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto sample = brody_sample(omegas[w], sample_size, derive_seed(seed, w, t));
      const double om = fit_brody(sample).omega;
      sum += om;
      sum2 += om * om;
      ++row.trials;
    }
    if (row.trials > 0) {
      const auto nt = static_cast<double>(row.trials);
      row.mean_fit = sum / nt;
      row.bias = row.mean_fit - row.omega_true;
      row.stddev = row.trials > 1
                       ? std::sqrt(std::max(0.0, (sum2 - nt * row.mean_fit * row.mean_fit) / (nt - 1.0)))
                       : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> interpolate_bias(std::span<const BiasRow> table, double omega) {
  if (table.empty()) return {0.0, 0.0};
  std::vector<BiasRow> t(table.begin(), table.end());
  std::sort(t.begin(), t.end(),
            [](const BiasRow& a, const BiasRow& b) { return a.omega_true < b.omega_true; });
  if (!(omega > t.front().omega_true)) return {t.front().bias, t.front().stddev};
  if (!(omega < t.back().omega_true)) return {t.back().bias, t.back().stddev};
  std::size_t i = 1;
  while (t[i].omega_true < omega) ++i;
  const double f = (omega - t[i - 1].omega_true) / (t[i].omega_true - t[i - 1].omega_true);
  return {t[i - 1].bias + f * (t[i].bias - t[i - 1].bias),
          t[i - 1].stddev + f * (t[i].stddev - t[i - 1].stddev)};
}

}  // namespace gcm
