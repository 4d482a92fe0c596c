#include "gcm/spectral_stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gcm {

std::string flags_to_string(unsigned flags) {
  if (flags == 0) return "ok";
  static constexpr std::pair<unsigned, const char*> names[] = {
      {kFlagDegenerate, "degenerate"},
      {kFlagOmegaOutOfRange, "omega_out_of_range"},
      {kFlagNonBrody, "non_brody"},
      {kFlagDroppedSpacings, "dropped_spacings"},
      {kFlagUnfoldFailed, "unfold_failed"},
  };
  std::string out;
  for (const auto& [bit, name] : names) {
    if (!(flags & bit)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

BrodyCurve omega_vs_energy(std::span<const double> levels, const StatsConfig& config) {
  BrodyCurve curve;
  const auto bins = bin_levels(levels, config.bin_size, config.shift);
  if (bins.empty()) return curve;

  std::vector<BiasRow> table;
  if (config.bias_trials > 0 && config.bin_size > kMinFitSpacings) {
    static constexpr double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    table = bias_study(config.bin_size - 1, grid, config.bias_trials, config.seed);
  }

  curve.points.reserve(bins.size());
  for (const auto& bin : bins) {
    BrodyPoint p;
    p.centroid_energy = bin.centroid;
    p.bin_start = bin.start;
    p.bin_size = bin.energies.size();
    p.omega = NAN;
    p.stat_err = NAN;
    p.syst_err = NAN;
    try {
      const auto u = unfold(bin, config.unfold_degree);
      if (u.dropped > 0) p.flags |= kFlagDroppedSpacings;
      p.fit = fit_brody(u.spacings);
      p.omega = p.fit.omega;
      if (!p.fit.in_unit_interval()) p.flags |= kFlagOmegaOutOfRange;
      if (p.fit.residual_rms > config.max_residual_rms ||
          !(p.fit.intercept_gap <= config.max_intercept_gap))
        p.flags |= kFlagNonBrody;
      if (!table.empty()) {
        const auto [bias, spread] = interpolate_bias(table, p.omega);
        p.syst_err = bias;
        p.stat_err = spread;
        p.fit.syst_err = bias;
        p.fit.stat_err = spread;
      }
    } catch (const DegenerateFitError&) {
      p.flags |= kFlagDegenerate;
    } catch (const std::invalid_argument&) {
      p.flags |= kFlagUnfoldFailed;
    }
    curve.points.push_back(p);
  }
  return curve;
}

BrodyCurve omega_vs_energy(const Spectrum& spectrum, const StatsConfig& config) {
  auto curve = omega_vs_energy(spectrum.converged(), config);
  curve.scheme = spectrum.scheme;
  curve.params = spectrum.params;
  return curve;
}

NnsHistogram nns_histogram(std::span<const double> spacings, double bin_width,
                           std::optional<double> omega) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("nns_histogram: bin_width must be positive");
  NnsHistogram h;
  h.bin_width = bin_width;
  h.omega = omega ? *omega : fit_brody(spacings).omega;
  double s_max = 0.0;
  for (double s : spacings) s_max = std::max(s_max, s);
  const auto nbins = static_cast<std::size_t>(std::floor(s_max / bin_width)) + 1;
  std::vector<std::size_t> counts(nbins, 0);
  for (double s : spacings)
    if (s >= 0.0) ++counts[std::min(nbins - 1, static_cast<std::size_t>(s / bin_width))];

  const double norm = spacings.empty() ? 0.0 : 1.0 / (static_cast<double>(spacings.size()) * bin_width);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < nbins; ++i) {
    const double c = (static_cast<double>(i) + 0.5) * bin_width;
    h.centers.push_back(c);
    h.density.push_back(static_cast<double>(counts[i]) * norm);
    h.poisson.push_back(std::exp(-c));
    h.wigner.push_back(0.5 * pi * c * std::exp(-0.25 * pi * c * c));
    h.brody.push_back(h.omega > -1.0 ? brody_pdf(c, h.omega) : NAN);
  }
  return h;
}

}  // namespace gcm
