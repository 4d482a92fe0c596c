// Nearest-neighbor spacing statistics of level sequences: binning,
// polynomial unfolding, Brody-parameter fits, the finite-sample bias study
// and the 1/f^alpha noise exponent.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcm/basis.hpp"
#include "gcm/eigensolver.hpp"
#include "gcm/model.hpp"

namespace gcm {

/// Raised when a spacing set cannot be fitted (e.g. a picket fence).
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contiguous window of levels [start, start + energies.size()).
struct LevelBin {
  std::size_t start = 0;
  std::vector<double> energies;
  double centroid = 0.0;
};

inline constexpr std::size_t kDefaultBinSize = 1000;
inline constexpr std::size_t kDefaultBinShift = 100;
inline constexpr int kDefaultUnfoldDegree = 5;

/// Overlapping windows [0, size), [shift, shift + size), ... fully inside
/// `levels`; trailing partial windows are discarded.
std::vector<LevelBin> bin_levels(std::span<const double> levels,
                                 std::size_t bin_size = kDefaultBinSize,
                                 std::size_t shift = kDefaultBinShift);
std::vector<LevelBin> bin_levels(const Spectrum& spectrum, std::size_t bin_size = kDefaultBinSize,
                                 std::size_t shift = kDefaultBinShift);

struct UnfoldedSpacings {
  std::vector<double> spacings;  // mean exactly 1
  std::size_t dropped = 0;       // non-positive spacings from a non-monotone fit
  double raw_mean = 0.0;         // mean before renormalization
  double condition = 0.0;        // condition number of the fit design matrix
};

/// Least-squares polynomial fit of the staircase N(E) (taken at step
/// midpoints), s_i = N~(e_{i+1}) - N~(e_i), renormalized to unit mean.
/// Throws DegenerateFitError on an ill-conditioned fit.
UnfoldedSpacings unfold(std::span<const double> energies, int degree = kDefaultUnfoldDegree);
inline UnfoldedSpacings unfold(const LevelBin& bin, int degree = kDefaultUnfoldDegree) {
  return unfold(bin.energies, degree);
}

/// alpha_w = Gamma((w + 2) / (w + 1))^(w + 1)
double brody_alpha(double omega);
double brody_pdf(double s, double omega);
double brody_cdf(double s, double omega);

struct BrodyFit {
  double omega = 0.0;
  double alpha_omega = 1.0;
  double slope = 1.0;
  double intercept = 0.0;
  double residual_rms = 0.0;   // of the double-log linear fit
  double intercept_gap = 0.0;  // |intercept - ln alpha(omega)|
  std::size_t samples = 0;
  double syst_err = 0.0;       // filled in from a bias study
  double stat_err = 0.0;

  bool in_unit_interval() const { return omega >= 0.0 && omega <= 1.0; }
};

inline constexpr std::size_t kMinFitSpacings = 50;

/// Linear fit of ln ln [1 - I(s)]^-1 against ln s with the empirical CDF at
/// plotting positions i / (N + 1). slope = 1 + omega.
BrodyFit fit_brody(std::span<const double> spacings);

/// Inverse-CDF samples s = (-ln(1 - u) / alpha_w)^(1 / (w + 1)).
std::vector<double> brody_sample(double omega, std::size_t count, std::uint64_t seed);

struct BiasRow {
  double omega_true = 0.0;
  double mean_fit = 0.0;
  double bias = 0.0;  // mean_fit - omega_true
  double stddev = 0.0;
  std::size_t trials = 0;
  std::size_t sample_size = 0;
};

/// Monte-Carlo: fit `trials` independent Brody samples of `sample_size`
/// spacings for each omega.
std::vector<BiasRow> bias_study(std::size_t sample_size, std::span<const double> omegas,
                                std::size_t trials, std::uint64_t seed);

/// Bias and spread interpolated (linearly in omega, clamped) from a table.
std::pair<double, double> interpolate_bias(std::span<const BiasRow> table, double omega);

enum BinFlag : unsigned {
  kFlagDegenerate = 1u << 0,      // zero-variance spacings, no fit
  kFlagOmegaOutOfRange = 1u << 1, // omega outside [0, 1]
  kFlagNonBrody = 1u << 2,        // fit diagnostics reject the Brody shape
  kFlagDroppedSpacings = 1u << 3, // unfolding produced non-positive spacings
  kFlagUnfoldFailed = 1u << 4,
};

/// "ok" or '|'-joined flag names.
std::string flags_to_string(unsigned flags);

struct BrodyPoint {
  double centroid_energy = 0.0;
  double omega = 0.0;  // NaN when the bin could not be fitted
  double stat_err = 0.0;
  double syst_err = 0.0;
  std::size_t bin_start = 0;
  std::size_t bin_size = 0;
  unsigned flags = 0;
  BrodyFit fit;
};

struct BrodyCurve {
  QuantScheme scheme = QuantScheme::TwoDEven;
  ModelParams params;
  std::vector<BrodyPoint> points;
};

struct StatsConfig {
  std::size_t bin_size = kDefaultBinSize;
  std::size_t shift = kDefaultBinShift;
  int unfold_degree = kDefaultUnfoldDegree;
  std::uint64_t seed = 1;
  std::size_t bias_trials = 200;  // 0 disables error attachment
  // Thresholds of the non-Brody flag; both sit far outside the spread of
  // fits to genuine Brody samples of 1000 spacings.
  double max_residual_rms = 0.2;
  double max_intercept_gap = 0.2;
};

/// bin_levels -> unfold -> fit_brody for every bin, with bias-study errors.
BrodyCurve omega_vs_energy(std::span<const double> levels, const StatsConfig& config = {});
BrodyCurve omega_vs_energy(const Spectrum& spectrum, const StatsConfig& config = {});

struct NnsHistogram {
  double bin_width = 0.0;
  double omega = 0.0;
  std::vector<double> centers;
  std::vector<double> density;  // normalized to unit area
  std::vector<double> poisson;
  std::vector<double> wigner;
  std::vector<double> brody;
};

/// Histogram of spacings plus reference curves at the bin centers. The
/// Brody overlay uses `omega` if given, otherwise a fit of the spacings.
NnsHistogram nns_histogram(std::span<const double> spacings, double bin_width,
                           std::optional<double> omega = std::nullopt);

struct NoiseExponent {
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  std::size_t frequencies = 0;
};

inline constexpr std::size_t kMinNoiseSpacings = 256;

/// Power spectrum of delta_q = sum_{i<=q} (s_i - 1), slope of log P against
/// log f over the lowest `band_fraction` of the positive frequencies.
NoiseExponent one_over_f_alpha(std::span<const double> spacings, double band_fraction = 0.5);

/// Same with the power spectrum averaged over equally long sequences.
NoiseExponent one_over_f_alpha(std::span<const std::vector<double>> sequences,
                               double band_fraction = 0.5);

}  // namespace gcm
