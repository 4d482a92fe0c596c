// Classical J = 0 dynamics of the model: trajectories, SALI
// classification and the regular fraction of the energy shell.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcm/model.hpp"
#include "gcm/ode.hpp"

namespace gcm {

struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
};

/// (px^2 + py^2) / (2K) + V(x, y)
double hamiltonian_value(const PhasePoint& p, const ModelParams& params);

/// Scale used for relative energy drift: max(|E|, |V_min|), 1 when both vanish.
double energy_drift_scale(const ModelParams& params, double E);

inline constexpr double kDefaultEnergyTol = 1e-9;

struct IntegrationOptions {
  OdeTolerances ode;
  double energy_tol = kDefaultEnergyTol;
  double sample_interval = 1.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  double max_energy_drift = 0.0;  // relative, see energy_drift_scale
  double t_reached = 0.0;
  bool ok = true;
  std::string failure;
};

/// Hamilton's equations from p0 up to t_max, sampled every
/// options.sample_interval. ok == false when the drift exceeded
/// options.energy_tol or the integrator gave up.
Trajectory integrate(const PhasePoint& p0, const ModelParams& params, double t_max,
                     const IntegrationOptions& options = {});

enum class Regularity { Regular, Chaotic, Undecided };
const char* to_string(Regularity r);

struct SaliOptions {
  double t_max = 1e4;
  double chaotic_threshold = 1e-8;
  double regular_threshold = 1e-4;
  double renorm_interval = 1.0;
  IntegrationOptions integration;
};

struct TrajectoryResult {
  Regularity classification = Regularity::Undecided;
  double sali = 1.0;
  double t_reached = 0.0;
  double max_energy_drift = 0.0;
};

/// Trajectory plus two deviation vectors under the tangent flow, both
/// renormalized every renorm_interval. SALI = min |w1 -+ w2|.
TrajectoryResult sali_classify(const PhasePoint& p0, const ModelParams& params,
                               const SaliOptions& options = {});

/// Uniform samples on the y = 0 section at energy E: (x, px) uniform over
/// E - V(x, 0) - px^2 / (2K) >= 0, py = +sqrt(2K (E - V(x, 0)) - px^2).
std::vector<PhasePoint> sample_energy_shell(const ModelParams& params, double E,
                                            std::size_t count, std::uint64_t seed);

struct RegularFractionPoint {
  double B = 0.0;
  double E = 0.0;
  double f_reg = 0.0;  // NaN when every trajectory was undecided
  double sigma = 0.0;  // binomial sqrt(f (1 - f) / n_decided)
  std::size_t n_regular = 0;
  std::size_t n_chaotic = 0;
  std::size_t n_undecided = 0;
  std::size_t n_total = 0;
  double max_energy_drift = 0.0;
  std::string error;  // non-empty when the cell could not be computed
};

/// f_reg = n_regular / (n_total - n_undecided) over `count` shell samples.
RegularFractionPoint regular_fraction(const ModelParams& params, double E, std::size_t count,
                                      std::uint64_t seed, const SaliOptions& options = {},
                                      unsigned threads = 1);

/// regular_fraction on the B x E grid (row-major, B outer). The template's
/// B is replaced per row. Cells that fail carry `error` and the map goes on.
std::vector<RegularFractionPoint> freg_map(const ModelParams& params_template,
                                           std::span<const double> B_grid,
                                           std::span<const double> E_grid, std::size_t count,
                                           std::uint64_t seed, const SaliOptions& options = {},
                                           unsigned threads = 1);

}  // namespace gcm
