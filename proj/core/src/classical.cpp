#include "gcm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "adaptive_rk.hpp"
#include "gcm/parallel.hpp"
#include "gcm/random.hpp"

namespace gcm {

namespace {

void check_classical(const ModelParams& p) {
  if (!std::isfinite(p.A) || !std::isfinite(p.B) || !std::isfinite(p.C) || !std::isfinite(p.K))
    throw std::invalid_argument("model parameters must be finite");
  if (!(p.K > 0.0)) throw std::invalid_argument("K must be positive");
  if (p.C < 0.0) throw std::invalid_argument("C must be non-negative");
}

// Force -grad V and the Hessian, written out for the inner loop.
struct Forces {
  double A, B, C, invK;

  void gradient(double x, double y, double& gx, double& gy) const {
    const double r2 = x * x + y * y;
    gx = 2.0 * A * x + 3.0 * B * (x * x - y * y) + 4.0 * C * r2 * x;
    gy = 2.0 * A * y - 6.0 * B * x * y + 4.0 * C * r2 * y;
  }
  void hessian(double x, double y, double& hxx, double& hxy, double& hyy) const {
    const double r2 = x * x + y * y;
    hxx = 2.0 * A + 6.0 * B * x + 4.0 * C * (r2 + 2.0 * x * x);
    hxy = -6.0 * B * y + 8.0 * C * x * y;
    hyy = 2.0 * A - 6.0 * B * x + 4.0 * C * (r2 + 2.0 * y * y);
  }
};

Forces forces_of(const ModelParams& p) { return {p.A, p.B, p.C, 1.0 / p.K}; }

using State4 = std::array<double, 4>;
using State12 = std::array<double, 12>;

double energy_of(const ModelParams& p, double x, double y, double px, double py) {
  return 0.5 * (px * px + py * py) / p.K + potential(p, CartesianCoords{x, y});
}

double normalize(double* w) {
  double n = 0.0;
  for (int i = 0; i < 4; ++i) n += w[i] * w[i];
  n = std::sqrt(n);
  if (n > 0.0)
    for (int i = 0; i < 4; ++i) w[i] /= n;
  return n;
}

double sali_of(const double* w1, const double* w2) {
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus += (w1[i] + w2[i]) * (w1[i] + w2[i]);
    minus += (w1[i] - w2[i]) * (w1[i] - w2[i]);
  }
  return std::sqrt(std::min(plus, minus));
}

}  // namespace

double hamiltonian_value(const PhasePoint& p, const ModelParams& params) {
  return energy_of(params, p.x, p.y, p.px, p.py);
}

double energy_drift_scale(const ModelParams& params, double E) {
  double v_min = 0.0;
  if (params.C > 0.0) v_min = global_minimum(params).energy;
  const double s = std::max(std::abs(E), std::abs(v_min));
  return s > 0.0 ? s : 1.0;
}

Trajectory integrate(const PhasePoint& p0, const ModelParams& params, double t_max,
                     const IntegrationOptions& options) {
  check_classical(params);
  if (!(t_max > 0.0)) throw std::invalid_argument("integrate: t_max must be positive");
  if (!(options.sample_interval > 0.0))
    throw std::invalid_argument("integrate: sample_interval must be positive");
  const Forces F = forces_of(params);
  auto rhs = [&F](double, const State4& s, State4& d) {
    d[0] = s[2] * F.invK;
    d[1] = s[3] * F.invK;
    double gx, gy;
    F.gradient(s[0], s[1], gx, gy);
    d[2] = -gx;
    d[3] = -gy;
  };

  Trajectory tr;
  const double E0 = hamiltonian_value(p0, params);
  const double scale = energy_drift_scale(params, E0);
  State4 y{p0.x, p0.y, p0.px, p0.py};
  double t = 0.0;
  AdaptiveRk78<4> ode(options.ode);
  tr.times.push_back(0.0);
  tr.points.push_back(p0);
  for (std::size_t k = 1;; ++k) {
    const double t_next = std::min(t_max, static_cast<double>(k) * options.sample_interval);
    const auto status = ode.advance(rhs, t, y, t_next);
    if (status != OdeStatus::Ok) {
      tr.ok = false;
      tr.failure = "integrator stopped (step-size underflow or step limit)";
      break;
    }
    tr.times.push_back(t);
    tr.points.push_back({y[0], y[1], y[2], y[3]});
    const double drift = std::abs(energy_of(params, y[0], y[1], y[2], y[3]) - E0) / scale;
    tr.max_energy_drift = std::max(tr.max_energy_drift, drift);
    if (!(drift <= options.energy_tol)) {
      tr.ok = false;
      tr.failure = "energy drift above tolerance";
      break;
    }
    if (t_next >= t_max) break;
  }
  tr.t_reached = t;
  return tr;
}

const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "regular";
    case Regularity::Chaotic: return "chaotic";
    case Regularity::Undecided: return "undecided";
  }
  return "?";
}

TrajectoryResult sali_classify(const PhasePoint& p0, const ModelParams& params,
                               const SaliOptions& options) {
  check_classical(params);
  if (!(options.t_max > 0.0) || !(options.renorm_interval > 0.0))
    throw std::invalid_argument("sali_classify: t_max and renorm_interval must be positive");
  const Forces F = forces_of(params);
  auto rhs = [&F](double, const State12& s, State12& d) {
    d[0] = s[2] * F.invK;
    d[1] = s[3] * F.invK;
    double gx, gy, hxx, hxy, hyy;
    F.gradient(s[0], s[1], gx, gy);
    F.hessian(s[0], s[1], hxx, hxy, hyy);
    d[2] = -gx;
    d[3] = -gy;
    for (int o = 4; o <= 8; o += 4) {
      d[o] = s[o + 2] * F.invK;
      d[o + 1] = s[o + 3] * F.invK;
      d[o + 2] = -(hxx * s[o] + hxy * s[o + 1]);
      d[o + 3] = -(hxy * s[o] + hyy * s[o + 1]);
    }
  };

  TrajectoryResult res;
  const double E0 = hamiltonian_value(p0, params);
  const double scale = energy_drift_scale(params, E0);
  State12 y{p0.x, p0.y, p0.px, p0.py, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
  double t = 0.0;
  AdaptiveRk78<12> ode(options.integration.ode);
  for (std::size_t k = 1;; ++k) {
    const double t_next = std::min(options.t_max, static_cast<double>(k) * options.renorm_interval);
    const auto status = ode.advance(rhs, t, y, t_next);
    res.t_reached = t;
    if (status != OdeStatus::Ok) {
      res.classification = Regularity::Undecided;
      return res;
    }
    const double drift = std::abs(energy_of(params, y[0], y[1], y[2], y[3]) - E0) / scale;
    res.max_energy_drift = std::max(res.max_energy_drift, drift);
    if (!(drift <= options.integration.energy_tol)) {
      res.classification = Regularity::Undecided;
      return res;
    }
    normalize(&y[4]);
    normalize(&y[8]);
    res.sali = sali_of(&y[4], &y[8]);
    if (res.sali < options.chaotic_threshold) {
      res.classification = Regularity::Chaotic;
      return res;
    }
    if (t_next >= options.t_max) break;
  }
  res.classification =
      res.sali >= options.regular_threshold ? Regularity::Regular : Regularity::Undecided;
  return res;
}

std::vector<PhasePoint> sample_energy_shell(const ModelParams& params, double E,
                                            std::size_t count, std::uint64_t seed) {
  params.validate();
  if (!std::isfinite(E)) throw std::invalid_argument("sample_energy_shell: energy must be finite");
  const double v_min = global_minimum(params).energy;
  if (E < v_min)
    throw std::invalid_argument("sample_energy_shell: energy below the potential minimum");
  std::vector<PhasePoint> out;
  if (count == 0) return out;
  out.reserve(count);

  // Accessible x on the y = 0 line: gamma = 0 gives x >= 0, gamma = pi gives x <= 0.
  std::vector<std::pair<double, double>> xs;
  for (const auto& [lo, hi] : accessible_boundary(params, E, 0.0)) xs.emplace_back(lo, hi);
  for (const auto& [lo, hi] : accessible_boundary(params, E, std::acos(-1.0)))
    xs.emplace_back(-hi, -lo);
  double total = 0.0;
  for (const auto& [lo, hi] : xs) total += hi - lo;

  // The y = 0 line always passes through a copy of the global minimum.
  const double head = std::max(0.0, E - v_min);
  const double p_max = std::sqrt(2.0 * params.K * head);
  if (!(total > 0.0) || !(p_max > 0.0)) {
    const double x_min = xs.empty() ? 0.0 : xs.front().first;
    out.assign(count, PhasePoint{x_min, 0.0, 0.0, 0.0});
    return out;
  }

  std::mt19937_64 rng(seed);
  while (out.size() < count) {
    double u = uniform01(rng) * total;
    double x = xs.back().second;
    for (const auto& [lo, hi] : xs) {
      if (u <= hi - lo) {
        x = lo + u;
        break;
      }
      u -= hi - lo;
    }
    const double px = (2.0 * uniform01(rng) - 1.0) * p_max;
    const double avail = 2.0 * params.K * (E - potential(params, CartesianCoords{x, 0.0})) - px * px;
    if (avail < 0.0) continue;
    out.push_back({x, 0.0, px, std::sqrt(avail)});
  }
  return out;
}

RegularFractionPoint regular_fraction(const ModelParams& params, double E, std::size_t count,
                                      std::uint64_t seed, const SaliOptions& options,
                                      unsigned threads) {
  if (count == 0) throw std::invalid_argument("regular_fraction: count must be positive");
  const auto points = sample_energy_shell(params, E, count, seed);
  std::vector<TrajectoryResult> results(points.size());
  parallel_for(points.size(), threads,
               [&](std::size_t i) { results[i] = sali_classify(points[i], params, options); });

  RegularFractionPoint r;
  r.B = params.B;
  r.E = E;
  r.n_total = points.size();
  for (const auto& t : results) {
    switch (t.classification) {
      case Regularity::Regular: ++r.n_regular; break;
      case Regularity::Chaotic: ++r.n_chaotic; break;
      case Regularity::Undecided: ++r.n_undecided; break;
    }
    r.max_energy_drift = std::max(r.max_energy_drift, t.max_energy_drift);
  }
  const std::size_t decided = r.n_total - r.n_undecided;
  if (decided == 0) {
    r.f_reg = NAN;
    r.sigma = NAN;
  } else {
    r.f_reg = static_cast<double>(r.n_regular) / static_cast<double>(decided);
    r.sigma = std::sqrt(r.f_reg * (1.0 - r.f_reg) / static_cast<double>(decided));
  }
  return r;
}

std::vector<RegularFractionPoint> freg_map(const ModelParams& params_template,
                                           std::span<const double> B_grid,
                                           std::span<const double> E_grid, std::size_t count,
                                           std::uint64_t seed, const SaliOptions& options,
                                           unsigned threads) {
  if (B_grid.empty() || E_grid.empty()) throw std::invalid_argument("freg_map: empty grid");
  std::vector<RegularFractionPoint> cells;
  cells.reserve(B_grid.size() * E_grid.size());
  for (std::size_t ib = 0; ib < B_grid.size(); ++ib) {
    ModelParams p = params_template;
    p.B = B_grid[ib];
    for (std::size_t ie = 0; ie < E_grid.size(); ++ie) {
      try {
        cells.push_back(
            regular_fraction(p, E_grid[ie], count, derive_seed(seed, ib, ie), options, threads));
      } catch (const std::exception& e) {
        RegularFractionPoint bad;
        bad.B = p.B;
        bad.E = E_grid[ie];
        bad.f_reg = NAN;
        bad.sigma = NAN;
        bad.error = e.what();
        cells.push_back(bad);
      }
    }
  }
  return cells;
}

}  // namespace gcm
