#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcm/classical.hpp"
#include "oracles.hpp"

using namespace gcm;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams fig1() { return ModelParams::make(-1.0, 1.09, 1.0, 1.0, 0.05); }

PhasePoint rotate(const PhasePoint& p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y, c * p.px - s * p.py, s * p.px + c * p.py};
}

}  // namespace

TEST(Classical, HamiltonianValue) {
  const auto ring = ModelParams::make(-1.0, 0.0, 1.0, 1.0, 0.05);
  EXPECT_EQ(hamiltonian_value({}, fig1()), 0.0);
  EXPECT_NEAR(hamiltonian_value({1.0, 0.0, 0.0, 0.0}, ring), 0.0, 1e-15);
  const PhasePoint p{0.3, -0.7, 0.25, 0.4};
  EXPECT_NEAR(hamiltonian_value(rotate(p, 2 * kPi / 3), fig1()), hamiltonian_value(p, fig1()), 1e-14);
  auto q = ModelParams::make(-1.0, 1.09, 1.0, 2.0, 0.05);
  EXPECT_NEAR(hamiltonian_value({0.0, 0.0, 1.0, 1.0}, q), 0.5, 1e-15);
}

TEST(Classical, HarmonicEllipse) {
  // V = A r^2, K = 1: x(t) = x0 cos wt + px0 / w sin wt with w = sqrt(2A).
  const auto p = ModelParams::make(0.5, 0.0, 0.0, 1.0, 0.1);
  const double w = 1.0;
  const PhasePoint p0{0.7, -0.2, 0.1, 0.45};
  const double period = 2 * kPi / w;
  IntegrationOptions o;
  o.sample_interval = period;
  const auto tr = integrate(p0, p, 100 * period, o);
  ASSERT_TRUE(tr.ok) << tr.failure;
  ASSERT_EQ(tr.points.size(), tr.times.size());
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    const double x = p0.x * std::cos(w * t) + p0.px / w * std::sin(w * t);
    const double y = p0.y * std::cos(w * t) + p0.py / w * std::sin(w * t);
    EXPECT_NEAR(tr.points[i].x, x, 1e-8);
    EXPECT_NEAR(tr.points[i].y, y, 1e-8);
  }
  EXPECT_NEAR(tr.t_reached, 100 * period, 1e-9);
}

TEST(Classical, EnergyDriftBelowTolerance) {
  const auto p = fig1();
  for (const auto& p0 : sample_energy_shell(p, 0.5, 10, 4)) {
    const auto tr = integrate(p0, p, 2000.0);
    EXPECT_TRUE(tr.ok) << tr.failure;
    EXPECT_LT(tr.max_energy_drift, 1e-9);
  }
}

TEST(Classical, TimeReversal) {
  const auto p = fig1();
  const PhasePoint p0{-0.4, 0.1, 0.3, -0.5};
  IntegrationOptions o;
  o.sample_interval = 50.0;
  const auto fwd = integrate(p0, p, 50.0, o);
  ASSERT_TRUE(fwd.ok);
  auto back0 = fwd.points.back();
  back0.px = -back0.px;
  back0.py = -back0.py;
  const auto back = integrate(back0, p, 50.0, o);
  const auto& end = back.points.back();
  const double d = std::sqrt(std::pow(end.x - p0.x, 2) + std::pow(end.y - p0.y, 2) +
                             std::pow(-end.px - p0.px, 2) + std::pow(-end.py - p0.py, 2));
  EXPECT_LT(d, 1e-6);
}

TEST(Classical, IntegratorReportsDriftFailure) {
  const auto p = fig1();
  IntegrationOptions o;
  o.energy_tol = 1e-18;
  o.ode.rtol = o.ode.atol = 1e-6;
  const auto tr = integrate({0.5, 0.2, 0.3, 0.1}, p, 500.0, o);
  EXPECT_FALSE(tr.ok);
  EXPECT_FALSE(tr.failure.empty());
}

TEST(Classical, IntegrableCaseIsRegular) {
  const auto ring = ModelParams::make(-1.0, 0.0, 1.0, 1.0, 0.05);
  SaliOptions o;
  o.t_max = 2000.0;
  for (const auto& p0 : sample_energy_shell(ring, 0.3, 12, 2)) {
    const auto r = sali_classify(p0, ring, o);
    EXPECT_EQ(r.classification, Regularity::Regular) << r.sali;
    EXPECT_LT(r.max_energy_drift, 1e-9);
  }
}

TEST(Classical, HarmonicSaliNeverCollapses) {
  const auto p = ModelParams::make(0.5, 0.0, 0.0, 1.0, 0.1);
  SaliOptions o;
  o.t_max = 1000.0;
  const auto r = sali_classify({0.3, 0.2, -0.1, 0.4}, p, o);
  EXPECT_EQ(r.classification, Regularity::Regular);
  EXPECT_GT(r.sali, 1e-4);
}

TEST(Classical, ChaoticOrbitDetectedAndMatchesLyapunov) {
  const auto p = fig1();
  // A point high above the saddle region at E = 2 is strongly chaotic.
  const auto pts = sample_energy_shell(p, 2.0, 6, 77);
  int agree = 0;
  for (const auto& p0 : pts) {
    const auto r = sali_classify(p0, p);
    const double lambda = oracle::lyapunov_exponent(p, {p0.x, p0.y, p0.px, p0.py}, 1000.0);
    const bool chaotic = lambda > 0.02;
    if ((r.classification == Regularity::Chaotic) == chaotic) ++agree;
  }
  EXPECT_GE(agree, 5);
}

TEST(Classical, ClassificationInvariantUnderRotation) {
  const auto p = fig1();
  SaliOptions o;
  o.t_max = 3000.0;
  for (const auto& p0 : sample_energy_shell(p, 0.0, 6, 13)) {
    const auto a = sali_classify(p0, p, o);
    const auto b = sali_classify(rotate(p0, 2 * kPi / 3), p, o);
    EXPECT_EQ(a.classification, b.classification);
  }
}

TEST(Classical, SaliDeterministic) {
  const auto p = fig1();
  SaliOptions o;
  o.t_max = 500.0;
  const PhasePoint p0{-0.6, 0.0, 0.2, 0.3};
  const auto a = sali_classify(p0, p, o);
  const auto b = sali_classify(p0, p, o);
  EXPECT_EQ(a.sali, b.sali);
  EXPECT_EQ(a.classification, b.classification);
}

TEST(Classical, ShellSamplesOnShell) {
  const auto p = fig1();
  EXPECT_TRUE(sample_energy_shell(p, 0.0, 0, 1).empty());
  EXPECT_THROW(sample_energy_shell(p, -5.0, 3, 1), std::invalid_argument);
  const auto pts = sample_energy_shell(p, 0.3, 2000, 5);
  for (const auto& q : pts) {
    EXPECT_EQ(q.y, 0.0);
    EXPECT_GE(q.py, 0.0);
    EXPECT_NEAR(hamiltonian_value(q, p), 0.3, 1e-12);
  }
  const auto again = sample_energy_shell(p, 0.3, 2000, 5);
  EXPECT_EQ(again.front().x, pts.front().x);
}

TEST(Classical, ShellMarginalMatchesSectionArea) {
  const auto p = fig1();
  const double E = 0.1;
  const auto pts = sample_energy_shell(p, E, 10000, 99);
  std::vector<double> xs;
  for (const auto& q : pts) xs.push_back(q.x);
  // Density of x is proportional to the px-extent 2 sqrt(2K (E - V(x, 0))).
  const auto width = [&](double x) {
    return std::sqrt(std::max(0.0, 2.0 * (E - potential(p, CartesianCoords{x, 0.0}))));
  };
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it - 0.05, hi = *hi_it + 0.05;
  const double total = oracle::integrate_interval(width, lo, hi);
  std::vector<double> grid_x, grid_c;
  const int n = 2000;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    if (i > 0) acc += oracle::integrate_interval(width, grid_x.back(), x);
    grid_x.push_back(x);
    grid_c.push_back(acc / total);
  }
  const auto cdf = [&](double x) {
    const auto it = std::lower_bound(grid_x.begin(), grid_x.end(), x);
    if (it == grid_x.begin()) return 0.0;
    if (it == grid_x.end()) return 1.0;
    const std::size_t j = static_cast<std::size_t>(it - grid_x.begin());
    const double t = (x - grid_x[j - 1]) / (grid_x[j] - grid_x[j - 1]);
    return grid_c[j - 1] + t * (grid_c[j] - grid_c[j - 1]);
  };
  EXPECT_LT(oracle::ks_statistic(xs, cdf), 0.05);
}

TEST(Classical, RegularFractionIntegrable) {
  const auto ring = ModelParams::make(-1.0, 0.0, 1.0, 1.0, 0.05);
  SaliOptions o;
  o.t_max = 1000.0;
  const auto r = regular_fraction(ring, 0.2, 20, 3, o, 1);
  EXPECT_EQ(r.f_reg, 1.0);
  EXPECT_EQ(r.n_chaotic, 0u);
  EXPECT_EQ(r.n_total, 20u);
  EXPECT_EQ(r.sigma, 0.0);
}

TEST(Classical, RegularFractionNearMinimumAndBounds) {
  const auto p = fig1();
  const double emin = global_minimum(p).energy;
  SaliOptions o;
  o.t_max = 2000.0;
  const auto r = regular_fraction(p, emin + 0.02, 30, 8, o, 1);
  EXPECT_GE(r.f_reg, 0.9);
  const auto m = regular_fraction(p, 0.5, 30, 8, o, 1);
  EXPECT_GE(m.f_reg, 0.0);
  EXPECT_LE(m.f_reg, 1.0);
  EXPECT_EQ(m.n_regular + m.n_chaotic + m.n_undecided, m.n_total);
  const std::size_t decided = m.n_total - m.n_undecided;
  EXPECT_NEAR(m.f_reg, static_cast<double>(m.n_regular) / decided, 1e-15);
  EXPECT_NEAR(m.sigma, std::sqrt(m.f_reg * (1 - m.f_reg) / decided), 1e-15);
}

TEST(Classical, ThreadCountDoesNotChangeResults) {
  const auto p = fig1();
  SaliOptions o;
  o.t_max = 300.0;
  const auto a = regular_fraction(p, 0.0, 16, 21, o, 1);
  const auto b = regular_fraction(p, 0.0, 16, 21, o, 4);
  EXPECT_EQ(a.n_regular, b.n_regular);
  EXPECT_EQ(a.n_chaotic, b.n_chaotic);
  EXPECT_EQ(a.max_energy_drift, b.max_energy_drift);
}

TEST(Classical, FregMapRowsAndErrors) {
  SaliOptions o;
  o.t_max = 300.0;
  const double Bs[] = {0.0, 0.62};
  const double Es[] = {-5.0, 0.0};
  const auto map = freg_map(fig1(), Bs, Es, 8, 4, o, 1);
  ASSERT_EQ(map.size(), 4u);
  EXPECT_EQ(map[0].B, 0.0);
  EXPECT_EQ(map[1].E, 0.0);
  EXPECT_FALSE(map[0].error.empty());  // below the potential minimum
  EXPECT_TRUE(map[1].error.empty());
  EXPECT_EQ(map[1].f_reg, 1.0);
  EXPECT_EQ(map[3].B, 0.62);
}
