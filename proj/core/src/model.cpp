#include "gcm/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace gcm {

namespace {

constexpr double kPi = std::numbers::pi;

// V restricted to a ray with c = cos 3gamma, minus E.
struct RayQuartic {
  double A, Bc, C, E;
  double value(double b) const { return ((C * b + Bc) * b + A) * b * b - E; }
  double slope(double b) const { return b * ((4.0 * C * b + 3.0 * Bc) * b + 2.0 * A); }
};

// Positive roots of 4C b^2 + 3 Bc b + 2A = 0, i.e. the nonzero stationary
// points of V along a ray, each refined by one Newton step.
std::vector<double> ray_stationary_points(double A, double Bc, double C) {
  std::vector<double> roots;
  const double qa = 4.0 * C, qb = 3.0 * Bc, qc = 2.0 * A;
  if (qa == 0.0) {
    if (qb != 0.0 && -qc / qb > 0.0) roots.push_back(-qc / qb);
    return roots;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return roots;
  const double sq = std::sqrt(disc);
  // Cancellation-free pair.
  const double q = -0.5 * (qb + std::copysign(sq, qb == 0.0 ? 1.0 : qb));
  double candidates[2] = {q / qa, q != 0.0 ? qc / q : q / qa};
  if (disc == 0.0) candidates[1] = candidates[0];
  for (int i = 0; i < 2; ++i) {
    double b = candidates[i];
    if (!(b > 0.0)) continue;
    const double g = (qa * b + qb) * b + qc;
    const double dg = 2.0 * qa * b + qb;
    if (dg != 0.0) b -= g / dg;
    if (b > 0.0) roots.push_back(b);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
              roots.end());
  return roots;
}

CriticalKind classify(const ModelParams& p, CartesianCoords at) {
  const auto h = potential_hessian(p, at);
  const double tr = h[0] + h[2];
  const double det = h[0] * h[2] - h[1] * h[1];
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double l1 = 0.5 * tr - disc, l2 = 0.5 * tr + disc;
  const double scale = std::abs(l1) + std::abs(l2);
  const double tol = 1e-9 * scale;
  const bool z1 = std::abs(l1) <= tol, z2 = std::abs(l2) <= tol;
  if (scale == 0.0) {
    // Flat Hessian at the origin: quartic-dominated minimum when B = 0,
    // otherwise the cubic term makes it a (monkey) saddle.
    return p.B == 0.0 ? CriticalKind::Minimum : CriticalKind::Saddle;
  }
  if (z1) return l2 > 0.0 ? CriticalKind::Minimum : CriticalKind::Maximum;
  if (z2) return l1 > 0.0 ? CriticalKind::Minimum : CriticalKind::Maximum;
  if (l1 > 0.0) return CriticalKind::Minimum;
  if (l2 < 0.0) return CriticalKind::Maximum;
  return CriticalKind::Saddle;
}

// Bracketed root (TOMS 748) with a final Newton polish.
double bracketed_root(const RayQuartic& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve([&f](double x) { return f.value(x); }, lo,
                                                        hi, boost::math::tools::eps_tolerance<double>(),
                                                        iters);
  double r = 0.5 * (a + b);
  const double d = f.slope(r);
  if (d != 0.0) {
    const double polished = r - f.value(r) / d;
    if (polished >= a && polished <= b) r = polished;
  }
  return r;
}

}  // namespace

ModelParams ModelParams::make(double A, double B, double C, double K, double hbar) {
  ModelParams p{A, B, C, K, hbar};
  p.validate();
  return p;
}

ModelParams ModelParams::from_kappa(double A, double B, double C, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return make(A, B, C, 1.0, std::sqrt(kappa));
}

void ModelParams::validate() const {
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C) || !std::isfinite(K) ||
      !std::isfinite(hbar))
    throw std::invalid_argument("model parameters must be finite");
  const bool oscillator = C == 0.0 && B == 0.0 && A > 0.0;
  if (!(C > 0.0) && !oscillator)
    throw std::invalid_argument(
        "C must be positive (confining potential), or B = C = 0 with A > 0");
  if (!(K > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

ShapeCoords to_polar(CartesianCoords c) {
  const double beta = std::hypot(c.x, c.y);
  if (beta == 0.0) return {0.0, 0.0};
  return {beta, std::atan2(c.y, c.x)};
}

CartesianCoords to_cartesian(ShapeCoords c) {
  return {c.beta * std::cos(c.gamma), c.beta * std::sin(c.gamma)};
}

double potential(const ModelParams& p, ShapeCoords c) {
  const double b2 = c.beta * c.beta;
  return p.A * b2 + p.B * b2 * c.beta * std::cos(3.0 * c.gamma) + p.C * b2 * b2;
}

double potential(const ModelParams& p, CartesianCoords c) {
  const double r2 = c.x * c.x + c.y * c.y;
  // beta^3 cos 3gamma = x^3 - 3 x y^2
  return p.A * r2 + p.B * c.x * (c.x * c.x - 3.0 * c.y * c.y) + p.C * r2 * r2;
}

std::array<double, 2> potential_gradient(const ModelParams& p, CartesianCoords c) {
  const double r2 = c.x * c.x + c.y * c.y;
  return {2.0 * p.A * c.x + 3.0 * p.B * (c.x * c.x - c.y * c.y) + 4.0 * p.C * r2 * c.x,
          2.0 * p.A * c.y - 6.0 * p.B * c.x * c.y + 4.0 * p.C * r2 * c.y};
}

std::array<double, 3> potential_hessian(const ModelParams& p, CartesianCoords c) {
  const double x2 = c.x * c.x, y2 = c.y * c.y, r2 = x2 + y2;
  return {2.0 * p.A + 6.0 * p.B * c.x + 4.0 * p.C * (r2 + 2.0 * x2),
          -6.0 * p.B * c.y + 8.0 * p.C * c.x * c.y,
          2.0 * p.A - 6.0 * p.B * c.x + 4.0 * p.C * (r2 + 2.0 * y2)};
}

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Minimum: return "min";
    case CriticalKind::Maximum: return "max";
    case CriticalKind::Saddle: return "saddle";
  }
  return "?";
}

std::vector<CriticalPoint> potential_extrema(const ModelParams& p) {
  p.validate();
  std::vector<CriticalPoint> out;
  out.push_back({{0.0, 0.0}, 0.0, classify(p, {0.0, 0.0}), 1});

  // gamma = 0 has cos 3gamma = +1, gamma = pi/3 has cos 3gamma = -1. With
  // B = 0 both rays are the same ring.
  const double gammas[2] = {0.0, kPi / 3.0};
  const int rays = p.B == 0.0 ? 1 : 2;
  for (int r = 0; r < rays; ++r) {
    const double cos3g = r == 0 ? 1.0 : -1.0;
    for (double beta : ray_stationary_points(p.A, p.B * cos3g, p.C)) {
      const ShapeCoords at{beta, gammas[r]};
      const int mult = p.B == 0.0 ? 0 : 3;
      out.push_back({at, potential(p, at), classify(p, to_cartesian(at)), mult});
    }
  }
  return out;
}

CriticalPoint global_minimum(const ModelParams& p) {
  auto pts = potential_extrema(p);
  return *std::min_element(pts.begin(), pts.end(),
                           [](const auto& a, const auto& b) { return a.energy < b.energy; });
}

std::vector<std::pair<double, double>> accessible_boundary(const ModelParams& p, double E,
                                                           double gamma) {
  p.validate();
  const RayQuartic f{p.A, p.B * std::cos(3.0 * gamma), p.C, E};

  // Breakpoints splitting [0, inf) into monotone pieces of the quartic.
  std::vector<double> pts{0.0};
  for (double b : ray_stationary_points(f.A, f.Bc, f.C)) pts.push_back(b);
  const double bound =
      f.C > 0.0 ? 1.0 + std::max({std::abs(f.Bc), std::abs(f.A), std::abs(E)}) / f.C
                : 1.0 + std::sqrt(std::max(E, 0.0) / f.A);
  pts.push_back(std::max(bound, pts.back() * 2.0 + 1.0));

  const double scale = std::max({1.0, std::abs(E), std::abs(f.A), std::abs(f.Bc), f.C});
  const double zero_tol = 1e-12 * scale;

  std::vector<double> roots;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(f.value(pts[i])) <= zero_tol) roots.push_back(pts[i]);
    if (i + 1 == pts.size()) break;
    const double lo = pts[i], hi = pts[i + 1];
    const double flo = f.value(lo), fhi = f.value(hi);
    if (std::abs(flo) <= zero_tol || std::abs(fhi) <= zero_tol) continue;
    if ((flo < 0.0) != (fhi < 0.0)) roots.push_back(bracketed_root(f, lo, hi));
  }
  std::sort(roots.begin(), roots.end());

  // Sign of f on each gap between consecutive roots decides membership.
  std::vector<double> cuts{0.0};
  for (double r : roots)
    if (r > cuts.back()) cuts.push_back(r);
  cuts.push_back(pts.back());

  std::vector<std::pair<double, double>> intervals;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (f.value(mid) < 0.0) {
      if (!intervals.empty() && intervals.back().second == cuts[i])
        intervals.back().second = cuts[i + 1];
      else
        intervals.emplace_back(cuts[i], cuts[i + 1]);
    }
  }
  // Touching points (f = 0 with f >= 0 on both sides).
  for (double r : roots) {
    const bool covered = std::any_of(intervals.begin(), intervals.end(), [&](const auto& iv) {
      return r >= iv.first && r <= iv.second;
    });
    if (!covered) intervals.emplace_back(r, r);
  }
  std::sort(intervals.begin(), intervals.end());
  return intervals;
}

std::pair<ModelParams, CanonicalScaling> rescale_to_canonical(const ModelParams& p) {
  p.validate();
  if (p.C == 0.0) throw std::invalid_argument("rescale_to_canonical: needs C > 0");
  CanonicalScaling s;
  if (p.A == 0.0) return {p, s};

  // beta = lambda beta', E = eps E' with A lambda^2 / eps = +-1 and
  // C lambda^4 / eps = 1.
  const double absA = std::abs(p.A);
  s.length_scale = std::sqrt(absA / p.C);
  s.energy_scale = p.A * p.A / p.C;
  s.b_scale = 1.0 / std::sqrt(absA * p.C);
  s.kappa_scale = p.C * p.C / (absA * absA * absA);

  double b = p.B * s.b_scale;
  if (b < 0.0) {
    b = -b;
    s.gamma_shift = kPi / 3.0;
  }
  const double kappa = p.kappa() * s.kappa_scale;
  ModelParams q = ModelParams::from_kappa(p.A > 0.0 ? 1.0 : -1.0, b, 1.0, kappa);
  return {q, s};
}

}  // namespace gcm
