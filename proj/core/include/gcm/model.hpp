// Geometric collective model (J = 0): Hamiltonian parameters, the potential
// surface V(beta, gamma) = A beta^2 + B beta^3 cos 3gamma + C beta^4, and
// geometric queries on it.
#pragma once

#include <array>
#include <utility>
#include <vector>

namespace gcm {

/// Hamiltonian parameters. K is the mass, hbar the classicality scale; the
/// only quantum combination that matters is kappa = hbar^2 / K.
struct ModelParams {
  double A = -1.0;
  double B = 0.0;
  double C = 1.0;
  double K = 1.0;
  double hbar = 0.05;

  /// Validates C > 0 (or the pure oscillator B = C = 0, A > 0), K > 0,
  /// hbar > 0; throws std::invalid_argument.
  static ModelParams make(double A, double B, double C, double K, double hbar);
  /// Parameters with K = 1 and hbar = sqrt(kappa).
  static ModelParams from_kappa(double A, double B, double C, double kappa);

  void validate() const;
  double kappa() const { return hbar * hbar / K; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ShapeCoords {
  double beta = 0.0;
  double gamma = 0.0;
};

struct CartesianCoords {
  double x = 0.0;
  double y = 0.0;
};

ShapeCoords to_polar(CartesianCoords c);
CartesianCoords to_cartesian(ShapeCoords c);

double potential(const ModelParams& p, ShapeCoords c);
double potential(const ModelParams& p, CartesianCoords c);

/// dV/dx, dV/dy.
std::array<double, 2> potential_gradient(const ModelParams& p, CartesianCoords c);
/// Hessian entries {xx, xy, yy}.
std::array<double, 3> potential_hessian(const ModelParams& p, CartesianCoords c);

enum class CriticalKind { Minimum, Maximum, Saddle };

const char* to_string(CriticalKind kind);

struct CriticalPoint {
  ShapeCoords at;
  double energy = 0.0;
  CriticalKind kind = CriticalKind::Minimum;
  // Number of symmetry-equivalent copies in the plane: 1 at the origin,
  // 3 off-origin for B != 0, 0 for the continuous ring of the B = 0 case.
  int multiplicity = 1;
};

/// Critical points on the gamma = 0 and gamma = pi/3 rays (every critical
/// point of V is equivalent to one of these). Always contains beta = 0.
std::vector<CriticalPoint> potential_extrema(const ModelParams& p);

/// Lowest critical point (the global minimum of V).
CriticalPoint global_minimum(const ModelParams& p);

/// Closed beta intervals on the ray at fixed gamma where V(beta, gamma) <= E.
/// Zero, one or two disjoint intervals; a touching minimum yields a
/// degenerate [b, b] interval.
std::vector<std::pair<double, double>> accessible_boundary(
    const ModelParams& p, double E, double gamma);

/// Factors relating original and canonical parameters:
/// E_original = energy_scale * E_canonical, beta_original =
/// length_scale * beta_canonical, gamma_original = gamma_canonical +
/// gamma_shift.
struct CanonicalScaling {
  double energy_scale = 1.0;
  double length_scale = 1.0;
  double b_scale = 1.0;      // B_canonical = b_scale * B_original
  double kappa_scale = 1.0;  // kappa_canonical = kappa_scale * kappa_original
  double gamma_shift = 0.0;  // pi/3 when the sign of B was flipped

  double to_original_energy(double e) const { return energy_scale * e; }
  double to_canonical_energy(double e) const { return e / energy_scale; }
};

/// Rescales to (A, C) = (+-1, 1), K = 1, B >= 0. A = 0 is passed through
/// unchanged with unit scales.
std::pair<ModelParams, CanonicalScaling> rescale_to_canonical(const ModelParams& p);

}  // namespace gcm
