// Harmonic-oscillator eigenbases for the 2D and 5D quantizations of the
// J = 0 collective Hamiltonian. Only angular quantum numbers compatible with
// the three-fold symmetry (multiples of 3 in gamma) are kept.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcm/model.hpp"

namespace gcm {

enum class QuantScheme : std::uint8_t { TwoDEven = 0, TwoDOdd = 1, FiveD = 2 };

inline constexpr QuantScheme kAllSchemes[] = {QuantScheme::TwoDEven, QuantScheme::TwoDOdd,
                                              QuantScheme::FiveD};

/// "2d-even", "2d-odd", "5d".
std::string_view to_string(QuantScheme s);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
QuantScheme parse_scheme(std::string_view name);

/// |n m> in 2D, |nu mu> in 5D.
struct BasisState {
  int n_rad = 0;
  int m_ang = 0;
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

struct BasisSpec {
  QuantScheme scheme = QuantScheme::TwoDEven;
  double a_osc = 1.0;
  double K = 1.0;
  double hbar = 1.0;
  std::size_t dimension = 1;

  static BasisSpec make(QuantScheme scheme, double a_osc, const ModelParams& params,
                        std::size_t dimension);

  void validate() const;
  /// k = sqrt(2 a_osc K) / hbar (inverse squared length of the basis).
  double k() const;
  /// Omega = sqrt(2 a_osc / K).
  double omega() const;
};

bool is_valid_state(QuantScheme scheme, BasisState s);

/// Laguerre order of the radial function: 3m in 2D, 3mu + 3/2 in 5D.
double laguerre_alpha(QuantScheme scheme, int m_ang);

/// Oscillator quanta 2n + 3m (ties in energy share this value).
inline int oscillator_quanta(BasisState s) { return 2 * s.n_rad + 3 * s.m_ang; }

/// hbar Omega (2n + 3m + 1) in 2D, hbar Omega (2nu + 3mu + 5/2) in 5D.
double oscillator_energy(BasisState state, const BasisSpec& spec);

/// First `spec.dimension` states ordered by oscillator energy, ties broken by
/// ascending m then n. A basis of size D is a prefix of the one of size D+1.
std::vector<BasisState> enumerate_basis(const BasisSpec& spec);

/// R_nm(beta) (2D) or R_numu(beta) (5D) including normalization.
double radial_wavefunction(BasisState state, const BasisSpec& spec, double beta);

/// R_{n,m}(beta) for n = 0 .. out.size()-1 at fixed m in one recurrence pass.
void radial_wavefunctions(int m_ang, const BasisSpec& spec, double beta, std::span<double> out);

/// Phi_m(gamma): cos/sin 3m gamma over sqrt(pi) (2D) or
/// sqrt((2mu+1)/4) P_mu(cos 3gamma) (5D).
double angular_wavefunction(int m_ang, QuantScheme scheme, double gamma);

/// Phi_m(gamma) for m = 0 .. out.size()-1.
void angular_wavefunctions(QuantScheme scheme, double gamma, std::span<double> out);

double wavefunction(BasisState state, const BasisSpec& spec, ShapeCoords c);

}  // namespace gcm
