#include "gcm/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gcm/special.hpp"

namespace gcm {

namespace {
constexpr double kPi = std::numbers::pi;
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

bool is_five_d(QuantScheme s) { return s == QuantScheme::FiveD; }

// Radial prefactor c such that R = c * f_n with f_n from
// special::laguerre_functions (power 3m/2).
double radial_prefactor(const BasisSpec& spec) {
  const double k = spec.k();
  return is_five_d(spec.scheme) ? std::sqrt(2.0) * std::pow(k, 1.25) : std::sqrt(2.0 * k);
}
}  // namespace

std::string_view to_string(QuantScheme s) {
  switch (s) {
    case QuantScheme::TwoDEven: return "2d-even";
    case QuantScheme::TwoDOdd: return "2d-odd";
    case QuantScheme::FiveD: return "5d";
  }
  return "?";
}

QuantScheme parse_scheme(std::string_view name) {
  for (QuantScheme s : kAllSchemes)
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown quantization scheme '" + std::string(name) +
                              "' (expected 2d-even, 2d-odd or 5d)");
}

BasisSpec BasisSpec::make(QuantScheme scheme, double a_osc, const ModelParams& params,
                          std::size_t dimension) {
  BasisSpec s{scheme, a_osc, params.K, params.hbar, dimension};
  s.validate();
  return s;
}

void BasisSpec::validate() const {
  if (!(a_osc > 0.0) || !std::isfinite(a_osc))
    throw std::invalid_argument("a_osc must be positive and finite");
  if (!(K > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("K and hbar must be positive");
  if (dimension < 1) throw std::invalid_argument("basis dimension must be at least 1");
}

double BasisSpec::k() const { return std::sqrt(2.0 * a_osc * K) / hbar; }

double BasisSpec::omega() const { return std::sqrt(2.0 * a_osc / K); }

bool is_valid_state(QuantScheme scheme, BasisState s) {
  if (s.n_rad < 0 || s.m_ang < 0) return false;
  return !(scheme == QuantScheme::TwoDOdd && s.m_ang == 0);
}

double laguerre_alpha(QuantScheme scheme, int m_ang) {
  return is_five_d(scheme) ? 3.0 * m_ang + 1.5 : 3.0 * m_ang;
}

double oscillator_energy(BasisState state, const BasisSpec& spec) {
  const double offset = is_five_d(spec.scheme) ? 2.5 : 1.0;
  return spec.hbar * spec.omega() * (oscillator_quanta(state) + offset);
}

std::vector<BasisState> enumerate_basis(const BasisSpec& spec) {
  spec.validate();
  std::vector<BasisState> states;
  states.reserve(spec.dimension);
  const int m_min = spec.scheme == QuantScheme::TwoDOdd ? 1 : 0;
  for (int quanta = 0; states.size() < spec.dimension; ++quanta) {
    for (int m = m_min; 3 * m <= quanta && states.size() < spec.dimension; ++m) {
      const int rest = quanta - 3 * m;
      if (rest % 2 == 0) states.push_back({rest / 2, m});
    }
  }
  return states;
}

void radial_wavefunctions(int m_ang, const BasisSpec& spec, double beta, std::span<double> out) {
  const double k = spec.k();
  const double x = k * beta * beta;
  special::laguerre_functions(laguerre_alpha(spec.scheme, m_ang), 1.5 * m_ang, x, out);
  const double c = radial_prefactor(spec);
  for (double& v : out) v *= c;
}

double radial_wavefunction(BasisState state, const BasisSpec& spec, double beta) {
  const double x = spec.k() * beta * beta;
  return radial_prefactor(spec) *
         special::laguerre_function(state.n_rad, laguerre_alpha(spec.scheme, state.m_ang),
                                    1.5 * state.m_ang, x);
}

double angular_wavefunction(int m_ang, QuantScheme scheme, double gamma) {
  switch (scheme) {
    case QuantScheme::TwoDEven:
      return m_ang == 0 ? kInvSqrt2Pi : kInvSqrtPi * std::cos(3.0 * m_ang * gamma);
    case QuantScheme::TwoDOdd:
      return kInvSqrtPi * std::sin(3.0 * m_ang * gamma);
    case QuantScheme::FiveD:
      return std::sqrt((2.0 * m_ang + 1.0) / 4.0) *
             special::legendre_polynomial(m_ang, std::cos(3.0 * gamma));
  }
  return 0.0;
}

void angular_wavefunctions(QuantScheme scheme, double gamma, std::span<double> out) {
  if (out.empty()) return;
  const double c3 = std::cos(3.0 * gamma);
  if (scheme == QuantScheme::FiveD) {
    special::legendre_polynomials(c3, out);
    for (std::size_t mu = 0; mu < out.size(); ++mu)
      out[mu] *= std::sqrt((2.0 * static_cast<double>(mu) + 1.0) / 4.0);
    return;
  }
  // Chebyshev recurrences: cos 3(m+1)g = 2 c3 cos 3mg - cos 3(m-1)g, same
  // for sin.
  const bool even = scheme == QuantScheme::TwoDEven;
  double prev = even ? 1.0 : 0.0;
  double cur = even ? c3 : std::sin(3.0 * gamma);
  out[0] = even ? kInvSqrt2Pi : 0.0;
  for (std::size_t m = 1; m < out.size(); ++m) {
    out[m] = kInvSqrtPi * cur;
    const double next = 2.0 * c3 * cur - prev;
    prev = cur;
    cur = next;
  }
}

double wavefunction(BasisState state, const BasisSpec& spec, ShapeCoords c) {
  return radial_wavefunction(state, spec, c.beta) *
         angular_wavefunction(state.m_ang, spec.scheme, c.gamma);
}

}  // namespace gcm
