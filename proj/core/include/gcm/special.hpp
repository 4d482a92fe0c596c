// Orthogonal-polynomial evaluation used by the oscillator bases.
#pragma once

#include <span>

namespace gcm::special {

/// Normalized generalized Laguerre functions
///   f_n(x) = sqrt(n! / Gamma(n + alpha + 1)) x^power e^{-x/2} L_n^alpha(x)
/// for n = 0 .. out.size()-1, by upward three-term recurrence. The
/// prefactor is carried as a logarithm and the recurrence is rescaled, so
/// large n, alpha and x neither overflow nor lose leading digits; values
/// below the double range come back as 0.
void laguerre_functions(double alpha, double power, double x, std::span<double> out);

/// Single f_n(x) (same definition as above).
double laguerre_function(int n, double alpha, double power, double x);

/// Plain L_n^alpha(x) by recurrence; can overflow for large arguments.
double laguerre_polynomial(int n, double alpha, double x);

/// P_l(x), l = 0 .. out.size()-1.
void legendre_polynomials(double x, std::span<double> out);
double legendre_polynomial(int l, double x);

}  // namespace gcm::special
