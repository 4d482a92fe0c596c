#include "gcm/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace gcm::special {

namespace {
constexpr double kBig = 1e150;
constexpr double kSmall = 1e-150;
const double kLogBig = std::log(kBig);
}  // namespace

void laguerre_functions(double alpha, double power, double x, std::span<double> out) {
  if (out.empty()) return;
  if (x == 0.0 && power > 0.0) {
    for (double& v : out) v = 0.0;
    return;
  }
  const double log_x_term = power == 0.0 ? 0.0 : power * std::log(x);
  double log_scale = log_x_term - 0.5 * x - 0.5 * std::lgamma(alpha + 1.0);

  auto emit = [&](double mantissa) {
    const double lg = log_scale;
    if (mantissa == 0.0) return 0.0;
    const double l = lg + std::log(std::abs(mantissa));
    if (l < -745.0) return 0.0;
    return std::copysign(std::exp(l), mantissa);
  };

  double prev = 0.0, cur = 1.0;
  out[0] = emit(cur);
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    const double next = ((2.0 * dn + alpha + 1.0 - x) * cur - std::sqrt(dn * (dn + alpha)) * prev) /
                        std::sqrt((dn + 1.0) * (dn + alpha + 1.0));
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > kBig) {
      prev *= 1.0 / kBig;
      cur *= 1.0 / kBig;
      log_scale += kLogBig;
    } else if (mag < kSmall && mag > 0.0) {
      prev *= kBig;
      cur *= kBig;
      log_scale -= kLogBig;
    }
    out[n + 1] = emit(cur);
  }
}

double laguerre_function(int n, double alpha, double power, double x) {
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  laguerre_functions(alpha, power, x, buf);
  return buf.back();
}

double laguerre_polynomial(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void legendre_polynomials(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t l = 1; l + 1 < out.size(); ++l) {
    const double dl = static_cast<double>(l);
    out[l + 1] = ((2.0 * dl + 1.0) * x * out[l] - dl * out[l - 1]) / (dl + 1.0);
  }
}

double legendre_polynomial(int l, double x) {
  std::vector<double> buf(static_cast<std::size_t>(l) + 1);
  legendre_polynomials(x, buf);
  return buf.back();
}

}  // namespace gcm::special
