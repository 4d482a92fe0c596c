#include "gcm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gcm {

namespace {

// beta^2 and beta^4 between equal-m states, n_upper = n + d (Table of the
// 2D oscillator with 3m replaced by the Laguerre order alpha).
double same_m_element(int power, int n, int d, double alpha, double k) {
  const double dn = n;
  if (power == 2) {
    if (d == 0) return (2.0 * dn + alpha + 1.0) / k;
    if (d == 1) return -std::sqrt((dn + 1.0) * (dn + alpha + 1.0)) / k;
    return 0.0;
  }
  // power == 4
  const double k2 = k * k;
  switch (d) {
    case 0: return (dn * (dn - 1.0) + (dn + alpha + 1.0) * (5.0 * dn + alpha + 2.0)) / k2;
    case 1: return -2.0 * (2.0 * dn + alpha + 2.0) * std::sqrt((dn + alpha + 1.0) * (dn + 1.0)) / k2;
    case 2:
      return std::sqrt((dn + alpha + 2.0) * (dn + alpha + 1.0) * (dn + 2.0) * (dn + 1.0)) / k2;
    default: return 0.0;
  }
}

// <n - d, m + 1| beta^3 |n, m>, alpha the Laguerre order of the lower m.
double cross_m_element(int n, int d, double alpha, double k) {
  const double dn = n;
  const double k32 = k * std::sqrt(k);
  switch (d) {
    case 0: return std::sqrt((dn + alpha + 3.0) * (dn + alpha + 2.0) * (dn + alpha + 1.0)) / k32;
    case 1: return -3.0 * std::sqrt(dn * (dn + alpha + 2.0) * (dn + alpha + 1.0)) / k32;
    case 2: return 3.0 * std::sqrt(dn * (dn - 1.0) * (dn + alpha + 1.0)) / k32;
    case 3: return -std::sqrt(dn * (dn - 1.0) * (dn - 2.0)) / k32;
    default: return 0.0;
  }
}

// Dense (m, n) -> basis index lookup; -1 where the state is not in the basis.
class StateIndex {
 public:
  explicit StateIndex(const std::vector<BasisState>& states) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto [n, m] = states[i];
      if (static_cast<std::size_t>(m) >= table_.size()) table_.resize(m + 1);
      auto& row = table_[m];
      if (static_cast<std::size_t>(n) >= row.size()) row.resize(n + 1, -1);
      row[n] = static_cast<long>(i);
    }
  }
  long find(int n, int m) const {
    if (n < 0 || m < 0 || static_cast<std::size_t>(m) >= table_.size()) return -1;
    const auto& row = table_[m];
    return static_cast<std::size_t>(n) < row.size() ? row[n] : -1;
  }

 private:
  std::vector<std::vector<long>> table_;
};

struct Entry {
  std::size_t i, j;  // i >= j
  double value;
};

std::vector<Entry> collect_entries(const ModelParams& params, const BasisSpec& spec,
                                   const std::vector<BasisState>& states) {
  const StateIndex index(states);
  const double k = spec.k();
  const double a2 = params.A - spec.a_osc;
  std::vector<Entry> entries;
  entries.reserve(states.size() * 8);

  auto push = [&](std::size_t a, std::size_t b, double v) {
    if (v == 0.0) return;
    if (a < b) std::swap(a, b);
    entries.push_back({a, b, v});
  };

  for (std::size_t j = 0; j < states.size(); ++j) {
    const auto [n, m] = states[j];
    const double alpha = laguerre_alpha(spec.scheme, m);

    push(j, j,
         oscillator_energy(states[j], spec) + a2 * same_m_element(2, n, 0, alpha, k) +
             params.C * same_m_element(4, n, 0, alpha, k));
    for (int d = 1; d <= 2; ++d) {
      const long i = index.find(n + d, m);
      if (i < 0) continue;
      push(static_cast<std::size_t>(i), j,
           a2 * same_m_element(2, n, d, alpha, k) + params.C * same_m_element(4, n, d, alpha, k));
    }
    if (params.B != 0.0) {
      const double ang = angular_element(spec.scheme, m + 1, m);
      for (int d = 0; d <= 3 && d <= n; ++d) {
        const long i = index.find(n - d, m + 1);
        if (i < 0) continue;
        push(static_cast<std::size_t>(i), j, params.B * ang * cross_m_element(n, d, alpha, k));
      }
    }
  }
  return entries;
}

}  // namespace

double radial_element(int power, BasisState bra, BasisState ket, const BasisSpec& spec) {
  if (!is_valid_state(spec.scheme, bra) || !is_valid_state(spec.scheme, ket))
    throw std::invalid_argument("radial_element: state not valid for scheme");
  const double k = spec.k();
  if (power == 2 || power == 4) {
    if (bra.m_ang != ket.m_ang) return 0.0;
    const BasisState& lo = bra.n_rad <= ket.n_rad ? bra : ket;
    const BasisState& hi = bra.n_rad <= ket.n_rad ? ket : bra;
    return same_m_element(power, lo.n_rad, hi.n_rad - lo.n_rad,
                          laguerre_alpha(spec.scheme, lo.m_ang), k);
  }
  if (power == 3) {
    if (std::abs(bra.m_ang - ket.m_ang) != 1) return 0.0;
    const BasisState& lower = bra.m_ang < ket.m_ang ? bra : ket;
    const BasisState& upper = bra.m_ang < ket.m_ang ? ket : bra;
    const int d = lower.n_rad - upper.n_rad;
    if (d < 0 || d > 3) return 0.0;
    return cross_m_element(lower.n_rad, d, laguerre_alpha(spec.scheme, lower.m_ang), k);
  }
  throw std::invalid_argument("radial_element: power must be 2, 3 or 4");
}

double angular_element(QuantScheme scheme, int m_bra, int m_ket) {
  if (std::abs(m_bra - m_ket) != 1) return 0.0;
  const int m = std::min(m_bra, m_ket);
  if (m < 0) return 0.0;
  switch (scheme) {
    case QuantScheme::TwoDEven: return m == 0 ? 1.0 / std::sqrt(2.0) : 0.5;
    // sin 3(m+1)g cos 3g sin 3mg integrates to pi/2 for m >= 1; m = 0 is not
    // part of the odd sector.
    case QuantScheme::TwoDOdd: return m == 0 ? 0.0 : 0.5;
    case QuantScheme::FiveD: return (m + 1.0) / std::sqrt((2.0 * m + 1.0) * (2.0 * m + 3.0));
  }
  return 0.0;
}

BandedSymmetricMatrix assemble(const ModelParams& params, const BasisSpec& spec) {
  params.validate();
  spec.validate();
  const auto states = enumerate_basis(spec);
  const auto entries = collect_entries(params, spec, states);

  std::size_t kd = 0;
  for (const auto& e : entries) kd = std::max(kd, e.i - e.j);

  BandedSymmetricMatrix M(states.size(), kd);
  for (const auto& e : entries) M.add(e.i, e.j, e.value);
  return M;
}

BandedSymmetricMatrix assemble_m_block(const ModelParams& params, const BasisSpec& spec,
                                       int m_ang, std::size_t n_count) {
  params.validate();
  BasisSpec probe = spec;
  probe.dimension = std::max<std::size_t>(n_count, 1);
  probe.validate();
  if (!is_valid_state(spec.scheme, {0, m_ang}))
    throw std::invalid_argument("assemble_m_block: m not valid for scheme");
  if (n_count == 0) throw std::invalid_argument("assemble_m_block: n_count must be positive");
  const double k = spec.k();
  const double a2 = params.A - spec.a_osc;
  const double alpha = laguerre_alpha(spec.scheme, m_ang);
  BandedSymmetricMatrix M(n_count, std::min<std::size_t>(2, n_count - 1));
  for (std::size_t j = 0; j < n_count; ++j) {
    const int n = static_cast<int>(j);
    M.set(j, j,
          oscillator_energy({n, m_ang}, spec) + a2 * same_m_element(2, n, 0, alpha, k) +
              params.C * same_m_element(4, n, 0, alpha, k));
    for (int d = 1; d <= 2 && j + d < n_count; ++d)
      M.set(j + d, j,
            a2 * same_m_element(2, n, d, alpha, k) + params.C * same_m_element(4, n, d, alpha, k));
  }
  return M;
}

double hamiltonian_trace(const ModelParams& params, const BasisSpec& spec) {
  const auto states = enumerate_basis(spec);
  const double k = spec.k();
  const double a2 = params.A - spec.a_osc;
  double t = 0.0;
  for (const auto& s : states) {
    const double alpha = laguerre_alpha(spec.scheme, s.m_ang);
    t += oscillator_energy(s, spec) + a2 * same_m_element(2, s.n_rad, 0, alpha, k) +
         params.C * same_m_element(4, s.n_rad, 0, alpha, k);
  }
  return t;
}

AoscOptimization optimize_a_osc(const ModelParams& params, const BasisSpec& spec_template,
                                double c_shift, double rel_tol) {
  params.validate();
  if (!(c_shift > 0.0 && c_shift <= 1.0))
    throw std::invalid_argument("c_shift must lie in (0, 1]");

  AoscOptimization result;
  const double a_ref = std::abs(params.A) + std::abs(params.C);
  BasisSpec spec = spec_template;
  auto trace_at = [&](double log_a) {
    spec.a_osc = std::exp(log_a);
    ++result.evaluations;
    return hamiltonian_trace(params, spec);
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double lo0 = std::log(1e-6 * a_ref), hi0 = std::log(1e6 * a_ref);
  double lo = lo0, hi = hi0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = trace_at(x1), f2 = trace_at(x2);
  // |d log a| = rel_tol is the relative tolerance on a itself.
  while (hi - lo > rel_tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = trace_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = trace_at(x2);
    }
  }
  const double best = f1 <= f2 ? x1 : x2;
  const double edge = 1e-3 * (hi0 - lo0);
  if (best - lo0 < edge || hi0 - best < edge)
    throw std::runtime_error("trace of the Hamiltonian has no interior minimum in a_osc");

  result.trace_argmin = std::exp(best);
  result.trace_min = std::min(f1, f2);
  result.a_osc = c_shift * result.trace_argmin;
  return result;
}

}  // namespace gcm
