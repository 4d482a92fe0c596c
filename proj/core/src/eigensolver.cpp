#include "gcm/eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gcm/hamiltonian.hpp"
#include "gcm/log.hpp"

namespace gcm {

namespace {

std::size_t count_near_ties(const std::vector<double>& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  std::size_t ties = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] - v[i - 1] <= 1e-13 * scale) ++ties;
  return ties;
}

std::vector<double> band_values(const BandedSymmetricMatrix& M) {
  const auto n = static_cast<lapack_int>(M.dim());
  const auto kd = static_cast<lapack_int>(M.half_bandwidth());
  auto ab = M.to_lapack_lower();
  std::vector<double> w(M.dim());
  double z_dummy = 0.0;
  const lapack_int info =
      LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd, ab.data(), kd + 1, w.data(), &z_dummy, 1);
  if (info > 0)
    throw EigenSolverError("band eigensolver: " + std::to_string(info) +
                               " off-diagonal elements failed to converge",
                           static_cast<long>(info));
  if (info < 0) throw std::invalid_argument("dsbev: illegal argument " + std::to_string(-info));
  return w;
}

EigvecSet band_vectors(const BandedSymmetricMatrix& M, std::size_t first, std::size_t count) {
  const auto n = static_cast<lapack_int>(M.dim());
  const auto kd = static_cast<lapack_int>(M.half_bandwidth());
  auto ab = M.to_lapack_lower();
  std::vector<double> q(M.dim() * M.dim());
  std::vector<double> w(M.dim());
  EigvecSet vecs{M.dim(), first, count, std::vector<double>(M.dim() * count)};
  std::vector<lapack_int> ifail(M.dim());
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsbevx(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', n, kd, ab.data(), kd + 1, q.data(), n, 0.0, 0.0,
      static_cast<lapack_int>(first + 1), static_cast<lapack_int>(first + count), abstol, &found,
      w.data(), vecs.data.data(), n, ifail.data());
  if (info > 0)
    throw EigenSolverError("band eigensolver: eigenvector " + std::to_string(ifail[0]) +
                               " failed to converge",
                           static_cast<long>(ifail[0]) - 1);
  if (info < 0) throw std::invalid_argument("dsbevx: illegal argument " + std::to_string(-info));
  if (static_cast<std::size_t>(found) != count)
    throw EigenSolverError("band eigensolver returned fewer vectors than requested",
                           static_cast<long>(first + found));
  return vecs;
}

}  // namespace

Eigensolution solve(const BandedSymmetricMatrix& M, const SolveOptions& options) {
  if (M.dim() == 0) return {};
  if (!M.all_finite()) throw std::invalid_argument("solve: matrix has non-finite entries");
  Eigensolution out;
  out.values = band_values(M);
  out.near_ties = count_near_ties(out.values);
  if (options.want_vectors) {
    if (options.vector_first >= M.dim())
      throw std::invalid_argument("solve: vector range starts beyond the matrix");
    std::size_t count = options.vector_count == 0 ? M.dim() - options.vector_first
                                                  : options.vector_count;
    count = std::min(count, M.dim() - options.vector_first);
    out.vectors = band_vectors(M, options.vector_first, count);
  }
  return out;
}

std::vector<double> tail_masses(const EigvecSet& vecs, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  const auto tail = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(vecs.dim)));
  const std::size_t start = vecs.dim - std::min(tail, vecs.dim);
  std::vector<double> mass(vecs.count, 0.0);
  for (std::size_t q = 0; q < vecs.count; ++q) {
    const auto col = vecs.column(q);
    double s = 0.0;
    for (std::size_t i = start; i < vecs.dim; ++i) s += col[i] * col[i];
    mass[q] = s;
  }
  return mass;
}

std::size_t certify_convergence(const EigvecSet& vecs, double tail_fraction,
                                double tail_mass_tol) {
  if (vecs.first != 0) return 0;
  const auto mass = tail_masses(vecs, tail_fraction);
  std::size_t q = 0;
  while (q < mass.size() && mass[q] < tail_mass_tol) ++q;
  return q;
}

double local_mean_spacing(std::span<const double> levels, std::size_t q,
                          std::size_t half_window) {
  if (levels.size() < 2) return 0.0;
  const std::size_t lo = q > half_window ? q - half_window : 0;
  const std::size_t hi = std::min(levels.size() - 1, q + half_window);
  return (levels[hi] - levels[lo]) / static_cast<double>(hi - lo);
}

std::size_t certify_by_dimension(std::span<const double> levels,
                                 std::span<const double> reference, double dE_tol) {
  const std::size_t n = std::min(levels.size(), reference.size());
  std::size_t q = 0;
  for (; q < n; ++q) {
    const double spacing = local_mean_spacing(levels, q);
    const double diff = std::abs(levels[q] - reference[q]);
    if (diff == 0.0) continue;
    if (!(diff < dE_tol * spacing)) break;
  }
  return q;
}

std::size_t certify_by_dimension(const ModelParams& params, const BasisSpec& spec,
                                 double growth_factor, double dE_tol) {
  if (!(growth_factor >= 1.0)) throw std::invalid_argument("growth_factor must be >= 1");
  const auto small = solve(assemble(params, spec)).values;
  BasisSpec bigger = spec;
  bigger.dimension = static_cast<std::size_t>(
      std::ceil(growth_factor * static_cast<double>(spec.dimension)));
  const auto large = bigger.dimension == spec.dimension ? small
                                                        : solve(assemble(params, bigger)).values;
  return certify_by_dimension(small, large, dE_tol);
}

namespace {

// Relative residual of up to 20 eigenpairs drawn from the first `count`.
double sampled_residual(const BandedSymmetricMatrix& M, const Eigensolution& sol, std::size_t count) {
  const auto& vecs = *sol.vectors;
  const double norm = std::max(std::abs(sol.values.front()), std::abs(sol.values.back()));
  std::mt19937_64 rng(vecs.dim);
  std::vector<double> Mv(vecs.dim);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t q = static_cast<std::size_t>(rng() % count);
    const auto v = vecs.column(q);
    M.multiply(v, Mv);
    double r2 = 0.0;
    for (std::size_t i = 0; i < vecs.dim; ++i) {
      const double d = Mv[i] - sol.values[vecs.first + q] * v[i];
      r2 += d * d;
    }
    worst = std::max(worst, std::sqrt(r2) / (norm > 0.0 ? norm : 1.0));
  }
  return worst;
}

}  // namespace

Spectrum compute_spectrum(const ModelParams& params, const BasisSpec& spec,
                          const SpectrumOptions& options) {
  const auto M = assemble(params, spec);
  const bool vectors = options.tail_certification && spec.dimension <= options.tail_vector_limit;
  SolveOptions so;
  so.want_vectors = vectors;
  auto sol = solve(M, so);

  Spectrum s;
  s.scheme = spec.scheme;
  s.params = params;
  s.meta.dimension = spec.dimension;
  s.meta.a_osc = spec.a_osc;
  s.meta.half_bandwidth = M.half_bandwidth();
  s.meta.near_ties = sol.near_ties;

  double sum = 0.0, abs_sum = 0.0;
  for (double v : sol.values) {
    sum += v;
    abs_sum += std::abs(v);
  }
  s.meta.trace_relative_error = abs_sum > 0.0 ? std::abs(sum - M.trace()) / abs_sum : 0.0;

  std::size_t converged = sol.values.size();
  if (vectors) {
    const auto q = certify_convergence(*sol.vectors, options.tail_fraction, options.tail_mass_tol);
    s.meta.tail_converged = static_cast<long>(q);
    converged = std::min(converged, q);
  }
  if (options.dimension_certification) {
    BasisSpec bigger = spec;
    bigger.dimension = static_cast<std::size_t>(
        std::ceil(options.growth_factor * static_cast<double>(spec.dimension)));
    s.meta.comparison_dimension = bigger.dimension;
    std::size_t q = sol.values.size();
    if (bigger.dimension != spec.dimension) {
      const auto ref = solve(assemble(params, bigger)).values;
      q = certify_by_dimension(sol.values, ref, options.dE_tol);
    }
    s.meta.dimension_converged = static_cast<long>(q);
    converged = std::min(converged, q);
  }
  if (vectors && converged > 0) {
    s.meta.max_residual = sampled_residual(M, sol, converged);
    if (s.meta.max_residual > 1e-9)
      log_warning("eigensolver: residual " + std::to_string(s.meta.max_residual) +
                  " exceeds 1e-9 on a certified pair");
  }
  s.levels = std::move(sol.values);
  s.converged_count = converged;
  return s;
}

}  // namespace gcm
