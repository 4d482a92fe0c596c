// Symmetric band eigenproblem and convergence certification of the
// resulting levels.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcm/banded_matrix.hpp"
#include "gcm/basis.hpp"
#include "gcm/model.hpp"

namespace gcm {

/// Raised when the band eigensolver fails to converge.
class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, long index)
      : std::runtime_error(what), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

/// Eigenvectors for levels first .. first + count - 1, column-major
/// (column q holds the coefficients of level first + q in basis order).
struct EigvecSet {
  std::size_t dim = 0;
  std::size_t first = 0;
  std::size_t count = 0;
  std::vector<double> data;

  std::span<const double> column(std::size_t q) const {
    return std::span<const double>(data).subspan(q * dim, dim);
  }
};

struct SolveOptions {
  bool want_vectors = false;
  std::size_t vector_first = 0;
  std::size_t vector_count = 0;  // 0 means up to the last level
};

struct Eigensolution {
  std::vector<double> values;  // ascending
  std::optional<EigvecSet> vectors;
  std::size_t near_ties = 0;   // adjacent values closer than 1e-13 relative
};

/// Band -> tridiagonal reduction followed by implicit QL/QR (values) and
/// bisection + inverse iteration (requested vectors).
Eigensolution solve(const BandedSymmetricMatrix& M, const SolveOptions& options = {});

struct Spectrum {
  struct Meta {
    std::size_t dimension = 0;
    double a_osc = 0.0;
    std::size_t half_bandwidth = 0;
    std::size_t near_ties = 0;
    // Per-criterion certified prefixes; -1 when the criterion was not run.
    long tail_converged = -1;
    long dimension_converged = -1;
    std::size_t comparison_dimension = 0;
    double trace_relative_error = 0.0;
    // max ||M v - lambda v|| / ||M|| over up to 20 sampled certified pairs;
    // -1 when no eigenvectors were computed.
    double max_residual = -1.0;
  };

  QuantScheme scheme = QuantScheme::TwoDEven;
  ModelParams params;
  std::vector<double> levels;
  std::size_t converged_count = 0;
  Meta meta;

  std::span<const double> converged() const {
    return std::span<const double>(levels).first(converged_count);
  }
};

inline constexpr double kDefaultTailFraction = 0.15;
inline constexpr double kDefaultTailMassTol = 1e-8;
inline constexpr double kDefaultGrowthFactor = 1.5;
inline constexpr double kDefaultSpacingTol = 1e-3;

/// Tail mass of each vector: summed squared coefficients on the top
/// tail_fraction of the basis (basis order is oscillator-energy order).
std::vector<double> tail_masses(const EigvecSet& vecs, double tail_fraction = kDefaultTailFraction);

/// Largest prefix of levels whose tail mass stays below tail_mass_tol.
/// Requires vecs.first == 0 for a nonzero answer.
std::size_t certify_convergence(const EigvecSet& vecs, double tail_fraction = kDefaultTailFraction,
                                double tail_mass_tol = kDefaultTailMassTol);

/// Largest prefix q of `levels` with |levels[q] - reference[q]| <
/// dE_tol * (local mean spacing of `levels`), where `reference` comes from a
/// larger basis.
std::size_t certify_by_dimension(std::span<const double> levels,
                                 std::span<const double> reference,
                                 double dE_tol = kDefaultSpacingTol);

/// Same criterion, re-solving at ceil(dimension * growth_factor).
std::size_t certify_by_dimension(const ModelParams& params, const BasisSpec& spec,
                                 double growth_factor = kDefaultGrowthFactor,
                                 double dE_tol = kDefaultSpacingTol);

/// Mean level spacing around index q over a window of +-half_window levels.
double local_mean_spacing(std::span<const double> levels, std::size_t q,
                          std::size_t half_window = 10);

struct SpectrumOptions {
  bool tail_certification = true;
  std::size_t tail_vector_limit = 6000;  // skip vectors above this dimension
  double tail_fraction = kDefaultTailFraction;
  double tail_mass_tol = kDefaultTailMassTol;
  bool dimension_certification = true;
  double growth_factor = kDefaultGrowthFactor;
  double dE_tol = kDefaultSpacingTol;
};

/// assemble -> solve -> certify. converged_count is the minimum of the
/// criteria that ran (all levels when none ran).
Spectrum compute_spectrum(const ModelParams& params, const BasisSpec& spec,
                          const SpectrumOptions& options = {});

}  // namespace gcm
