#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gcm {

/// Real symmetric band matrix. Only the lower triangle is stored, one
/// diagonal after another: entry (j + d, j) lives at d * dim + j.
class BandedSymmetricMatrix {
 public:
  BandedSymmetricMatrix() = default;
  BandedSymmetricMatrix(std::size_t dim, std::size_t half_bandwidth);

  std::size_t dim() const { return dim_; }
  std::size_t half_bandwidth() const { return kd_; }

  /// Any (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;

  /// Sets (i, j) and (j, i). Throws std::out_of_range outside the band.
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  /// Entries (j + d, j) for j = 0 .. dim - d - 1.
  std::span<const double> diagonal(std::size_t d) const;

  /// LAPACK 'L' band layout, column-major with leading dimension kd + 1.
  std::vector<double> to_lapack_lower() const;
  /// Row-major dense copy (small matrices / tests).
  std::vector<double> to_dense() const;

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;

  double trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  std::span<const double> raw() const { return data_; }
  std::span<double> raw() { return data_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t dim_ = 0;
  std::size_t kd_ = 0;
  std::vector<double> data_;
};

}  // namespace gcm
