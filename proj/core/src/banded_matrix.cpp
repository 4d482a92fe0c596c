#include "gcm/banded_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace gcm {

BandedSymmetricMatrix::BandedSymmetricMatrix(std::size_t dim, std::size_t half_bandwidth)
    : dim_(dim), kd_(dim == 0 ? 0 : std::min(half_bandwidth, dim - 1)),
      data_((kd_ + 1) * dim, 0.0) {}

std::size_t BandedSymmetricMatrix::index(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i >= dim_ || i - j > kd_)
    throw std::out_of_range("band matrix index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside band");
  return (i - j) * dim_ + j;
}

double BandedSymmetricMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i >= dim_ || i - j > kd_) return 0.0;
  return data_[(i - j) * dim_ + j];
}

void BandedSymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[index(i, j)] = value;
}

void BandedSymmetricMatrix::add(std::size_t i, std::size_t j, double value) {
  data_[index(i, j)] += value;
}

std::span<const double> BandedSymmetricMatrix::diagonal(std::size_t d) const {
  if (d > kd_) throw std::out_of_range("diagonal outside band");
  return std::span<const double>(data_).subspan(d * dim_, dim_ - d);
}

std::vector<double> BandedSymmetricMatrix::to_lapack_lower() const {
  const std::size_t ld = kd_ + 1;
  std::vector<double> ab(ld * dim_, 0.0);
  for (std::size_t d = 0; d <= kd_; ++d)
    for (std::size_t j = 0; j + d < dim_; ++j) ab[j * ld + d] = data_[d * dim_ + j];
  return ab;
}

std::vector<double> BandedSymmetricMatrix::to_dense() const {
  std::vector<double> out(dim_ * dim_, 0.0);
  for (std::size_t d = 0; d <= kd_; ++d)
    for (std::size_t j = 0; j + d < dim_; ++j) {
      const double v = data_[d * dim_ + j];
      out[(j + d) * dim_ + j] = v;
      out[j * dim_ + j + d] = v;
    }
  return out;
}

void BandedSymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("band matrix multiply: size mismatch");
  for (std::size_t i = 0; i < dim_; ++i) y[i] = data_[i] * x[i];
  for (std::size_t d = 1; d <= kd_; ++d) {
    const double* diag = data_.data() + d * dim_;
    for (std::size_t j = 0; j + d < dim_; ++j) {
      y[j + d] += diag[j] * x[j];
      y[j] += diag[j] * x[j + d];
    }
  }
}

double BandedSymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i];
  return t;
}

double BandedSymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t d = 0; d <= kd_; ++d)
    for (std::size_t j = 0; j + d < dim_; ++j) {
      const double v = data_[d * dim_ + j];
      s += (d == 0 ? 1.0 : 2.0) * v * v;
    }
  return std::sqrt(s);
}

bool BandedSymmetricMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace gcm
