#pragma once

// Row sweeps over pairwise squared norms. Every estimator walks the upper
// triangle one row at a time: squared norms for the row, then the radial
// kernel transform, then accumulation.

#include <cstddef>
#include <span>
#include <vector>

#include "cfeq/sample.hpp"

namespace cfeq::detail {

/// Column-major copy of a sample, so a row sweep reads contiguous memory.
class Columns {
 public:
  explicit Columns(const SampleMatrix& x);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] const double* col(std::size_t k) const noexcept { return data_.data() + k * rows_; }
  [[nodiscard]] double at(std::size_t i, std::size_t k) const noexcept { return data_[k * rows_ + i]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class Combine { Difference, Sum };

/// out[j - first] = |a_i -/+ b_j|^2 for j in [first, b.rows()).
/// Uses compensated accumulation over coordinates when d >= 6.
void squared_norm_row(const Columns& a, std::size_t i, const Columns& b, std::size_t first,
                      Combine op, std::span<double> out);

}  // namespace cfeq::detail
