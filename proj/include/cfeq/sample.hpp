#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cfeq {

/// An n x d block of finite observations stored row-major, one row per
/// observation. Construction enforces n >= 2, d >= 1 and finiteness.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t k) const noexcept {
    return values_[i * cols_ + k];
  }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Every entry multiplied by -1.
  [[nodiscard]] SampleMatrix negated() const;
  /// Rows taken in the given order (repeats allowed).
  [[nodiscard]] SampleMatrix select_rows(std::span<const std::size_t> order) const;
  /// All rows except `skip`.
  [[nodiscard]] SampleMatrix without_row(std::size_t skip) const;
  /// Columns [first, first + count).
  [[nodiscard]] SampleMatrix columns(std::size_t first, std::size_t count) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Two independent samples of equal size and dimension (balanced design).
struct TwoSample {
  TwoSample(SampleMatrix x_, SampleMatrix y_);
  SampleMatrix x;
  SampleMatrix y;
};

/// Paired observations (x_i, y_i); x is n x p, y is n x q.
struct PairedSample {
  PairedSample(SampleMatrix x_, SampleMatrix y_);
  SampleMatrix x;
  SampleMatrix y;

  /// Splits the columns of `joint` at `p` into (x, y).
  static PairedSample split(const SampleMatrix& joint, std::size_t p);
};

}  // namespace cfeq
