#include "cfeq/sample.hpp"

#include <cmath>
#include <string>

#include "cfeq/errors.hpp"

namespace cfeq {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (cols_ < 1) throw ShapeError("sample must have at least one column");
  if (rows_ < 2) {
    throw InsufficientSampleError("sample must have at least two observations, got " +
                                  std::to_string(rows_));
  }
  if (values_.size() != rows_ * cols_) {
    throw ShapeError("sample holds " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(rows_ * cols_));
  }
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      throw InputDomainError("non-finite value at row " + std::to_string(idx / cols_) +
                             ", column " + std::to_string(idx % cols_));
    }
  }
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InsufficientSampleError("sample has no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ShapeError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " columns, expected " + std::to_string(cols));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return {rows.size(), cols, std::move(values)};
}

SampleMatrix SampleMatrix::negated() const {
  std::vector<double> v(values_);
  for (double& e : v) e = -e;
  return {rows_, cols_, std::move(v)};
}

SampleMatrix SampleMatrix::select_rows(std::span<const std::size_t> order) const {
  std::vector<double> v;
  v.reserve(order.size() * cols_);
  for (std::size_t i : order) {
    if (i >= rows_) throw ShapeError("row index out of range");
    const auto r = row(i);
    v.insert(v.end(), r.begin(), r.end());
  }
  return {order.size(), cols_, std::move(v)};
}

SampleMatrix SampleMatrix::without_row(std::size_t skip) const {
  std::vector<std::size_t> order;
  order.reserve(rows_ - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i != skip) order.push_back(i);
  }
  return select_rows(order);
}

SampleMatrix SampleMatrix::columns(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > cols_) throw ShapeError("column range out of bounds");
  std::vector<double> v;
  v.reserve(rows_ * count);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    v.insert(v.end(), r.begin() + static_cast<std::ptrdiff_t>(first),
             r.begin() + static_cast<std::ptrdiff_t>(first + count));
  }
  return {rows_, count, std::move(v)};
}

TwoSample::TwoSample(SampleMatrix x_, SampleMatrix y_) : x(std::move(x_)), y(std::move(y_)) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("two-sample data must have equal shapes: " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) + "x" +
                     std::to_string(y.cols()));
  }
}

PairedSample::PairedSample(SampleMatrix x_, SampleMatrix y_) : x(std::move(x_)), y(std::move(y_)) {
  if (x.rows() != y.rows()) {
    throw ShapeError("paired data must have equal row counts: " + std::to_string(x.rows()) +
                     " vs " + std::to_string(y.rows()));
  }
}

PairedSample PairedSample::split(const SampleMatrix& joint, std::size_t p) {
  if (p < 1 || p >= joint.cols()) {
    throw ShapeError("split point " + std::to_string(p) + " must lie in [1, " +
                     std::to_string(joint.cols() - 1) + "]");
  }
  return {joint.columns(0, p), joint.columns(p, joint.cols() - p)};
}

}  // namespace cfeq
