#include "pairwise.hpp"

#include <algorithm>

namespace cfeq::detail {

namespace {
constexpr std::size_t kCompensatedFromDim = 6;
}

Columns::Columns(const SampleMatrix& x)
    : rows_(x.rows()), cols_(x.cols()), data_(x.rows() * x.cols()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) data_[k * rows_ + i] = x(i, k);
  }
}

void squared_norm_row(const Columns& a, std::size_t i, const Columns& b, std::size_t first,
                      Combine op, std::span<double> out) {
  const std::size_t m = b.rows() - first;
  const std::size_t d = a.cols();
  double* o = out.data();
  std::fill_n(o, m, 0.0);

  if (d < kCompensatedFromDim) {
    for (std::size_t k = 0; k < d; ++k) {
      const double ai = a.at(i, k);
      const double* bk = b.col(k) + first;
      if (op == Combine::Difference) {
        for (std::size_t j = 0; j < m; ++j) {
          const double t = ai - bk[j];
          o[j] += t * t;
        }
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          const double t = ai + bk[j];
          o[j] += t * t;
        }
      }
    }
    return;
  }

  // Kahan accumulation; every addend is nonnegative.
  std::vector<double> carry(m, 0.0);
  double* c = carry.data();
  for (std::size_t k = 0; k < d; ++k) {
    const double ai = a.at(i, k);
    const double* bk = b.col(k) + first;
    const double sgn = op == Combine::Difference ? -1.0 : 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = ai + sgn * bk[j];
      const double y = t * t - c[j];
      const double s = o[j] + y;
      c[j] = (s - o[j]) - y;
      o[j] = s;
    }
  }
}

}  // namespace cfeq::detail
