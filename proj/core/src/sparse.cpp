#include "epsreg/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "epsreg/types.hpp"

namespace epsreg {

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw InvalidArgument("CsrMatrix::from_triplets: entry out of bounds");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) {
      sum += triplets[k].value;
    }
    m.col_idx_.push_back(c);
    m.values_.push_back(sum);
    ++m.row_ptr_[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw InvalidArgument("CsrMatrix::multiply: dimension mismatch");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    y[r] = sum;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

bool CsrMatrix::is_well_formed() const {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != nnz() ||
      col_idx_.size() != values_.size()) {
    return false;
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) return false;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) return false;
      if (k > row_ptr_[r] && col_idx_[k - 1] >= col_idx_[k]) return false;
    }
  }
  return true;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double relative_residual_inf(const CsrMatrix& a, std::span<const double> x,
                             std::span<const double> b) {
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double bnorm = max_abs(b);
  const double rnorm = max_abs(r);
  return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

}  // namespace epsreg
