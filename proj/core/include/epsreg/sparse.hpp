#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace epsreg {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix with sorted, duplicate-free column indices
/// in every row.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Duplicates are summed. Entries are ordered by (row, col) regardless of
  /// the input order, and summation of duplicates follows input order.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Stored value at (r, c), 0 if structurally absent.
  double at(std::size_t r, std::size_t c) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Checks sorted in-bounds column indices and consistent row pointers.
  bool is_well_formed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

double max_abs(std::span<const double> v);
double norm2(std::span<const double> v);

/// |A x - b|_inf / |b|_inf (absolute residual when b == 0).
double relative_residual_inf(const CsrMatrix& a, std::span<const double> x,
                             std::span<const double> b);

}  // namespace epsreg
