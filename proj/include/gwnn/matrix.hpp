#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gwnn {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  // Single-column matrix holding `v`.
  static DenseMatrix column_vector(std::span<const double> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::vector<double> column(std::size_t c) const;
  DenseMatrix transpose() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly increasing
// within a row and no stored value is exactly zero.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  // Validates the CSR invariants; throws DimensionError on violation.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  static SparseMatrix identity(std::size_t n);
  // Duplicate coordinates are summed; entries that end up exactly zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  // Keeps entries with |v| >= threshold (and v != 0).
  static SparseMatrix from_dense(const DenseMatrix& m, double threshold = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // Stored value at (r, c), or 0 when absent.
  double at(std::size_t r, std::size_t c) const;

  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;
  // Exact structural and bitwise value equality with the transpose.
  bool is_symmetric() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// Drops every stored entry with |v| < t.
SparseMatrix threshold(const SparseMatrix& m, double t);

// a * b for CSR a and dense b. Each output row is accumulated in stored
// column order, so the result does not depend on thread count.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);
// a^T * b without materialising the transpose.
DenseMatrix spmm_transposed(const SparseMatrix& a, const DenseMatrix& b);
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
// Sparse * sparse. Entries with |v| < drop are discarded.
SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b, double drop = 0.0);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& m);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
double norm2(std::span<const double> v);

}  // namespace gwnn
