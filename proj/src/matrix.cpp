#include "gwnn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gwnn/errors.hpp"
#include "gwnn/parallel.hpp"

namespace gwnn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(values_.size() == rows_ * cols_,
          "dense matrix " + dims(rows_, cols_) + " given " + std::to_string(values_.size()) +
              " values");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::column_vector(std::span<const double> v) {
  return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  require(row_ptr_.size() == rows_ + 1, "row_ptr length must be rows + 1");
  require(row_ptr_.front() == 0 && row_ptr_.back() == values_.size(),
          "row_ptr does not span the value array");
  require(col_idx_.size() == values_.size(), "col_idx and values differ in length");
  for (std::size_t r = 0; r < rows_; ++r) {
    require(row_ptr_[r] <= row_ptr_[r + 1], "row_ptr not monotone at row " + std::to_string(r));
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      require(col_idx_[k] < cols_, "column index out of range in row " + std::to_string(r));
      require(k == row_ptr_[r] || col_idx_[k - 1] < col_idx_[k],
              "column indices not strictly increasing in row " + std::to_string(r));
      require(values_[k] != 0.0, "explicit zero stored in row " + std::to_string(r));
    }
  }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1), idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    ptr[i + 1] = i + 1;
    idx[i] = i;
  }
  return SparseMatrix(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    require(t.row < rows && t.col < cols, "triplet (" + std::to_string(t.row) + ", " +
                                              std::to_string(t.col) + ") outside " +
                                              dims(rows, cols));
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> ptr(rows + 1, 0), idx;
  std::vector<double> vals;
  idx.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t i = 0;
  while (i < triplets.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row &&
           triplets[j].col == triplets[i].col) {
      sum += triplets[j].value;
      ++j;
    }
    if (sum != 0.0) {
      idx.push_back(triplets[i].col);
      vals.push_back(sum);
      ++ptr[triplets[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r) ptr[r + 1] += ptr[r];
  return SparseMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m, double threshold) {
  std::vector<std::size_t> ptr(m.rows() + 1, 0), idx;
  std::vector<double> vals;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (v != 0.0 && std::abs(v) >= threshold) {
        idx.push_back(c);
        vals.push_back(v);
      }
    }
    ptr[r + 1] = idx.size();
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(ptr), std::move(idx), std::move(vals));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) = values_[k];
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) ptr[c + 1] += ptr[c];
  std::vector<std::size_t> next(ptr.begin(), ptr.end() - 1);
  std::vector<std::size_t> idx(nnz());
  std::vector<double> vals(nnz());
  // Rows are visited in increasing order, so each transposed row comes out sorted.
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      idx[dst] = r;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(vals));
}

bool SparseMatrix::is_symmetric() const {
  return rows_ == cols_ && *this == transpose();
}

SparseMatrix threshold(const SparseMatrix& m, double t) {
  std::vector<std::size_t> ptr(m.rows() + 1, 0), idx;
  std::vector<double> vals;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cols = m.row_cols(r);
    const auto v = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (std::abs(v[k]) >= t) {
        idx.push_back(cols[k]);
        vals.push_back(v[k]);
      }
    }
    ptr[r + 1] = idx.size();
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(ptr), std::move(idx), std::move(vals));
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(),
          "spmm: " + dims(a.rows(), a.cols()) + " * " + dims(b.rows(), b.cols()));
  DenseMatrix out(a.rows(), b.cols());
  parallel_for(0, a.rows(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      auto dst = out.row(r);
      const auto cols = a.row_cols(r);
      const auto vals = a.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto src = b.row(cols[k]);
        const double v = vals[k];
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
      }
    }
  });
  return out;
}

DenseMatrix spmm_transposed(const SparseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(),
          "spmm_transposed: " + dims(a.rows(), a.cols()) + "^T * " + dims(b.rows(), b.cols()));
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = b.row(r);
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto dst = out.row(cols[k]);
      const double v = vals[k];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), "spmv: " + dims(a.rows(), a.cols()) + " * vector of length " +
                                    std::to_string(x.size()));
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[cols[k]];
    y[r] = acc;
  }
  return y;
}

SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b, double drop) {
  require(a.cols() == b.rows(),
          "spgemm: " + dims(a.rows(), a.cols()) + " * " + dims(b.rows(), b.cols()));
  std::vector<std::size_t> ptr(a.rows() + 1, 0), idx;
  std::vector<double> vals;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<char> touched(b.cols(), 0);
  std::vector<std::size_t> pattern;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    pattern.clear();
    const auto acols = a.row_cols(r);
    const auto avals = a.row_values(r);
    for (std::size_t k = 0; k < acols.size(); ++k) {
      const auto bcols = b.row_cols(acols[k]);
      const auto bvals = b.row_values(acols[k]);
      for (std::size_t q = 0; q < bcols.size(); ++q) {
        if (!touched[bcols[q]]) {
          touched[bcols[q]] = 1;
          pattern.push_back(bcols[q]);
        }
        acc[bcols[q]] += avals[k] * bvals[q];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (std::size_t c : pattern) {
      const double v = acc[c];
      if (v != 0.0 && std::abs(v) >= drop) {
        idx.push_back(c);
        vals.push_back(v);
      }
      acc[c] = 0.0;
      touched[c] = 0;
    }
    ptr[r + 1] = idx.size();
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(ptr), std::move(idx), std::move(vals));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(),
          "matmul: " + dims(a.rows(), a.cols()) + " * " + dims(b.rows(), b.cols()));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      const auto src = b.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(),
          "matmul_tn: " + dims(a.rows(), a.cols()) + "^T * " + dims(b.rows(), b.cols()));
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto arow = a.row(k);
    const auto brow = b.row(k);
    for (std::size_t i = 0; i < arow.size(); ++i) {
      const double v = arow[i];
      if (v == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < brow.size(); ++j) dst[j] += v * brow[j];
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(),
          "matmul_nt: " + dims(a.rows(), a.cols()) + " * " + dims(b.rows(), b.cols()) + "^T");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto brow = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < arow.size(); ++k) acc += arow[k] * brow[k];
      out(i, j) = acc;
    }
  }
  return out;
}

double frobenius_norm(const DenseMatrix& m) { return norm2(m.values()); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "frobenius_distance: shape mismatch");
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace gwnn
