#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/graph.hpp"
#include "gwnn/matrix.hpp"
#include "gwnn/spectral.hpp"

namespace gwnn {

struct DensityStats {
  double density = 0.0;
  std::size_t nnz = 0;
};

// Stored entries / (rows * cols).
DensityStats matrix_density(const SparseMatrix& m);
// Entries that are exactly non-zero / (rows * cols).
DensityStats matrix_density(const DenseMatrix& m);

std::vector<double> feature_column(const SparseMatrix& x, std::size_t feature);

struct ProjectionStats {
  std::size_t nnz = 0;
  double density = 0.0;
  std::vector<double> projected;
};

// p = psi_inv X[:, feature]; counts entries with |p_i| > t_signal.
ProjectionStats projected_signal_stats(const SpectralBasis& basis, const SparseMatrix& x,
                                       std::size_t feature, double t_signal = 0.0);
// q = U^T X[:, feature]
ProjectionStats projected_signal_stats(const EigenSystem& es, const SparseMatrix& x,
                                       std::size_t feature, double t_signal = 0.0);

struct ActiveBasis {
  std::size_t node;
  double value;
  int label;
};

// The k largest entries of psi_inv X[:, feature], value descending, ties by
// node index. `labels` may be empty, in which case label is -1.
std::vector<ActiveBasis> top_active_bases(const SpectralBasis& basis, const SparseMatrix& x,
                                          std::size_t feature, std::size_t k,
                                          std::span<const int> labels = {});

struct ReportRow {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t nnz = 0;
  double density = 0.0;
};

struct SparsityReport {
  std::vector<ReportRow> rows;
  double scale = 0.0;
  double threshold = 0.0;
  std::string method;
  KernelConvention convention = KernelConvention::kHeatInverse;
};

// Rows: psi_inv, psi, Fourier U^T (when `es` is given), Laplacian full and
// Laplacian off-diagonal only.
SparsityReport sparsity_report(const Graph& g, const SpectralBasis& basis,
                               const EigenSystem* es = nullptr, bool allow_isolated = false);

void write_report_tsv(const SparsityReport& report, std::ostream& out);
void write_report_text(const SparsityReport& report, std::ostream& out);

}  // namespace gwnn
