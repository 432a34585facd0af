#include "gwnn/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "gwnn/errors.hpp"

namespace gwnn {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const DenseMatrix& m) {
  return {m.values().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

void require_length(std::size_t got, std::size_t n, const char* what) {
  if (got != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace

EigenSystem eigendecompose(const SparseMatrix& l, std::size_t max_n) {
  if (l.rows() != l.cols()) throw DimensionError("eigendecompose: operator is not square");
  const std::size_t n = l.rows();
  if (n > max_n) {
    throw NumericalError("eigendecompose: n=" + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(max_n) +
                         " (dense O(n^3) solve); use the Chebyshev method instead");
  }
  const DenseMatrix dense = l.to_dense();
  double scale = 0.0;
  for (double v : dense.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(dense(i, j) - dense(j, i)) > 1e-12 * std::max(scale, 1.0)) {
        throw NumericalError("eigendecompose: operator is not symmetric at (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")");
      }
    }
  }

  Eigen::MatrixXd a = view(dense);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: tridiagonal QL iteration did not converge within " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations) +
                         "*n sweeps (n=" + std::to_string(n) + ")");
  }

  EigenSystem es;
  es.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  es.vectors = DenseMatrix(n, n);
  const Eigen::MatrixXd& u = solver.eigenvectors();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      es.vectors(i, j) = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return es;
}

std::vector<double> fourier_transform(const EigenSystem& es, std::span<const double> x) {
  require_length(x.size(), es.size(), "fourier_transform");
  const std::size_t n = es.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = es.vectors.row(i);
    const double xi = x[i];
    for (std::size_t l = 0; l < n; ++l) out[l] += row[l] * xi;
  }
  return out;
}

std::vector<double> inverse_fourier_transform(const EigenSystem& es, std::span<const double> xhat) {
  require_length(xhat.size(), es.size(), "inverse_fourier_transform");
  const std::size_t n = es.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = es.vectors.row(i);
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) acc += row[l] * xhat[l];
    out[i] = acc;
  }
  return out;
}

std::vector<double> fourier_convolution(const EigenSystem& es, std::span<const double> x,
                                        std::span<const double> y) {
  require_length(x.size(), es.size(), "fourier_convolution");
  require_length(y.size(), es.size(), "fourier_convolution");
  auto xh = fourier_transform(es, x);
  const auto yh = fourier_transform(es, y);
  for (std::size_t l = 0; l < xh.size(); ++l) xh[l] *= yh[l];
  return inverse_fourier_transform(es, xh);
}

DenseMatrix fourier_matrix(const EigenSystem& es) { return es.vectors.transpose(); }

DenseMatrix spectral_function(const EigenSystem& es, double exponent) {
  const std::size_t n = es.size();
  const auto u = view(es.vectors);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t l = 0; l < n; ++l) g[static_cast<Eigen::Index>(l)] = std::exp(exponent * es.values[l]);
  RowMajor scaled = u * g.asDiagonal();
  RowMajor prod = scaled * u.transpose();
  DenseMatrix out(n, n);
  std::copy(prod.data(), prod.data() + n * n, out.values().begin());
  return out;
}

SpectralBasis wavelet_basis_exact(const EigenSystem& es, double s, double t,
                                  KernelConvention convention) {
  if (!(s >= 0.0)) throw UsageError("wavelet scale s must be >= 0");
  if (!(t >= 0.0)) throw UsageError("threshold t must be >= 0");
  const int inv = inverse_sign(convention);
  SpectralBasis b;
  if (s == 0.0) {
    // e^{0 L} = I exactly; U U^T would leave rounding noise off the diagonal.
    b.psi = SparseMatrix::identity(es.size());
    b.psi_inv = SparseMatrix::identity(es.size());
  } else {
    b.psi = SparseMatrix::from_dense(spectral_function(es, -inv * s), t);
    b.psi_inv = SparseMatrix::from_dense(spectral_function(es, inv * s), t);
  }
  b.scale = s;
  b.threshold = t;
  b.method = BasisMethod::kExact;
  b.order = 0;
  b.lambda_max = es.values.empty() ? 0.0 : es.values.back();
  b.convention = convention;
  return b;
}

std::vector<double> wavelet_convolution(const SpectralBasis& basis, std::span<const double> x,
                                        std::span<const double> y) {
  require_length(x.size(), basis.size(), "wavelet_convolution");
  require_length(y.size(), basis.size(), "wavelet_convolution");
  auto xh = spmv(basis.psi_inv, x);
  const auto yh = spmv(basis.psi_inv, y);
  for (std::size_t i = 0; i < xh.size(); ++i) xh[i] *= yh[i];
  return spmv(basis.psi, xh);
}

}  // namespace gwnn
