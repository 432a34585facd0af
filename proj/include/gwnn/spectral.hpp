#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/matrix.hpp"

namespace gwnn {

// Dense eigendecomposition of a symmetric operator. Columns of `vectors`
// are orthonormal eigenvectors, `values` ascending.
struct EigenSystem {
  DenseMatrix vectors;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

inline constexpr std::size_t kDefaultEigenCap = 5000;

// O(n^3) time and O(n^2) memory; refuses n above `max_n`. Throws
// NumericalError for asymmetric input or when the QL iteration fails.
EigenSystem eigendecompose(const SparseMatrix& l, std::size_t max_n = kDefaultEigenCap);

// x_hat = U^T x
std::vector<double> fourier_transform(const EigenSystem& es, std::span<const double> x);
// x = U x_hat
std::vector<double> inverse_fourier_transform(const EigenSystem& es, std::span<const double> xhat);
// U((U^T y) .* (U^T x))
std::vector<double> fourier_convolution(const EigenSystem& es, std::span<const double> x,
                                        std::span<const double> y);

// U^T as a dense matrix (the graph Fourier transform operator).
DenseMatrix fourier_matrix(const EigenSystem& es);

// U diag(exp(exponent * lambda)) U^T, dense.
DenseMatrix spectral_function(const EigenSystem& es, double exponent);

// psi = U G_s U^T and psi_inv with the opposite kernel sign, each
// thresholded independently at t (entries with |v| < t dropped).
SpectralBasis wavelet_basis_exact(const EigenSystem& es, double s, double t,
                                  KernelConvention convention = KernelConvention::kHeatInverse);

// psi((psi_inv y) .* (psi_inv x))
std::vector<double> wavelet_convolution(const SpectralBasis& basis, std::span<const double> x,
                                        std::span<const double> y);

}  // namespace gwnn
