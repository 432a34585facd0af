#pragma once

#include <cstddef>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/matrix.hpp"

namespace gwnn {

// Upper bound on the spectrum of any normalized Laplacian.
inline constexpr double kNormalizedLaplacianBound = 2.0;
inline constexpr std::size_t kDefaultChebOrder = 30;

struct LambdaMaxEstimate {
  double value = kNormalizedLaplacianBound;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration to 1e-6 relative change of the Rayleigh quotient,
// multiplied by 1.01. Falls back to 2.0 (with converged == false and a
// warning on stderr) after `max_iterations`.
LambdaMaxEstimate estimate_lambda_max(const SparseMatrix& l, std::size_t max_iterations = 10000);

// Truncated shifted-Chebyshev expansion of g(x) = exp(sign * s * x) on
// [0, lambda_max]:  g(x) ~ c0/2 + sum_{k=1..m} c_k T_k((x - a)/a),  a = lambda_max/2.
struct ChebCoefficients {
  double scale = 0.0;
  int sign = -1;
  double lambda_max = kNormalizedLaplacianBound;
  double half_width = 1.0;
  std::vector<double> c;

  std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
  // Scalar reconstruction of the truncated series at x.
  double evaluate(double x) const;
};

// c_k = (2/pi) int_0^pi cos(k theta) g(s a (cos theta + 1)) dtheta, by the
// Chebyshev-Gauss rule with N = max(4m, 256) nodes.
ChebCoefficients chebyshev_coefficients(double s, int sign, double lambda_max, std::size_t m);

// Applies the truncated series in L to every column of f via the three-term
// recurrence T_k = (2/a)(L - aI) T_{k-1} - T_{k-2}. For a = 1 (lambda_max = 2)
// the shift (L - aI) is simply L - I. Cost O(m * nnz(L) * cols(f)).
DenseMatrix apply_operator(const SparseMatrix& l, const ChebCoefficients& coef,
                           const DenseMatrix& f);

struct MaterializeOptions {
  double lambda_max = kNormalizedLaplacianBound;
  std::size_t block_size = 64;
  KernelConvention convention = KernelConvention::kHeatInverse;
};

// Builds psi and psi_inv column-block by column-block from identity
// columns, thresholding each at t. Output does not depend on block_size.
SpectralBasis materialize_basis(const SparseMatrix& l, double s, double t, std::size_t m,
                                const MaterializeOptions& options = {});

}  // namespace gwnn
