#include "gwnn/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <utility>

#include "gwnn/errors.hpp"
#include "gwnn/parallel.hpp"

namespace gwnn {

LambdaMaxEstimate estimate_lambda_max(const SparseMatrix& l, std::size_t max_iterations) {
  if (l.rows() != l.cols()) throw DimensionError("estimate_lambda_max: operator is not square");
  const std::size_t n = l.rows();
  LambdaMaxEstimate est;
  if (n == 0) return est;

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::vector<double> v(n);
  for (auto& x : v) x = unif(rng);
  double nv = norm2(v);
  for (auto& x : v) x /= nv;

  double prev = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    std::vector<double> w = spmv(l, v);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) rayleigh += v[i] * w[i];
    const double nw = norm2(w);
    if (nw == 0.0) {
      // Zero operator: every eigenvalue is 0.
      est.value = 0.0;
      est.iterations = it;
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (it > 1 && std::abs(rayleigh - prev) <= 1e-6 * std::abs(rayleigh)) {
      est.value = 1.01 * rayleigh;
      est.iterations = it;
      est.converged = true;
      return est;
    }
    prev = rayleigh;
  }
  std::cerr << "warning: power iteration did not converge after " << max_iterations
            << " iterations; using lambda_max = " << kNormalizedLaplacianBound << '\n';
  est.value = kNormalizedLaplacianBound;
  est.iterations = max_iterations;
  est.converged = false;
  return est;
}

double ChebCoefficients::evaluate(double x) const {
  if (c.empty()) return 0.0;
  const double y = (x - half_width) / half_width;
  double t_prev = 1.0;
  double t_cur = y;
  double sum = 0.5 * c[0];
  for (std::size_t k = 1; k < c.size(); ++k) {
    sum += c[k] * t_cur;
    const double t_next = 2.0 * y * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return sum;
}

ChebCoefficients chebyshev_coefficients(double s, int sign, double lambda_max, std::size_t m) {
  if (m < 1) throw UsageError("Chebyshev order m must be >= 1");
  if (!(s >= 0.0)) throw UsageError("wavelet scale s must be >= 0");
  if (sign != 1 && sign != -1) throw UsageError("kernel sign must be +1 or -1");
  if (!(lambda_max > 0.0)) throw UsageError("lambda_max must be positive");

  ChebCoefficients coef;
  coef.scale = s;
  coef.sign = sign;
  coef.lambda_max = lambda_max;
  coef.half_width = lambda_max / 2.0;
  coef.c.assign(m + 1, 0.0);

  const std::size_t nodes = std::max<std::size_t>(4 * m, 256);
  std::vector<double> theta(nodes), g(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    theta[j] = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes);
    const double x = coef.half_width * (std::cos(theta[j]) + 1.0);
    g[j] = std::exp(sign * s * x);
  }
  for (std::size_t k = 0; k <= m; ++k) {
    if (s == 0.0 && k > 0) continue;  // g == 1: higher coefficients vanish analytically
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) acc += std::cos(static_cast<double>(k) * theta[j]) * g[j];
    coef.c[k] = 2.0 * acc / static_cast<double>(nodes);
  }
  return coef;
}

DenseMatrix apply_operator(const SparseMatrix& l, const ChebCoefficients& coef,
                           const DenseMatrix& f) {
  if (l.rows() != l.cols() || l.cols() != f.rows()) {
    throw DimensionError("apply_operator: L is " + std::to_string(l.rows()) + "x" +
                         std::to_string(l.cols()) + ", f has " + std::to_string(f.rows()) +
                         " rows");
  }
  const std::size_t n = f.rows();
  const std::size_t k = f.cols();
  const double a = coef.half_width;
  const auto& c = coef.c;

  DenseMatrix out(n, k);
  if (c.empty()) return out;

  // out = c0/2 f
  {
    const auto src = f.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 0.5 * c[0] * src[i];
  }
  if (c.size() == 1) return out;

  // shifted(x) = (L - aI) x / a, written row-wise so each output row has a
  // fixed accumulation order.
  auto shifted = [&](const DenseMatrix& x, double mult, const DenseMatrix* subtract,
                     DenseMatrix& dst) {
    parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
      std::vector<double> acc(k);
      for (std::size_t r = lo; r < hi; ++r) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const auto cols = l.row_cols(r);
        const auto vals = l.row_values(r);
        for (std::size_t q = 0; q < cols.size(); ++q) {
          const auto src = x.row(cols[q]);
          const double v = vals[q];
          for (std::size_t j = 0; j < k; ++j) acc[j] += v * src[j];
        }
        const auto xr = x.row(r);
        auto d = dst.row(r);
        for (std::size_t j = 0; j < k; ++j) {
          double val = mult * (acc[j] - a * xr[j]) / a;
          if (subtract) val -= (*subtract)(r, j);
          d[j] = val;
        }
      }
    });
  };

  DenseMatrix t_prev = f;
  DenseMatrix t_cur(n, k);
  shifted(t_prev, 1.0, nullptr, t_cur);
  DenseMatrix t_next(n, k);
  for (std::size_t deg = 1; deg < c.size(); ++deg) {
    {
      const auto src = t_cur.values();
      auto dst = out.values();
      const double ck = c[deg];
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] += ck * src[i];
    }
    if (deg + 1 == c.size()) break;
    shifted(t_cur, 2.0, &t_prev, t_next);
    std::swap(t_prev, t_cur);
    std::swap(t_cur, t_next);
  }
  return out;
}

SpectralBasis materialize_basis(const SparseMatrix& l, double s, double t, std::size_t m,
                                const MaterializeOptions& options) {
  if (!(t >= 0.0)) throw UsageError("threshold t must be >= 0");
  if (options.block_size == 0) throw UsageError("block size must be >= 1");
  if (l.rows() != l.cols()) throw DimensionError("materialize_basis: operator is not square");
  const std::size_t n = l.rows();
  const int inv = inverse_sign(options.convention);
  const ChebCoefficients coef_inv = chebyshev_coefficients(s, inv, options.lambda_max, m);
  const ChebCoefficients coef_fwd = chebyshev_coefficients(s, -inv, options.lambda_max, m);

  struct Entry {
    std::size_t col;
    double value;
  };
  std::vector<std::vector<Entry>> rows_fwd(n), rows_inv(n);

  for (std::size_t start = 0; start < n; start += options.block_size) {
    const std::size_t width = std::min(options.block_size, n - start);
    DenseMatrix block(n, width);
    for (std::size_t j = 0; j < width; ++j) block(start + j, j) = 1.0;
    const DenseMatrix fwd = apply_operator(l, coef_fwd, block);
    const DenseMatrix bwd = apply_operator(l, coef_inv, block);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < width; ++j) {
        const double vf = fwd(r, j);
        if (vf != 0.0 && std::abs(vf) >= t) rows_fwd[r].push_back({start + j, vf});
        const double vi = bwd(r, j);
        if (vi != 0.0 && std::abs(vi) >= t) rows_inv[r].push_back({start + j, vi});
      }
    }
  }

  auto to_csr = [n](std::vector<std::vector<Entry>>& rows) {
    std::vector<std::size_t> ptr(n + 1, 0), idx;
    std::vector<double> vals;
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    idx.reserve(total);
    vals.reserve(total);
    for (std::size_t r = 0; r < n; ++r) {
      for (const auto& e : rows[r]) {
        idx.push_back(e.col);
        vals.push_back(e.value);
      }
      ptr[r + 1] = idx.size();
      std::vector<Entry>().swap(rows[r]);
    }
    return SparseMatrix(n, n, std::move(ptr), std::move(idx), std::move(vals));
  };

  SpectralBasis b;
  b.psi = to_csr(rows_fwd);
  b.psi_inv = to_csr(rows_inv);
  b.scale = s;
  b.threshold = t;
  b.method = BasisMethod::kChebyshev;
  b.order = m;
  b.lambda_max = options.lambda_max;
  b.convention = options.convention;
  return b;
}

}  // namespace gwnn
