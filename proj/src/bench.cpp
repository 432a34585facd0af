#include "gwnn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "gwnn/chebyshev.hpp"
#include "gwnn/errors.hpp"
#include "gwnn/graph.hpp"
#include "gwnn/spectral.hpp"
#include "gwnn/synthetic.hpp"

namespace gwnn::bench {

namespace {

double median_seconds(std::size_t repeats, const std::function<void()>& fn) {
  std::vector<double> samples;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

DenseMatrix random_block(std::size_t n, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  DenseMatrix f(n, cols);
  for (double& v : f.values()) v = gauss(rng);
  return f;
}

}  // namespace

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("loglog_slope needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ScalingResult bench_cheb_apply(std::span<const std::size_t> node_counts,
                               std::size_t edges_per_node, std::size_t order,
                               std::size_t columns, std::size_t repeats, std::uint64_t seed) {
  ScalingResult res;
  const auto coef = chebyshev_coefficients(1.0, -1, kNormalizedLaplacianBound, order);
  for (std::size_t n : node_counts) {
    const Graph g = synthetic::preferential_attachment(n, edges_per_node, seed + n);
    const SparseMatrix lap = normalized_laplacian(g);
    const DenseMatrix f = random_block(n, columns, seed);
    DenseMatrix sink;
    const double t = median_seconds(repeats, [&] { sink = apply_operator(lap, coef, f); });
    res.points.push_back({n, g.edge_count(), t});
  }
  std::vector<double> x, y;
  for (const auto& p : res.points) {
    x.push_back(static_cast<double>(p.edges));
    y.push_back(p.seconds);
  }
  res.slope = loglog_slope(x, y);
  return res;
}

ScalingResult bench_exact_basis(std::span<const std::size_t> node_counts, std::size_t repeats) {
  ScalingResult res;
  for (std::size_t n : node_counts) {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const Graph g = synthetic::grid_graph(side, (n + side - 1) / side);
    const SparseMatrix lap = normalized_laplacian(g);
    const double t = median_seconds(repeats, [&] {
      const EigenSystem es = eigendecompose(lap, g.node_count());
      (void)wavelet_basis_exact(es, 1.0, 1e-4);
    });
    res.points.push_back({g.node_count(), g.edge_count(), t});
  }
  std::vector<double> x, y;
  for (const auto& p : res.points) {
    x.push_back(static_cast<double>(p.nodes));
    y.push_back(p.seconds);
  }
  res.slope = loglog_slope(x, y);
  return res;
}

double bench_order_ratio(std::size_t nodes, std::size_t edges_per_node, std::size_t order_lo,
                         std::size_t order_hi, std::size_t columns, std::size_t repeats,
                         std::uint64_t seed) {
  const Graph g = synthetic::preferential_attachment(nodes, edges_per_node, seed);
  const SparseMatrix lap = normalized_laplacian(g);
  const DenseMatrix f = random_block(nodes, columns, seed);
  const auto lo = chebyshev_coefficients(1.0, -1, kNormalizedLaplacianBound, order_lo);
  const auto hi = chebyshev_coefficients(1.0, -1, kNormalizedLaplacianBound, order_hi);
  DenseMatrix sink;
  const double t_lo = median_seconds(repeats, [&] { sink = apply_operator(lap, lo, f); });
  const double t_hi = median_seconds(repeats, [&] { sink = apply_operator(lap, hi, f); });
  return t_hi / t_lo;
}

}  // namespace gwnn::bench
