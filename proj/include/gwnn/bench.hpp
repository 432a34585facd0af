#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gwnn::bench {

struct TimingPoint {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double seconds = 0.0;
};

struct ScalingResult {
  std::vector<TimingPoint> points;
  double slope = 0.0;
};

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Median time of one Chebyshev apply (order m, `columns` right-hand sides)
// on preferential-attachment graphs with the given node counts. Slope is
// fitted against |E|.
ScalingResult bench_cheb_apply(std::span<const std::size_t> node_counts,
                               std::size_t edges_per_node, std::size_t order,
                               std::size_t columns, std::size_t repeats, std::uint64_t seed);

// Median time of eigendecomposition plus exact basis construction on
// grid graphs; slope is fitted against n.
ScalingResult bench_exact_basis(std::span<const std::size_t> node_counts, std::size_t repeats);

// time(order_hi) / time(order_lo) for one apply on a fixed graph.
double bench_order_ratio(std::size_t nodes, std::size_t edges_per_node, std::size_t order_lo,
                         std::size_t order_hi, std::size_t columns, std::size_t repeats,
                         std::uint64_t seed);

}  // namespace gwnn::bench
