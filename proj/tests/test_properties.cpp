// Randomized invariants across modules. Each case draws graphs from a small
// hand-rolled generator so failures can be replayed from the printed seed.
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gwnn/basis.hpp"
#include "gwnn/chebyshev.hpp"
#include "gwnn/graph.hpp"
#include "gwnn/locality.hpp"
#include "gwnn/model.hpp"
#include "gwnn/spectral.hpp"
#include "gwnn/synthetic.hpp"
#include "oracle.hpp"

using namespace gwnn;

namespace {

struct GraphCase {
  Graph graph;
  std::uint64_t seed;
  std::string kind;
};

GraphCase draw_graph(std::uint64_t seed, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 3 + rng() % (max_n - 2);
  switch (rng() % 4) {
    case 0: return {synthetic::path_graph(n), seed, "path"};
    case 1: return {synthetic::cycle_graph(n), seed, "cycle"};
    case 2: return {synthetic::preferential_attachment(n, 1 + rng() % 3, seed), seed, "pa"};
    default: return {synthetic::random_connected(n, 0.02 + 0.2 * (rng() % 100) / 100.0, seed), seed, "random"};
  }
}

double rel_frob(const DenseMatrix& got, const DenseMatrix& ref) {
  return oracle::frob(oracle::minus(got, ref)) / oracle::frob(ref);
}

}  // namespace

TEST_CASE("Laplacian invariants") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const auto gc = draw_graph(seed, 60);
    CAPTURE(seed);
    CAPTURE(gc.kind);
    const SparseMatrix l = normalized_laplacian(gc.graph);
    const DenseMatrix d = l.to_dense();
    const std::size_t n = gc.graph.node_count();
    CHECK(l.nnz() == 2 * gc.graph.edge_count() + n);
    CHECK(oracle::max_abs_diff(d, oracle::dense_laplacian(gc.graph)) <= 1e-15);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d(i, i) == 1.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(d(i, j) == d(j, i));
    }
    // D^{1/2} 1 is in the null space.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sqrt(double(gc.graph.degree(i)));
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += d(i, j) * v[j];
      CHECK(std::abs(acc) <= 1e-12);
    }
  }
}

TEST_CASE("exact pair inverts and Chebyshev tracks it") {
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    const auto gc = draw_graph(seed, 80);
    CAPTURE(seed);
    const SparseMatrix l = normalized_laplacian(gc.graph);
    const auto es = eigendecompose(l);
    CHECK(es.values.front() >= -1e-10);
    CHECK(es.values.back() <= 2.0 + 1e-10);
    const double s = 0.25 + 0.25 * double(seed % 5);
    for (auto conv : {KernelConvention::kHeatInverse, KernelConvention::kHeatForward}) {
      const auto ex = wavelet_basis_exact(es, s, 0.0, conv);
      const std::size_t n = l.rows();
      const DenseMatrix prod = oracle::naive_matmul(ex.psi.to_dense(), ex.psi_inv.to_dense());
      CHECK(oracle::max_abs_diff(prod, DenseMatrix::identity(n)) <= 1e-9);
      MaterializeOptions opts;
      opts.convention = conv;
      const auto ch = materialize_basis(l, s, 0.0, 30, opts);
      CHECK(rel_frob(ch.psi_inv.to_dense(), ex.psi_inv.to_dense()) <= 1e-5);
      CHECK(rel_frob(ch.psi.to_dense(), ex.psi.to_dense()) <= 1e-5);
    }
  }
}

TEST_CASE("thresholding is monotone in t") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const auto gc = draw_graph(seed, 50);
    const auto es = eigendecompose(normalized_laplacian(gc.graph));
    std::size_t prev = ~std::size_t{0};
    for (double t : {0.0, 1e-6, 1e-4, 1e-2}) {
      const auto b = wavelet_basis_exact(es, 1.0, t);
      CHECK(b.psi_inv.nnz() <= prev);
      prev = b.psi_inv.nnz();
      for (double v : b.psi_inv.values()) CHECK(std::abs(v) >= t);
    }
  }
}

TEST_CASE("heat kernel rows are non-negative and preserve D^{1/2} 1") {
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    const auto gc = draw_graph(seed, 40);
    const auto es = eigendecompose(normalized_laplacian(gc.graph));
    const DenseMatrix h = wavelet_basis_exact(es, 1.0, 0.0).psi_inv.to_dense();
    const std::size_t n = gc.graph.node_count();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sqrt(double(gc.graph.degree(i)));
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(h(i, j) >= -1e-12);
        acc += h(i, j) * v[j];
      }
      CHECK(std::abs(acc - v[i]) <= 1e-10);
    }
  }
}

TEST_CASE("edge file and basis cache round trip") {
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    const auto gc = draw_graph(seed, 70);
    std::stringstream buf;
    write_edge_file(gc.graph, buf);
    const EdgeList el = parse_edge_list(buf, "<buf>");
    const Graph back = load_graph(el.edges, *el.declared_n);
    CHECK(std::equal(back.edges().begin(), back.edges().end(), gc.graph.edges().begin(), gc.graph.edges().end()));
    CHECK(back.node_count() == gc.graph.node_count());

    const auto b = materialize_basis(normalized_laplacian(gc.graph), 0.5, 1e-5, 20);
    std::stringstream bin;
    write_basis(b, bin);
    const auto rb = read_basis(bin);
    CHECK(rb.psi == b.psi);
    CHECK(rb.psi_inv == b.psi_inv);
  }
}

TEST_CASE("softmax outputs are distributions for random inputs") {
  for (std::uint64_t seed = 600; seed < 620; ++seed) {
    DenseMatrix z = oracle::random_dense(7, 1 + seed % 6, seed);
    for (double& v : z.values()) v *= 50.0;
    const DenseMatrix p = softmax_rows(z);
    for (std::size_t i = 0; i < p.rows(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j) {
        CHECK(p(i, j) >= 0.0);
        sum += p(i, j);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
