#include <cmath>
#include <random>

#include "doctest.h"
#include "gwnn/errors.hpp"
#include "gwnn/matrix.hpp"
#include "gwnn/parallel.hpp"
#include "oracle.hpp"

using namespace gwnn;

namespace {

SparseMatrix random_sparse(std::size_t r, std::size_t c, double fill, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution on(fill);
  std::normal_distribution<double> g;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (on(rng)) t.push_back({i, j, g(rng)});
  return SparseMatrix::from_triplets(r, c, std::move(t));
}

}  // namespace

TEST_CASE("identity times B is B") {
  const DenseMatrix b = oracle::random_dense(3, 4, 1);
  CHECK(spmm(SparseMatrix::identity(3), b) == b);
}

TEST_CASE("Laplacian-like matrix times ones gives row sums") {
  const double w = -1.0 / std::sqrt(2.0);
  const SparseMatrix l = SparseMatrix::from_triplets(
      3, 3, {{0, 0, 1.0}, {0, 1, w}, {1, 0, w}, {1, 1, 1.0}, {1, 2, w}, {2, 1, w}, {2, 2, 1.0}});
  const auto out = spmm(l, DenseMatrix(3, 1, 1.0));
  CHECK(out(0, 0) == doctest::Approx(1.0 + w));
  CHECK(out(1, 0) == doctest::Approx(1.0 + 2.0 * w));
  CHECK(out(2, 0) == doctest::Approx(1.0 + w));
}

TEST_CASE("spmm matches the dense oracle on random inputs up to 64x64") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t r = 1 + seed * 3 % 64, k = 1 + seed * 7 % 64, c = 1 + seed % 5;
    const SparseMatrix a = random_sparse(r, k, 0.3, seed);
    const DenseMatrix b = oracle::random_dense(k, c, seed + 100);
    const DenseMatrix expect = oracle::naive_matmul(a.to_dense(), b);
    const DenseMatrix got = spmm(a, b);
    const double ref = std::max(oracle::frob(expect), 1e-300);
    CHECK(oracle::frob(oracle::minus(got, expect)) / ref <= 1e-12);
  }
  const SparseMatrix a5 = random_sparse(5, 5, 0.5, 42);
  const DenseMatrix b5 = oracle::random_dense(5, 2, 43);
  CHECK(oracle::max_abs_diff(spmm(a5, b5), oracle::naive_matmul(a5.to_dense(), b5)) <= 1e-12);
  CHECK_THROWS_AS(spmm(a5, oracle::random_dense(4, 2, 1)), DimensionError);
}

TEST_CASE("transposed products and spgemm agree with dense oracles") {
  const SparseMatrix a = random_sparse(9, 7, 0.4, 3);
  const SparseMatrix b = random_sparse(7, 6, 0.4, 4);
  const DenseMatrix d = oracle::random_dense(9, 3, 5);
  CHECK(oracle::max_abs_diff(spmm_transposed(a, d),
                             oracle::naive_matmul(a.to_dense().transpose(), d)) <= 1e-12);
  CHECK(oracle::max_abs_diff(spgemm(a, b).to_dense(),
                             oracle::naive_matmul(a.to_dense(), b.to_dense())) <= 1e-12);
  CHECK(a.transpose().to_dense() == a.to_dense().transpose());
  const DenseMatrix x = oracle::random_dense(4, 3, 6), y = oracle::random_dense(3, 5, 7);
  CHECK(oracle::max_abs_diff(matmul(x, y), oracle::naive_matmul(x, y)) <= 1e-12);
  CHECK(oracle::max_abs_diff(matmul_tn(x, x), oracle::naive_matmul(x.transpose(), x)) <= 1e-12);
  CHECK(oracle::max_abs_diff(matmul_nt(x, x), oracle::naive_matmul(x, x.transpose())) <= 1e-12);
}

TEST_CASE("CSR invariants are enforced") {
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), DimensionError);  // unsorted
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 1}, {0}, {0.0}), DimensionError);          // explicit zero
  CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 1, 1}, {2}, {1.0}), DimensionError);          // column range
  const auto m = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}, {1, 0, -1.0}});
  CHECK(m.nnz() == 1);
  CHECK(m.at(0, 1) == 3.0);
  CHECK(m.at(1, 0) == 0.0);
}

TEST_CASE("threshold drops entries below t by magnitude") {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 0, 0.5}, {0, 2, -1e-5}, {1, 1, 2e-4}, {1, 2, -3.0}});
  const auto t = threshold(m, 1e-4);
  CHECK(t.nnz() == 3);
  CHECK(t.at(0, 2) == 0.0);
  for (double v : t.values()) CHECK(std::abs(v) >= 1e-4);
  CHECK(threshold(m, 0.0) == m);
  DenseMatrix d(2, 2);
  d(0, 0) = 1e-5;
  d(1, 1) = -2.0;
  CHECK(SparseMatrix::from_dense(d, 1e-4).nnz() == 1);
  CHECK(SparseMatrix::from_dense(d).nnz() == 2);
}

TEST_CASE("spmm output is bit-identical for any thread count") {
  const SparseMatrix a = random_sparse(700, 700, 0.02, 8);
  const DenseMatrix b = oracle::random_dense(700, 6, 9);
  set_thread_count(1);
  const DenseMatrix one = spmm(a, b);
  set_thread_count(4);
  const DenseMatrix four = spmm(a, b);
  set_thread_count(1);
  CHECK(one == four);
}
