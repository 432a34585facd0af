#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gwnn/chebyshev.hpp"
#include "gwnn/errors.hpp"
#include "gwnn/parallel.hpp"
#include "gwnn/spectral.hpp"
#include "gwnn/synthetic.hpp"
#include "oracle.hpp"

using namespace gwnn;

namespace {

double rel_frob(const DenseMatrix& got, const DenseMatrix& ref) {
  return oracle::frob(oracle::minus(got, ref)) / oracle::frob(ref);
}

}  // namespace

TEST_CASE("lambda max estimates") {
  const auto p3 = estimate_lambda_max(normalized_laplacian(synthetic::path_graph(3)));
  CHECK(p3.converged);
  CHECK(p3.value >= 2.0);
  CHECK(p3.value <= 2.02);
  const std::vector<Edge> k2{{0, 1}};
  CHECK(estimate_lambda_max(normalized_laplacian(load_graph(k2, 2))).value >= 2.0);
  const auto i5 = estimate_lambda_max(SparseMatrix::identity(5));
  CHECK(i5.value >= 1.0);
  CHECK(i5.value <= 1.01 + 1e-12);
}

TEST_CASE("coefficients of a constant kernel") {
  const auto c = chebyshev_coefficients(0.0, -1, 2.0, 10);
  CHECK(c.c[0] == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t k = 1; k < c.c.size(); ++k) CHECK(c.c[k] == 0.0);
  CHECK(c.order() == 10);
  CHECK_THROWS_AS(chebyshev_coefficients(1.0, -1, 2.0, 0), UsageError);
  CHECK_THROWS_AS(chebyshev_coefficients(-1.0, -1, 2.0, 5), UsageError);
  CHECK_THROWS_AS(chebyshev_coefficients(1.0, 0, 2.0, 5), UsageError);
}

TEST_CASE("scalar reconstruction of the exponential") {
  const auto dec = chebyshev_coefficients(1.0, -1, 2.0, 20);
  for (double x : {0.0, 1.0, 2.0}) CHECK(std::abs(dec.evaluate(x) - std::exp(-x)) <= 1e-10);
  const auto inc = chebyshev_coefficients(1.0, 1, 2.0, 20);
  CHECK(std::abs(inc.evaluate(2.0) - 7.389056098930650) <= 1e-8);

  // 33 Chebyshev points on [0, 2] and coefficient decay.
  for (const auto* coef : {&dec, &inc}) {
    for (int j = 0; j < 33; ++j) {
      const double x = 1.0 + std::cos(std::numbers::pi * (j + 0.5) / 33.0);
      CHECK(std::abs(coef->evaluate(x) - std::exp(coef->sign * x)) <= 1e-8);
    }
    CHECK(std::abs(coef->c.back()) <= std::abs(coef->c[1]));
  }
}

TEST_CASE("s = 0 leaves signals unchanged") {
  const SparseMatrix l = normalized_laplacian(synthetic::cycle_graph(7));
  const DenseMatrix f = oracle::random_dense(7, 3, 1);
  CHECK(apply_operator(l, chebyshev_coefficients(0.0, -1, 2.0, 30), f) == f);
  const auto b = materialize_basis(l, 0.0, 0.5, 30);
  CHECK(b.psi == SparseMatrix::identity(7));
  CHECK(b.psi_inv == SparseMatrix::identity(7));
}

TEST_CASE("P3 apply and materialize match the exact exponential") {
  const Graph g = synthetic::path_graph(3);
  const SparseMatrix l = normalized_laplacian(g);
  const DenseMatrix exact = oracle::expm(oracle::dense_laplacian(g), -1.0);
  const DenseMatrix got = apply_operator(l, chebyshev_coefficients(1.0, -1, 2.0, 30), DenseMatrix::identity(3));
  CHECK(oracle::frob(oracle::minus(got, exact)) <= 1e-8);

  const auto cheb = materialize_basis(l, 1.0, 0.0, 30);
  const auto ex = wavelet_basis_exact(eigendecompose(l), 1.0, 0.0);
  CHECK(oracle::frob(oracle::minus(cheb.psi_inv.to_dense(), ex.psi_inv.to_dense())) <= 1e-8);
  CHECK(oracle::frob(oracle::minus(cheb.psi.to_dense(), ex.psi.to_dense())) <= 1e-8);
  CHECK(cheb.method_tag() == "chebyshev(30)");
}

TEST_CASE("50-node apply matches the oracle") {
  const Graph g = synthetic::random_connected(50, 0.05, 3);
  const SparseMatrix l = normalized_laplacian(g);
  const DenseMatrix f = oracle::random_dense(50, 4, 2);
  const DenseMatrix ref = oracle::naive_matmul(oracle::expm(oracle::dense_laplacian(g), -1.0), f);
  CHECK(rel_frob(apply_operator(l, chebyshev_coefficients(1.0, -1, 2.0, 30), f), ref) <= 1e-6);
}

TEST_CASE("error improves with order and meets 1e-5 at m = 30") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SparseMatrix l = normalized_laplacian(synthetic::random_connected(20 + 30 * seed, 0.05, seed));
    const auto ex = wavelet_basis_exact(eigendecompose(l), 1.0, 0.0);
    const DenseMatrix ref_inv = ex.psi_inv.to_dense(), ref = ex.psi.to_dense();
    double prev = 1e300;
    for (std::size_t m : {10u, 20u, 30u}) {
      const auto b = materialize_basis(l, 1.0, 0.0, m);
      const double err = std::max(rel_frob(b.psi_inv.to_dense(), ref_inv), rel_frob(b.psi.to_dense(), ref));
      CHECK(err <= prev + 1e-12);
      prev = err;
      if (m == 30) {
        CHECK(err <= 1e-5);
        const std::size_t n = l.rows();
        const DenseMatrix prod = spgemm(b.psi, b.psi_inv).to_dense();
        CHECK(oracle::frob(oracle::minus(prod, DenseMatrix::identity(n))) / std::sqrt(double(n)) <= 1e-4);
      }
    }
  }
}

TEST_CASE("apply is linear") {
  const SparseMatrix l = normalized_laplacian(synthetic::grid_graph(5, 6));
  const auto coef = chebyshev_coefficients(0.8, -1, 2.0, 30);
  const DenseMatrix f = oracle::random_dense(30, 2, 1), g = oracle::random_dense(30, 2, 2);
  const double alpha = 1.7, beta = -0.4;
  DenseMatrix mix(30, 2);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = alpha * f.values()[i] + beta * g.values()[i];
  const DenseMatrix lhs = apply_operator(l, coef, mix);
  const DenseMatrix af = apply_operator(l, coef, f), ag = apply_operator(l, coef, g);
  DenseMatrix rhs(30, 2);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values()[i] = alpha * af.values()[i] + beta * ag.values()[i];
  CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("materialized basis does not depend on block size or thread count") {
  const SparseMatrix l = normalized_laplacian(synthetic::preferential_attachment(150, 2, 5));
  MaterializeOptions a, b;
  a.block_size = 64;
  b.block_size = 7;
  const auto x = materialize_basis(l, 1.0, 1e-4, 30, a);
  const auto y = materialize_basis(l, 1.0, 1e-4, 30, b);
  CHECK(x.psi == y.psi);
  CHECK(x.psi_inv == y.psi_inv);
  set_thread_count(3);
  const auto z = materialize_basis(l, 1.0, 1e-4, 30, a);
  set_thread_count(1);
  CHECK(z.psi_inv == x.psi_inv);
  CHECK(z.psi == x.psi);
}

TEST_CASE("power-iteration bound gives the same basis up to truncation error") {
  const SparseMatrix l = normalized_laplacian(synthetic::grid_graph(4, 5));
  MaterializeOptions opts;
  opts.lambda_max = estimate_lambda_max(l).value;
  const auto b = materialize_basis(l, 1.0, 0.0, 30, opts);
  const auto ex = wavelet_basis_exact(eigendecompose(l), 1.0, 0.0);
  CHECK(rel_frob(b.psi_inv.to_dense(), ex.psi_inv.to_dense()) <= 1e-8);
}
