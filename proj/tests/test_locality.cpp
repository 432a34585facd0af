#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gwnn/errors.hpp"
#include "gwnn/locality.hpp"
#include "gwnn/spectral.hpp"
#include "gwnn/synthetic.hpp"
#include "oracle.hpp"

using namespace gwnn;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  const auto m = oracle::random_dense(n, 1, seed);
  return {m.values().begin(), m.values().end()};
}

SpectralBasis exact(const Graph& g, double s, double t = 0.0) {
  return wavelet_basis_exact(eigendecompose(normalized_laplacian(g)), s, t);
}

}  // namespace

TEST_CASE("theta convolution basics") {
  const Graph g = synthetic::random_connected(12, 0.2, 1);
  const auto b = exact(g, 1.0);
  const auto x = random_vec(12, 2);
  const auto same = theta_convolution(b, std::vector<double>(12, 1.0), x);
  for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(same[i] - x[i]) <= 1e-9);
  for (double v : theta_convolution(b, std::vector<double>(12, 0.0), x)) CHECK(v == 0.0);
  CHECK_THROWS_AS(theta_convolution(b, std::vector<double>(11, 1.0), x), DimensionError);
}

TEST_CASE("theta form equals the rank-one sum") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = seed == 0 ? 3 : 8 * seed + 2;
    const Graph g = seed == 0 ? synthetic::path_graph(3) : synthetic::random_connected(n, 0.1, seed);
    const auto b = exact(g, 0.5 + 0.1 * static_cast<double>(seed), 1e-6);
    const auto theta = random_vec(n, seed + 30), x = random_vec(n, seed + 40);
    const DenseMatrix psi = b.psi.to_dense(), psi_inv = b.psi_inv.to_dense();
    // sum_k theta_k psi[:, k] (psi_inv[k, :] x)
    std::vector<double> expect(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double proj = 0.0;
      for (std::size_t j = 0; j < n; ++j) proj += psi_inv(k, j) * x[j];
      for (std::size_t i = 0; i < n; ++i) expect[i] += theta[k] * psi(i, k) * proj;
    }
    const auto got = theta_convolution(b, theta, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-9);
  }
}

TEST_CASE("H is the identity for an exact unthresholded basis") {
  const Graph g = synthetic::grid_graph(4, 6);
  const auto h = convolution_support(exact(g, 1.0)).to_dense();
  CHECK(oracle::max_abs_diff(h, DenseMatrix::identity(24)) <= 1e-9);
}

TEST_CASE("support of H grows with s at fixed t") {
  const std::vector<Graph> graphs{synthetic::grid_graph(12, 12), synthetic::random_connected(150, 0.005, 3),
                                  synthetic::preferential_attachment(150, 2, 4)};
  for (const Graph& g : graphs) {
    const auto es = eigendecompose(normalized_laplacian(g));
    std::size_t prev = 0;
    for (double s : {0.5, 1.0, 1.5}) {
      const auto b = wavelet_basis_exact(es, s, 1e-4);
      const auto st = support_stats(convolution_support(b), g, 0);
      CHECK(st.support_size >= prev);
      CHECK(st.max_hop != kUnreachable);
      prev = st.support_size;
    }
  }
}

TEST_CASE("locality profile") {
  const auto zero = locality_profile(exact(synthetic::grid_graph(3, 3), 0.0), synthetic::grid_graph(3, 3), 4);
  CHECK(zero.mass.size() == 1);
  CHECK(zero.mass[0] == 1.0);

  const Graph p3 = synthetic::path_graph(3);
  const auto prof = locality_profile(exact(p3, 1.0), p3, 1);
  CHECK(prof.mass.size() == 2);
  // Per node the centre dominates; summed over both neighbours it does not
  // (0.568 against 2 * 0.306).
  CHECK(prof.per_node[0] > prof.per_node[1]);
  CHECK(prof.raw[0] < prof.raw[1]);
  // e^{-L} on P3 from the series oracle.
  const DenseMatrix e = oracle::expm(oracle::dense_laplacian(p3), -1.0);
  CHECK(prof.raw[0] == doctest::Approx(std::abs(e(1, 1))).epsilon(1e-12));
  CHECK(prof.raw[1] == doctest::Approx(std::abs(e(0, 1)) + std::abs(e(2, 1))).epsilon(1e-12));
  CHECK_THROWS_AS(locality_profile(exact(p3, 1.0), p3, 3), DataError);

  std::ostringstream out;
  write_profile_tsv(prof, out);
  CHECK(out.str().rfind("hop\tmass\traw\tper_node\n0\t", 0) == 0);
}

TEST_CASE("mass beyond 3 s lambda_max hops stays under 5 percent") {
  const std::vector<Graph> graphs{synthetic::grid_graph(10, 10), synthetic::random_connected(120, 0.01, 5),
                                  synthetic::path_graph(60)};
  for (const Graph& g : graphs) {
    const auto es = eigendecompose(normalized_laplacian(g));
    for (double s : {0.25, 0.5, 1.0}) {
      const auto b = wavelet_basis_exact(es, s, 0.0);
      const auto hop = static_cast<std::size_t>(std::ceil(3.0 * s * es.values.back()));
      for (std::size_t node : {0ul, g.node_count() / 2}) {
        CHECK(mass_beyond(locality_profile(b, g, node), hop) <= 0.05);
      }
    }
  }
}

TEST_CASE("mass at two or more hops is non-decreasing in s") {
  const std::vector<Graph> graphs{synthetic::grid_graph(7, 7), synthetic::random_connected(50, 0.03, 8),
                                  synthetic::cycle_graph(30)};
  for (const Graph& g : graphs) {
    const auto es = eigendecompose(normalized_laplacian(g));
    for (std::size_t node : {0ul, 17ul}) {
      double prev = 0.0;
      for (double s : {0.25, 0.5, 1.0}) {
        const double m = mass_beyond(locality_profile(wavelet_basis_exact(es, s, 0.0), g, node), 2);
        CHECK(m >= prev - 1e-12);
        prev = m;
      }
    }
  }
}

TEST_CASE("support row dump") {
  const Graph g = synthetic::path_graph(4);
  const auto h = convolution_support(exact(g, 1.0, 1e-2));
  std::ostringstream out;
  write_support_row_tsv(h, g, 0, out);
  CHECK(out.str().rfind("node\thop\tvalue\n0\t0\t", 0) == 0);
}
