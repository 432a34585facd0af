#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gwnn/errors.hpp"
#include "gwnn/sparsity.hpp"
#include "gwnn/spectral.hpp"
#include "gwnn/synthetic.hpp"

using namespace gwnn;

namespace {

SpectralBasis identity_basis(std::size_t n) {
  SpectralBasis b;
  b.psi = SparseMatrix::identity(n);
  b.psi_inv = SparseMatrix::identity(n);
  return b;
}

}  // namespace

TEST_CASE("density counts stored entries") {
  const auto st = matrix_density(SparseMatrix::identity(4));
  CHECK(st.nnz == 4);
  CHECK(st.density == 0.25);
  DenseMatrix d(2, 2);
  d(0, 1) = 3.0;
  CHECK(matrix_density(d).nnz == 1);
  CHECK(matrix_density(d).density == 0.25);
}

TEST_CASE("report for P3") {
  const Graph g = synthetic::path_graph(3);
  const auto es = eigendecompose(normalized_laplacian(g));
  const auto b = wavelet_basis_exact(es, 1.0, 1e-4);
  const auto rep = sparsity_report(g, b, &es);
  auto row = [&](const std::string& name) {
    return *std::find_if(rep.rows.begin(), rep.rows.end(), [&](const auto& r) { return r.name == name; });
  };
  CHECK(row("laplacian_full").nnz == 7);
  CHECK(row("laplacian_offdiag").nnz == 4);
  CHECK(row("wavelet_psi_inv").nnz == b.psi_inv.nnz());
  CHECK(row("fourier_UT").rows == 3);
  std::ostringstream tsv, text;
  write_report_tsv(rep, tsv);
  write_report_text(rep, text);
  CHECK(tsv.str().find("laplacian_full\t3\t3\t7\t") != std::string::npos);
  CHECK(tsv.str().find("psi_inv=exp(-sL)") != std::string::npos);
  CHECK(text.str().find("laplacian_offdiag") != std::string::npos);

  const auto no_es = sparsity_report(g, b);
  CHECK(std::none_of(no_es.rows.begin(), no_es.rows.end(), [](const auto& r) { return r.name == "fourier_UT"; }));
}

TEST_CASE("projected signal statistics") {
  const Graph g = synthetic::grid_graph(9, 9);
  const auto es = eigendecompose(normalized_laplacian(g));
  const auto b = wavelet_basis_exact(es, 1.0, 1e-4);
  const auto x = SparseMatrix::from_triplets(81, 2, {{40, 0, 1.0}});
  const auto zero = projected_signal_stats(b, x, 1);
  CHECK(zero.nnz == 0);
  CHECK(zero.density == 0.0);
  const auto p = projected_signal_stats(b, x, 0);
  std::size_t expect = 0;
  for (std::size_t r = 0; r < 81; ++r) expect += b.psi_inv.at(r, 40) != 0.0 ? 1 : 0;
  CHECK(p.nnz == expect);
  CHECK(p.nnz < 81);
  const auto q = projected_signal_stats(es, x, 0);
  CHECK(q.projected.size() == 81);
  const auto strict = projected_signal_stats(b, x, 0, 1e-2);
  CHECK(strict.nnz <= p.nnz);
  CHECK_THROWS_AS(projected_signal_stats(b, x, 2), DataError);
}

TEST_CASE("top active bases") {
  const Graph g = synthetic::random_connected(15, 0.2, 2);
  const auto es = eigendecompose(normalized_laplacian(g));
  const auto b = wavelet_basis_exact(es, 1.0, 0.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 15; i += 3) t.push_back({i, 0, 1.0});
  const auto x = SparseMatrix::from_triplets(15, 1, t);
  const auto all = top_active_bases(b, x, 0, 15);
  CHECK(all.size() == 15);
  for (std::size_t i = 1; i < all.size(); ++i) {
    CHECK(all[i - 1].value >= all[i].value);
    if (all[i - 1].value == all[i].value) CHECK(all[i - 1].node < all[i].node);
  }
  std::vector<std::size_t> nodes;
  for (const auto& a : all) nodes.push_back(a.node);
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < 15; ++i) CHECK(nodes[i] == i);
  const auto top3 = top_active_bases(b, x, 0, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(top3[i].node == all[i].node);
  CHECK(top3[0].label == -1);
  CHECK_THROWS_AS(top_active_bases(b, x, 0, 16), UsageError);

  const auto one_hot = SparseMatrix::from_triplets(6, 1, {{4, 0, 1.0}});
  std::vector<int> labels{0, 0, 1, 1, 2, 2};
  const auto id = top_active_bases(identity_basis(6), one_hot, 0, 2, labels);
  CHECK(id[0].node == 4);
  CHECK(id[0].label == 2);
  CHECK(id[1].node == 0);  // ties at zero resolved by node index
}
