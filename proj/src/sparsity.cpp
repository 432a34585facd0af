#include "gwnn/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gwnn/errors.hpp"

namespace gwnn {

namespace {

double ratio(std::size_t nnz, std::size_t rows, std::size_t cols) {
  const double cells = static_cast<double>(rows) * static_cast<double>(cols);
  return cells == 0.0 ? 0.0 : static_cast<double>(nnz) / cells;
}

ProjectionStats finish(std::vector<double> p, double t_signal) {
  ProjectionStats st;
  for (double v : p) st.nnz += std::abs(v) > t_signal ? 1 : 0;
  st.density = p.empty() ? 0.0 : static_cast<double>(st.nnz) / static_cast<double>(p.size());
  st.projected = std::move(p);
  return st;
}

}  // namespace

DensityStats matrix_density(const SparseMatrix& m) {
  return {ratio(m.nnz(), m.rows(), m.cols()), m.nnz()};
}

DensityStats matrix_density(const DenseMatrix& m) {
  std::size_t nnz = 0;
  for (double v : m.values()) nnz += v != 0.0 ? 1 : 0;
  return {ratio(nnz, m.rows(), m.cols()), nnz};
}

std::vector<double> feature_column(const SparseMatrix& x, std::size_t feature) {
  if (feature >= x.cols()) {
    throw DataError("feature index " + std::to_string(feature) + " out of range (p=" +
                    std::to_string(x.cols()) + ")");
  }
  std::vector<double> col(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) col[r] = x.at(r, feature);
  return col;
}

ProjectionStats projected_signal_stats(const SpectralBasis& basis, const SparseMatrix& x,
                                       std::size_t feature, double t_signal) {
  return finish(spmv(basis.psi_inv, feature_column(x, feature)), t_signal);
}

ProjectionStats projected_signal_stats(const EigenSystem& es, const SparseMatrix& x,
                                       std::size_t feature, double t_signal) {
  return finish(fourier_transform(es, feature_column(x, feature)), t_signal);
}

std::vector<ActiveBasis> top_active_bases(const SpectralBasis& basis, const SparseMatrix& x,
                                          std::size_t feature, std::size_t k,
                                          std::span<const int> labels) {
  const auto p = spmv(basis.psi_inv, feature_column(x, feature));
  if (k > p.size()) throw UsageError("k exceeds the node count");
  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return p[a] != p[b] ? p[a] > p[b] : a < b; });
  std::vector<ActiveBasis> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t v = order[i];
    out.push_back({v, p[v], v < labels.size() ? labels[v] : -1});
  }
  return out;
}

SparsityReport sparsity_report(const Graph& g, const SpectralBasis& basis, const EigenSystem* es,
                               bool allow_isolated) {
  SparsityReport rep;
  rep.scale = basis.scale;
  rep.threshold = basis.threshold;
  rep.method = basis.method_tag();
  rep.convention = basis.convention;

  auto add = [&](std::string name, std::size_t rows, std::size_t cols, std::size_t nnz) {
    rep.rows.push_back({std::move(name), rows, cols, nnz, ratio(nnz, rows, cols)});
  };
  add("wavelet_psi_inv", basis.psi_inv.rows(), basis.psi_inv.cols(), basis.psi_inv.nnz());
  add("wavelet_psi", basis.psi.rows(), basis.psi.cols(), basis.psi.nnz());
  if (es != nullptr) {
    const auto st = matrix_density(es->vectors);  // U^T has the same zero count as U
    add("fourier_UT", es->size(), es->size(), st.nnz);
  }
  const SparseMatrix lap = normalized_laplacian(g, allow_isolated);
  add("laplacian_full", lap.rows(), lap.cols(), lap.nnz());
  add("laplacian_offdiag", lap.rows(), lap.cols(), g.adjacency().nnz());
  return rep;
}

void write_report_tsv(const SparsityReport& rep, std::ostream& out) {
  out << "# s=" << rep.scale << " t=" << rep.threshold << " method=" << rep.method
      << " kernel=" << to_string(rep.convention) << '\n';
  out << "matrix\trows\tcols\tnnz\tdensity\n";
  char buf[64];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof(buf), "%.6g", r.density);
    out << r.name << '\t' << r.rows << '\t' << r.cols << '\t' << r.nnz << '\t' << buf << '\n';
  }
}

void write_report_text(const SparsityReport& rep, std::ostream& out) {
  out << "Sparsity (s=" << rep.scale << ", t=" << rep.threshold << ", " << rep.method << ", "
      << to_string(rep.convention) << ")\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "  %-20s %14s %10s\n", "matrix", "non-zeros", "density");
  out << buf;
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof(buf), "  %-20s %14zu %9.3f%%\n", r.name.c_str(), r.nnz,
                  100.0 * r.density);
    out << buf;
  }
}

}  // namespace gwnn
