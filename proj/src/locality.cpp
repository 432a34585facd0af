#include "gwnn/locality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gwnn/errors.hpp"

namespace gwnn {

std::vector<double> theta_convolution(const SpectralBasis& basis, std::span<const double> theta,
                                      std::span<const double> x) {
  const std::size_t n = basis.size();
  if (theta.size() != n || x.size() != n) {
    throw DimensionError("theta_convolution: expected vectors of length " + std::to_string(n));
  }
  auto spec = spmv(basis.psi_inv, x);
  for (std::size_t i = 0; i < n; ++i) spec[i] *= theta[i];
  return spmv(basis.psi, spec);
}

SparseMatrix convolution_support(const SpectralBasis& basis) {
  return spgemm(basis.psi, basis.psi_inv);
}

SupportStats support_stats(const SparseMatrix& h, const Graph& g, std::size_t node) {
  const auto hops = bfs_hops(g, node);
  SupportStats st;
  const auto cols = h.row_cols(node);
  const auto vals = h.row_values(node);
  st.support_size = cols.size();
  double weight = 0.0, acc = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t hop = hops[cols[k]];
    if (hop == kUnreachable) {
      st.max_hop = kUnreachable;
      continue;
    }
    if (st.max_hop != kUnreachable) st.max_hop = std::max(st.max_hop, hop);
    weight += std::abs(vals[k]);
    acc += std::abs(vals[k]) * static_cast<double>(hop);
  }
  st.mean_hop = weight > 0.0 ? acc / weight : 0.0;
  return st;
}

HopProfile locality_profile(const SpectralBasis& basis, const Graph& g, std::size_t node) {
  const std::size_t n = basis.size();
  if (node >= n) throw DataError("node " + std::to_string(node) + " out of range");
  if (g.node_count() != n) throw DimensionError("locality_profile: graph and basis sizes differ");
  const auto hops = bfs_hops(g, node);
  HopProfile prof;
  for (std::size_t r = 0; r < n; ++r) {
    const double v = std::abs(basis.psi_inv.at(r, node));
    if (v == 0.0) continue;
    if (hops[r] == kUnreachable) {
      prof.unreachable_mass += v;
      continue;
    }
    if (prof.raw.size() <= hops[r]) prof.raw.resize(hops[r] + 1, 0.0);
    prof.raw[hops[r]] += v;
  }
  prof.per_node.assign(prof.raw.size(), 0.0);
  std::vector<std::size_t> count(prof.raw.size(), 0);
  for (std::size_t h : hops)
    if (h < count.size()) ++count[h];
  for (std::size_t h = 0; h < count.size(); ++h) prof.per_node[h] = prof.raw[h] / static_cast<double>(count[h]);
  double total = 0.0;
  for (double v : prof.raw) total += v;
  prof.mass = prof.raw;
  if (total > 0.0)
    for (double& v : prof.mass) v /= total;
  return prof;
}

double mass_beyond(const HopProfile& profile, std::size_t from_hop) {
  double acc = 0.0;
  for (std::size_t h = from_hop; h < profile.mass.size(); ++h) acc += profile.mass[h];
  return acc;
}

void write_profile_tsv(const HopProfile& profile, std::ostream& out) {
  out << "hop\tmass\traw\tper_node\n";
  for (std::size_t h = 0; h < profile.mass.size(); ++h)
    out << h << '\t' << profile.mass[h] << '\t' << profile.raw[h] << '\t' << profile.per_node[h] << '\n';
}

void write_support_row_tsv(const SparseMatrix& h, const Graph& g, std::size_t node,
                           std::ostream& out) {
  const auto hops = bfs_hops(g, node);
  out << "node\thop\tvalue\n";
  const auto cols = h.row_cols(node);
  const auto vals = h.row_values(node);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out << cols[k] << '\t';
    if (hops[cols[k]] == kUnreachable) {
      out << "inf";
    } else {
      out << hops[cols[k]];
    }
    out << '\t' << vals[k] << '\n';
  }
}

}  // namespace gwnn
