#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/graph.hpp"
#include "gwnn/matrix.hpp"

namespace gwnn {

// psi diag(theta) psi_inv x
std::vector<double> theta_convolution(const SpectralBasis& basis, std::span<const double> theta,
                                      std::span<const double> x);

// H = psi * psi_inv, the support of the convolution with an identity kernel.
// For an untruncated, unthresholded pair this is the identity; every
// off-diagonal entry comes from thresholding or truncation.
SparseMatrix convolution_support(const SpectralBasis& basis);

// Summary of one row of H measured in hops from the row's node.
struct SupportStats {
  std::size_t support_size = 0;  // non-zeros in the row
  std::size_t max_hop = 0;       // furthest reached hop (kUnreachable if disconnected)
  double mean_hop = 0.0;         // |value|-weighted mean hop over reachable entries
};

SupportStats support_stats(const SparseMatrix& h, const Graph& g, std::size_t node);

// Sum of |psi_inv[:, node]| binned by BFS hop from `node`.
struct HopProfile {
  std::vector<double> mass;        // normalised to sum to 1 over reachable hops
  std::vector<double> raw;         // unnormalised
  std::vector<double> per_node;    // raw[h] / (nodes at hop h)
  double unreachable_mass = 0.0;   // raw mass on nodes in other components
};

HopProfile locality_profile(const SpectralBasis& basis, const Graph& g, std::size_t node);

// Fraction of normalised mass at hop >= `from_hop`.
double mass_beyond(const HopProfile& profile, std::size_t from_hop);

void write_profile_tsv(const HopProfile& profile, std::ostream& out);
// Non-zeros of H[node, :] as `node<TAB>hop<TAB>value`.
void write_support_row_tsv(const SparseMatrix& h, const Graph& g, std::size_t node,
                           std::ostream& out);

}  // namespace gwnn
