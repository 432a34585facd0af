#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwnn/matrix.hpp"

namespace gwnn {

struct Edge {
  std::size_t u;
  std::size_t v;
  bool operator==(const Edge&) const = default;
};

// Immutable undirected, unweighted graph. Edges are stored once with u < v,
// sorted; the adjacency matrix holds both orientations.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const SparseMatrix& adjacency() const { return adjacency_; }

  std::size_t degree(std::size_t node) const { return adjacency_.row_cols(node).size(); }
  std::span<const std::size_t> neighbors(std::size_t node) const {
    return adjacency_.row_cols(node);
  }

 private:
  friend Graph load_graph(std::span<const Edge>, std::size_t, std::span<const std::size_t>);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  SparseMatrix adjacency_;
};

// Builds a graph from raw pairs. Self-loops are dropped and duplicates
// (in either orientation) merged. `line_numbers`, when given, runs parallel
// to `edges` and is quoted in out-of-range errors.
Graph load_graph(std::span<const Edge> edges, std::size_t n,
                 std::span<const std::size_t> line_numbers = {});

struct EdgeList {
  std::optional<std::size_t> declared_n;
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
};

// Tab-separated `src<TAB>dst` lines; `#` comments; optional leading `n=<count>`.
EdgeList parse_edge_list(std::istream& in, const std::string& source_name);
Graph read_edge_file(const std::filesystem::path& path);
void write_edge_file(const Graph& g, std::ostream& out);

// L = I - D^{-1/2} A D^{-1/2}. Isolated nodes raise DataError unless
// `allow_isolated`, in which case they get a unit diagonal and no neighbours.
SparseMatrix normalized_laplacian(const Graph& g, bool allow_isolated = false);

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Hop distance from `source` to every node; kUnreachable where disconnected.
std::vector<std::size_t> bfs_hops(const Graph& g, std::size_t source);

}  // namespace gwnn
