#pragma once

#include <cstddef>
#include <cstdint>

#include "gwnn/dataset.hpp"
#include "gwnn/graph.hpp"

namespace gwnn::synthetic {

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph grid_graph(std::size_t rows, std::size_t cols);

// Barabasi-Albert style: each new node attaches to `edges_per_node`
// existing nodes chosen proportionally to degree.
Graph preferential_attachment(std::size_t n, std::size_t edges_per_node, std::uint64_t seed);

// Random spanning tree plus each remaining pair independently with
// probability `extra_edge_prob`. Connected, no isolated nodes for n >= 2.
Graph random_connected(std::size_t n, double extra_edge_prob, std::uint64_t seed);

struct PlantedOptions {
  std::size_t classes = 2;
  std::size_t nodes_per_class = 25;
  std::size_t features = 16;
  double p_in = 0.3;     // intra-class edge probability
  double p_out = 0.02;   // inter-class edge probability
  double signal = 0.6;   // probability a node carries each of its class's indicator words
  double noise = 0.1;    // probability of each background word
  std::uint64_t seed = 0;
};

// Stochastic-block graph with class-correlated binary bag-of-words
// features. Every node is labelled; no split is assigned.
Dataset planted_partition(const PlantedOptions& options);

}  // namespace gwnn::synthetic
