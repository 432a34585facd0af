#include "gwnn/synthetic.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "gwnn/errors.hpp"

namespace gwnn::synthetic {

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return load_graph(e, n);
}

Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return load_graph(e, n);
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge> e;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) e.push_back({v, v + 1});
      if (r + 1 < rows) e.push_back({v, v + cols});
    }
  }
  return load_graph(e, rows * cols);
}

Graph preferential_attachment(std::size_t n, std::size_t edges_per_node, std::uint64_t seed) {
  if (edges_per_node < 1 || n <= edges_per_node) {
    throw UsageError("preferential_attachment needs 1 <= edges_per_node < n");
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> e;
  // Endpoint multiset: sampling uniformly from it is degree-proportional.
  std::vector<std::size_t> ends;
  const std::size_t core = edges_per_node + 1;
  for (std::size_t i = 0; i < core; ++i) {
    for (std::size_t j = i + 1; j < core; ++j) {
      e.push_back({i, j});
      ends.push_back(i);
      ends.push_back(j);
    }
  }
  std::vector<std::size_t> picked;
  for (std::size_t v = core; v < n; ++v) {
    picked.clear();
    while (picked.size() < edges_per_node) {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      const std::size_t u = ends[pick(rng)];
      if (std::find(picked.begin(), picked.end(), u) == picked.end()) picked.push_back(u);
    }
    for (std::size_t u : picked) {
      e.push_back({u, v});
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  return load_graph(e, n);
}

Graph random_connected(std::size_t n, double extra_edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> e;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    e.push_back({parent(rng), v});
  }
  std::bernoulli_distribution extra(extra_edge_prob);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (extra(rng)) e.push_back({i, j});
  return load_graph(e, n);
}

Dataset planted_partition(const PlantedOptions& o) {
  if (o.classes < 1 || o.nodes_per_class < 1) throw UsageError("planted_partition: empty classes");
  if (o.features < o.classes) throw UsageError("planted_partition: need at least one word per class");
  std::mt19937_64 rng(o.seed);
  const std::size_t n = o.classes * o.nodes_per_class;
  Dataset d;
  d.num_classes = o.classes;
  d.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) d.labels[v] = static_cast<int>(v / o.nodes_per_class);

  std::vector<Edge> edges;
  std::bernoulli_distribution in(o.p_in), out(o.p_out);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d.labels[i] == d.labels[j] ? in(rng) : out(rng)) edges.push_back({i, j});
  // Chain each class so no node is isolated.
  for (std::size_t v = 0; v + 1 < n; ++v)
    if (d.labels[v] == d.labels[v + 1]) edges.push_back({v, v + 1});
  d.graph = load_graph(edges, n);

  // Words [0, classes) are class indicators; the rest are background.
  std::vector<Triplet> trip;
  std::bernoulli_distribution sig(o.signal), bg(o.noise);
  for (std::size_t v = 0; v < n; ++v) {
    const auto y = static_cast<std::size_t>(d.labels[v]);
    bool any = false;
    for (std::size_t f = 0; f < o.features; ++f) {
      const bool on = f < o.classes ? (f == y && sig(rng)) : bg(rng);
      if (on) {
        trip.push_back({v, f, 1.0});
        any = true;
      }
    }
    if (!any) trip.push_back({v, y, 1.0});
  }
  d.features = SparseMatrix::from_triplets(n, o.features, std::move(trip));
  d.split_source = "none";
  return d;
}

}  // namespace gwnn::synthetic
