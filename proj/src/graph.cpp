#include "gwnn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>

#include "gwnn/errors.hpp"

namespace gwnn {

Graph load_graph(std::span<const Edge> edges, std::size_t n,
                 std::span<const std::size_t> line_numbers) {
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [u, v] = edges[k];
    if (u >= n || v >= n) {
      const std::string where = k < line_numbers.size()
                                    ? "line " + std::to_string(line_numbers[k])
                                    : "edge #" + std::to_string(k + 1);
      throw DataError(where + ": node index out of range (" + std::to_string(u) + ", " +
                      std::to_string(v) + ") with n=" + std::to_string(n));
    }
    if (u == v) continue;
    canon.push_back({std::min(u, v), std::max(u, v)});
  }
  std::sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  std::vector<Triplet> trip;
  trip.reserve(2 * canon.size());
  for (const auto& e : canon) {
    trip.push_back({e.u, e.v, 1.0});
    trip.push_back({e.v, e.u, 1.0});
  }
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(canon);
  g.adjacency_ = SparseMatrix::from_triplets(n, n, std::move(trip));
  return g;
}

namespace {

bool parse_index(std::string_view text, std::size_t& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !text.empty();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, const std::string& source_name) {
  EdgeList out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!seen_data && s.starts_with("n=")) {
      std::size_t n = 0;
      if (!parse_index(s.substr(2), n)) {
        throw DataError(source_name + ":" + std::to_string(lineno) + ": bad node count header");
      }
      out.declared_n = n;
      seen_data = true;
      continue;
    }
    seen_data = true;
    const auto tab = s.find('\t');
    Edge e{};
    if (tab == std::string_view::npos || !parse_index(trim(s.substr(0, tab)), e.u) ||
        !parse_index(trim(s.substr(tab + 1)), e.v)) {
      throw DataError(source_name + ":" + std::to_string(lineno) +
                      ": expected `src<TAB>dst` with non-negative integers");
    }
    out.edges.push_back(e);
    out.lines.push_back(lineno);
  }
  return out;
}

Graph read_edge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge file " + path.string());
  const EdgeList list = parse_edge_list(in, path.string());
  std::size_t n = 0;
  if (list.declared_n) {
    n = *list.declared_n;
  } else {
    for (const auto& e : list.edges) n = std::max({n, e.u + 1, e.v + 1});
  }
  try {
    return load_graph(list.edges, n, list.lines);
  } catch (const DataError& err) {
    throw DataError(path.string() + ": " + err.what());
  }
}

void write_edge_file(const Graph& g, std::ostream& out) {
  out << "n=" << g.node_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << '\t' << e.v << '\n';
}

SparseMatrix normalized_laplacian(const Graph& g, bool allow_isolated) {
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = g.degree(i);
    if (d == 0 && !allow_isolated) {
      throw DataError("node " + std::to_string(i) +
                      " is isolated (degree 0); the normalized Laplacian is undefined there "
                      "(use --allow-isolated to treat it as spectrally inert)");
    }
  }
  const auto& adj = g.adjacency();
  std::vector<std::size_t> ptr(n + 1, 0), idx;
  std::vector<double> vals;
  idx.reserve(adj.nnz() + n);
  vals.reserve(adj.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = adj.row_cols(i);
    const double di = static_cast<double>(nbrs.size());
    bool diag_done = false;
    for (std::size_t j : nbrs) {
      if (!diag_done && j > i) {
        idx.push_back(i);
        vals.push_back(1.0);
        diag_done = true;
      }
      // The product d_i * d_j is commutative, so L[i,j] and L[j,i] are bit-identical.
      const double dj = static_cast<double>(g.degree(j));
      idx.push_back(j);
      vals.push_back(-1.0 / std::sqrt(di * dj));
    }
    if (!diag_done) {
      idx.push_back(i);
      vals.push_back(1.0);
    }
    ptr[i + 1] = idx.size();
  }
  return SparseMatrix(n, n, std::move(ptr), std::move(idx), std::move(vals));
}

std::vector<std::size_t> bfs_hops(const Graph& g, std::size_t source) {
  if (source >= g.node_count()) {
    throw DataError("node " + std::to_string(source) + " out of range");
  }
  std::vector<std::size_t> hops(g.node_count(), kUnreachable);
  std::queue<std::size_t> frontier;
  hops[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g.neighbors(u)) {
      if (hops[v] == kUnreachable) {
        hops[v] = hops[u] + 1;
        frontier.push(v);
      }
    }
  }
  return hops;
}

}  // namespace gwnn
