#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "error.hpp"

namespace sizeramsey {

using Vertex = std::uint32_t;
using VertexSet = boost::dynamic_bitset<std::uint64_t>;
using Edge = std::pair<Vertex, Vertex>;

/// Anything that answers adjacency queries: Graph, ImplicitGnp.
template <typename G>
concept AdjacencyOracle = requires(const G& g, Vertex u, Vertex v) {
  { g.order() } -> std::convertible_to<std::size_t>;
  { g.adjacent(u, v) } -> std::convertible_to<bool>;
};

/// Simple undirected graph on 0..n-1. Adjacency is stored twice: as bitset
/// rows (word-parallel intersections for candidate sets) and as sorted
/// neighbour lists (cheap iteration in sparse hosts). Both views are kept in
/// sync by add_edge/remove_edge.
class Graph {
 public:
  /// Bitset rows cost n^2/8 bytes; larger hosts go through ImplicitGnp.
  static constexpr std::size_t max_order = 50000;

  Graph() = default;
  explicit Graph(std::size_t n) : rows_(n, VertexSet(n)), lists_(n) {
    if (n > max_order)
      throw Error(ErrorKind::TooLarge, "graph order " + std::to_string(n) + " exceeds " +
                                           std::to_string(max_order));
  }

  std::size_t order() const { return rows_.size(); }
  std::size_t size() const { return edge_count_; }

  bool adjacent(Vertex u, Vertex v) const { return rows_[u].test(v); }
  const VertexSet& row(Vertex v) const { return rows_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const { return lists_[v]; }
  std::size_t degree(Vertex v) const { return lists_[v].size(); }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& l : lists_) d = std::max(d, l.size());
    return d;
  }

  /// Returns false when the edge already exists. Loops and out-of-range
  /// endpoints are rejected.
  bool add_edge(Vertex u, Vertex v) {
    check_pair(u, v);
    if (rows_[u].test(v)) return false;
    rows_[u].set(v);
    rows_[v].set(u);
    insert_sorted(lists_[u], v);
    insert_sorted(lists_[v], u);
    ++edge_count_;
    return true;
  }

  bool remove_edge(Vertex u, Vertex v) {
    check_pair(u, v);
    if (!rows_[u].test(v)) return false;
    rows_[u].reset(v);
    rows_[v].reset(u);
    erase_sorted(lists_[u], v);
    erase_sorted(lists_[v], u);
    --edge_count_;
    return true;
  }

  /// All edges (u < v) in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u)
      for (const Vertex v : lists_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Subgraph induced by `vs`; vertex vs[i] becomes i.
  Graph induced(std::span<const Vertex> vs) const {
    Graph h(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (adjacent(vs[i], vs[j])) h.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return h;
  }

  VertexSet empty_set() const { return VertexSet(order()); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.edge_count_ == b.edge_count_ && a.lists_ == b.lists_;
  }

 private:
  void check_pair(Vertex u, Vertex v) const {
    if (u >= order() || v >= order())
      throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    if (u == v) throw Error(ErrorKind::InvalidArgument, "self-loop");
  }
  static void insert_sorted(std::vector<Vertex>& l, Vertex v) {
    if (l.empty() || l.back() < v) {
      l.push_back(v);
      return;
    }
    l.insert(std::lower_bound(l.begin(), l.end(), v), v);
  }
  static void erase_sorted(std::vector<Vertex>& l, Vertex v) {
    l.erase(std::lower_bound(l.begin(), l.end(), v));
  }

  std::vector<VertexSet> rows_;
  std::vector<std::vector<Vertex>> lists_;
  std::size_t edge_count_ = 0;
};

inline Graph graph_from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

inline VertexSet make_set(std::size_t n, std::span<const Vertex> vs) {
  VertexSet s(n);
  for (const Vertex v : vs) s.set(v);
  return s;
}

inline std::vector<Vertex> to_vector(const VertexSet& s) {
  std::vector<Vertex> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != VertexSet::npos; i = s.find_next(i))
    out.push_back(static_cast<Vertex>(i));
  return out;
}

/// Connected components, each sorted, ordered by smallest vertex.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<std::vector<Vertex>> comps;
  std::vector<char> seen(g.order(), 0);
  for (Vertex s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (const Vertex w : g.neighbors(comp[head]))
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

inline bool is_bipartite(const Graph& g) {
  std::vector<int> side(g.order(), -1);
  for (Vertex s = 0; s < g.order(); ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    std::vector<Vertex> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (const Vertex w : g.neighbors(u)) {
        if (side[w] == -1) {
          side[w] = 1 - side[u];
          queue.push_back(w);
        } else if (side[w] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

inline bool has_triangle(const Graph& g) {
  for (Vertex u = 0; u < g.order(); ++u)
    for (const Vertex v : g.neighbors(u))
      if (u < v && (g.row(u) & g.row(v)).any()) return true;
  return false;
}

inline bool is_regular_of_degree(const Graph& g, std::size_t d) {
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.degree(v) != d) return false;
  return true;
}

/// K4 is the only connected graph with 4 vertices and 6 edges.
inline bool is_k4(const Graph& g) { return g.order() == 4 && g.size() == 6; }

}  // namespace sizeramsey
