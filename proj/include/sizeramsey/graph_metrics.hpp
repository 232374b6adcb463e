#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rational.hpp"

namespace sizeramsey {

struct VertexColoring {
  std::vector<std::uint32_t> colors;
  std::size_t num_colors = 0;
};

/// Greedy colouring of H^2 in vertex order: each vertex takes the smallest
/// colour unused within distance two. H^2 has maximum degree <= Delta^2, so
/// at most Delta^2 + 1 colours are ever needed.
inline VertexColoring square_coloring(const Graph& h) {
  VertexColoring out;
  out.colors.assign(h.order(), 0);
  std::vector<std::size_t> stamp;
  for (Vertex v = 0; v < h.order(); ++v) {
    stamp.assign(out.num_colors + 1, 0);
    const auto block = [&](Vertex w) {
      if (w < v) stamp[out.colors[w]] = 1;
    };
    for (const Vertex u : h.neighbors(v)) {
      block(u);
      for (const Vertex w : h.neighbors(u))
        if (w != v) block(w);
    }
    std::uint32_t c = 0;
    while (stamp[c]) ++c;
    out.colors[v] = c;
    out.num_colors = std::max<std::size_t>(out.num_colors, c + 1);
  }
  return out;
}

/// True iff any two distinct vertices at distance <= 2 get different colours
/// and every colour lies in [0, num_colors).
inline bool is_distance2_coloring(const Graph& h, const VertexColoring& c) {
  if (c.colors.size() != h.order()) return false;
  for (Vertex v = 0; v < h.order(); ++v) {
    if (c.colors[v] >= c.num_colors) return false;
    for (const Vertex u : h.neighbors(v)) {
      if (c.colors[u] == c.colors[v]) return false;
      for (const Vertex w : h.neighbors(u))
        if (w != v && c.colors[w] == c.colors[v]) return false;
    }
  }
  return true;
}

/// m2(H) = max (e(F)-1)/(v(F)-2) over subgraphs F with v(F) >= 3.
///
/// For a fixed vertex set the induced subgraph is densest, so only induced
/// subgraphs are scored, and only on connected vertex sets: if some
/// connected set of >= 3 vertices exists then r >= 1 (a path on three
/// vertices), every component C of F satisfies e(C) <= r(v(C)-2) + 1
/// (isolated vertices contribute nothing), and summing over k non-trivial
/// components and s isolated vertices gives e(F) - 1 <= r(v(F) - 2) because
/// k - 1 <= r(2k - 2 + s). Connected sets are enumerated by extension from
/// their smallest vertex; a branch is cut once no superset of its size can
/// beat the best ratio under the degree bound e <= min(C(k,2), Delta*k/2).
/// Orders above 64 are rejected: the enumeration is exponential anyway.
inline Rational m2_density(const Graph& h) {
  const std::size_t n = h.order();
  if (n < 3) throw Error(ErrorKind::TooSmall, "m2 needs at least 3 vertices");
  if (n > 64) throw Error(ErrorKind::TooLarge, "m2 enumeration supports at most 64 vertices");

  std::vector<std::uint64_t> nb(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (const Vertex w : h.neighbors(v)) nb[v] |= std::uint64_t{1} << w;

  // Best ratio attainable by any vertex set of size >= k.
  const std::size_t delta = h.max_degree();
  std::vector<Rational> ceiling(n + 2, Rational(-1));
  for (std::size_t k = n; k >= 3; --k) {
    const std::int64_t e_max = static_cast<std::int64_t>(std::min(k * (k - 1) / 2, delta * k / 2));
    const Rational here(e_max - 1, static_cast<std::int64_t>(k - 2));
    ceiling[k] = std::max(here, ceiling[k + 1]);
  }
  for (std::size_t k = 0; k < 3; ++k) ceiling[k] = ceiling[3];

  bool found = false;
  Rational best(-1);

  struct Frame {
    std::uint64_t set, ext, excluded;
    std::size_t size;
    std::int64_t edges;
  };
  for (Vertex root = 0; root < n; ++root) {
    const std::uint64_t above = root + 1 >= 64 ? 0 : ~((std::uint64_t{2} << root) - 1);
    std::vector<Frame> stack{{std::uint64_t{1} << root, nb[root] & above, 0, 1, 0}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.size >= 3) {
        const Rational r(f.edges - 1, static_cast<std::int64_t>(f.size - 2));
        if (!found || r > best) {
          best = r;
          found = true;
        }
      }
      if (found && ceiling[f.size + 1] <= best) continue;
      std::uint64_t ext = f.ext, excluded = f.excluded;
      while (ext) {
        const int w = std::countr_zero(ext);
        const std::uint64_t wbit = std::uint64_t{1} << w;
        ext &= ~wbit;
        const std::uint64_t set = f.set | wbit;
        const std::uint64_t next_ext = (ext | (nb[w] & above)) & ~set & ~excluded;
        stack.push_back({set, next_ext, excluded, f.size + 1,
                         f.edges + std::popcount(nb[w] & f.set)});
        excluded |= wbit;
      }
    }
  }
  if (found) return best;

  // Only components of order <= 2: F is a union of edges and isolated vertices.
  if (h.size() >= 2) return Rational(1, 2);
  if (h.size() == 1) return Rational(0);
  return Rational(-1, static_cast<std::int64_t>(n - 2));
}

/// |U_{S in P} N^(S)| where N^(S) is the common neighbourhood of S outside S.
/// Sets must be pairwise disjoint and share one size d >= 1.
inline std::size_t common_neighborhood_union(const Graph& g, std::span<const std::vector<Vertex>> family) {
  VertexSet seen = g.empty_set();
  std::size_t d = family.empty() ? 0 : family.front().size();
  for (const auto& s : family) {
    if (s.size() != d || d == 0) throw Error(ErrorKind::InvalidArgument, "family sets must share one size d >= 1");
    for (const Vertex v : s) {
      if (v >= g.order()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
      if (seen.test(v)) throw Error(ErrorKind::OverlappingFamily, "family sets intersect");
      seen.set(v);
    }
  }
  VertexSet uni = g.empty_set();
  for (const auto& s : family) {
    VertexSet common = g.row(s.front());
    for (std::size_t i = 1; i < s.size(); ++i) common &= g.row(s[i]);
    for (const Vertex v : s) common.reset(v);
    uni |= common;
  }
  return uni.count();
}

/// Same quantity against any adjacency oracle (used for hosts too large to
/// materialise). Scans every vertex once per set.
template <AdjacencyOracle G>
std::size_t common_neighborhood_union_scan(const G& g, std::span<const std::vector<Vertex>> family) {
  std::vector<char> in_family(g.order(), 0);
  for (const auto& s : family)
    for (const Vertex v : s) {
      if (in_family[v]) throw Error(ErrorKind::OverlappingFamily, "family sets intersect");
      in_family[v] = 1;
    }
  std::vector<char> hit(g.order(), 0);
  for (const auto& s : family)
    for (Vertex x = 0; x < g.order(); ++x) {
      if (hit[x] || std::find(s.begin(), s.end(), x) != s.end()) continue;
      bool all = true;
      for (const Vertex v : s)
        if (!g.adjacent(v, x)) {
          all = false;
          break;
        }
      if (all) hit[x] = 1;
    }
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

}  // namespace sizeramsey
