#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "seed.hpp"

namespace sizeramsey {

enum class Color : std::uint8_t { Red = 0, Blue = 1 };

inline const char* to_string(Color c) { return c == Color::Red ? "red" : "blue"; }

/// One colour per edge of G, indexed like G.edges() (lexicographic, u < v).
struct EdgeColoring {
  std::vector<Color> colors;
  friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;
};

/// Position of an edge in G.edges().
class EdgeIndex {
 public:
  explicit EdgeIndex(const Graph& g) : g_(&g), start_(g.order() + 1, 0) {
    for (Vertex u = 0; u < g.order(); ++u) {
      const auto nb = g.neighbors(u);
      const auto above = static_cast<std::size_t>(nb.end() - std::upper_bound(nb.begin(), nb.end(), u));
      start_[u + 1] = start_[u] + above;
    }
  }
  std::size_t operator()(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    const auto nb = g_->neighbors(u);
    const auto first = std::upper_bound(nb.begin(), nb.end(), u);
    const auto it = std::lower_bound(first, nb.end(), v);
    if (it == nb.end() || *it != v) throw Error(ErrorKind::InvalidArgument, "not an edge");
    return start_[u] + static_cast<std::size_t>(it - first);
  }

 private:
  const Graph* g_;
  std::vector<std::size_t> start_;
};

inline void check_coloring(const Graph& g, const EdgeColoring& c) {
  if (c.colors.size() != g.size()) throw Error(ErrorKind::InvalidArgument, "colouring does not cover E(G)");
}

/// Spanning subgraph of the edges with colour `color`.
inline Graph color_class(const Graph& g, const EdgeColoring& coloring, Color color) {
  check_coloring(g, coloring);
  Graph out(g.order());
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (coloring.colors[i] == color) out.add_edge(edges[i].first, edges[i].second);
  return out;
}

inline EdgeColoring random_coloring(const Graph& g, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {tag::coloring}));
  EdgeColoring c;
  c.colors.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) c.colors.push_back(rng.next() >> 63 ? Color::Blue : Color::Red);
  return c;
}

/// Monomorphism search of H into a host by backtracking. H is processed in
/// BFS order per component; candidates are common neighbours of the images
/// of earlier neighbours, filtered by degree. `budget` counts placement
/// attempts; 0 means unlimited. `allowed` (optional) restricts host vertices.
inline std::optional<std::vector<Vertex>> find_subgraph(const Graph& host, const Graph& h, std::size_t budget = 0,
                                                        const VertexSet* allowed = nullptr) {
  const std::size_t k = h.order();
  if (k > host.order()) return std::nullopt;
  std::vector<Vertex> order;
  std::vector<char> seen(k, 0);
  for (Vertex root = 0; root < k; ++root) {
    if (seen[root]) continue;
    // Start each component at a vertex of maximum degree.
    Vertex best = root;
    std::vector<Vertex> comp{root};
    seen[root] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (const Vertex w : h.neighbors(comp[head]))
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    for (const Vertex v : comp)
      if (h.degree(v) > h.degree(best)) best = v;
    std::vector<char> in_order(k, 0);
    const std::size_t start = order.size();
    order.push_back(best);
    in_order[best] = 1;
    for (std::size_t head = start; head < order.size(); ++head)
      for (const Vertex w : h.neighbors(order[head]))
        if (!in_order[w]) {
          in_order[w] = 1;
          order.push_back(w);
        }
  }
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[order[i]] = i;

  VertexSet base(host.order());
  if (allowed) {
    base = *allowed;
  } else {
    base.set();
  }
  std::vector<std::int64_t> image(k, -1);
  VertexSet used(host.order());
  std::size_t nodes = 0;
  bool over = false;

  const auto place = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    const Vertex v = order[i];
    VertexSet cand = base - used;
    for (const Vertex w : h.neighbors(v))
      if (pos[w] < i) cand &= host.row(static_cast<Vertex>(image[w]));
    for (auto x = cand.find_first(); x != VertexSet::npos; x = cand.find_next(x)) {
      if (host.degree(static_cast<Vertex>(x)) < h.degree(v)) continue;
      if (budget != 0 && ++nodes > budget) {
        over = true;
        return false;
      }
      image[v] = static_cast<std::int64_t>(x);
      used.set(x);
      if (self(self, i + 1)) return true;
      used.reset(x);
      image[v] = -1;
      if (over) return false;
    }
    return false;
  };
  const bool found = place(place, 0);
  if (over) throw Error(ErrorKind::BudgetExceeded, "subgraph search node budget exhausted");
  if (!found) return std::nullopt;
  std::vector<Vertex> out(k);
  for (std::size_t v = 0; v < k; ++v) out[v] = static_cast<Vertex>(image[v]);
  return out;
}

inline constexpr std::size_t exact_search_order = 16;
inline constexpr std::size_t default_search_budget = 10000000;

/// A copy of H inside one colour class, as the image of each H vertex.
/// Hosts with at most 16 vertices are searched without a budget.
inline std::optional<std::vector<Vertex>> mono_subgraph_search(const Graph& g, const EdgeColoring& coloring,
                                                               const Graph& h, Color color,
                                                               std::size_t budget = default_search_budget) {
  const Graph cls = color_class(g, coloring, color);
  return find_subgraph(cls, h, g.order() <= exact_search_order ? 0 : budget);
}

struct ArrowingResult {
  bool arrows = false;
  std::optional<EdgeColoring> certificate;  // set iff arrows == false
  std::uint64_t colorings_checked = 0;
};

inline constexpr std::size_t max_exhaustive_edges = 26;

namespace detail {

/// Monomorphism test on <= 64 host vertices with 64-bit rows. `order`
/// lists H vertices so that each has its earlier neighbours in `back`.
struct SmallPattern {
  std::vector<int> order;
  std::vector<std::vector<int>> back;  // indices into order
  std::vector<int> degree;
};

inline SmallPattern small_pattern(const Graph& h) {
  SmallPattern sp;
  const std::size_t k = h.order();
  std::vector<int> pos(k, -1);
  for (Vertex root = 0; root < k; ++root) {
    if (pos[root] >= 0) continue;
    pos[root] = static_cast<int>(sp.order.size());
    sp.order.push_back(static_cast<int>(root));
    for (std::size_t head = static_cast<std::size_t>(pos[root]); head < sp.order.size(); ++head)
      for (const Vertex w : h.neighbors(static_cast<Vertex>(sp.order[head])))
        if (pos[w] < 0) {
          pos[w] = static_cast<int>(sp.order.size());
          sp.order.push_back(static_cast<int>(w));
        }
  }
  for (const int v : sp.order) {
    std::vector<int> b;
    for (const Vertex w : h.neighbors(static_cast<Vertex>(v)))
      if (pos[w] < pos[v]) b.push_back(pos[w]);
    sp.back.push_back(std::move(b));
    sp.degree.push_back(static_cast<int>(h.degree(static_cast<Vertex>(v))));
  }
  return sp;
}

/// Finds a copy; `img` receives host vertices by order position.
inline bool small_find(const SmallPattern& sp, const std::vector<std::uint64_t>& rows, std::uint64_t all,
                       std::vector<int>& img) {
  const std::size_t k = sp.order.size();
  img.assign(k, -1);
  const auto rec = [&](auto&& self, std::size_t i, std::uint64_t used) -> bool {
    if (i == k) return true;
    std::uint64_t cand = all & ~used;
    for (const int b : sp.back[i]) cand &= rows[static_cast<std::size_t>(img[static_cast<std::size_t>(b)])];
    for (; cand; cand &= cand - 1) {
      const int x = std::countr_zero(cand);
      if (std::popcount(rows[static_cast<std::size_t>(x)]) < sp.degree[i]) continue;
      img[i] = x;
      if (self(self, i + 1, used | std::uint64_t{1} << x)) return true;
    }
    return false;
  };
  return rec(rec, 0, 0);
}

/// Number of monomorphisms of H into the host (labelled copies).
inline std::uint64_t small_count(const SmallPattern& sp, const std::vector<std::uint64_t>& rows, std::uint64_t all) {
  const std::size_t k = sp.order.size();
  std::vector<int> img(k, -1);
  const auto rec = [&](auto&& self, std::size_t i, std::uint64_t used) -> std::uint64_t {
    if (i == k) return 1;
    std::uint64_t cand = all & ~used, total = 0;
    for (const int b : sp.back[i]) cand &= rows[static_cast<std::size_t>(img[static_cast<std::size_t>(b)])];
    for (; cand; cand &= cand - 1) {
      const int x = std::countr_zero(cand);
      img[i] = x;
      total += self(self, i + 1, used | std::uint64_t{1} << x);
    }
    return total;
  };
  return rec(rec, 0, 0);
}

/// Host restricted to non-isolated vertices and H without isolated
/// vertices. A copy of H exists iff a copy of the reduced H exists in the
/// reduced host and v(H) <= v(G).
struct ReducedInstance {
  std::vector<Vertex> host_vertices;
  std::vector<std::pair<int, int>> edges;  // reduced endpoints, in G.edges() order
  Graph pattern;
  bool pattern_trivial = false;  // reduced H has no vertices
};

inline ReducedInstance reduce(const Graph& g, const Graph& h) {
  ReducedInstance r;
  std::vector<int> idx(g.order(), -1);
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.degree(v) > 0) {
      idx[v] = static_cast<int>(r.host_vertices.size());
      r.host_vertices.push_back(v);
    }
  for (const auto& [u, v] : g.edges()) r.edges.emplace_back(idx[u], idx[v]);
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < h.order(); ++v)
    if (h.degree(v) > 0) keep.push_back(v);
  r.pattern = h.induced(keep);
  r.pattern_trivial = keep.empty();
  return r;
}

}  // namespace detail

/// Decides G -> H by enumerating 2-colourings in Gray-code order with the
/// first edge fixed red (swapping colours maps copies to copies). The last
/// copy found in each colour is kept and reused until a flip removes one
/// of its edges from that colour.
inline ArrowingResult is_ramsey_exhaustive(const Graph& g, const Graph& h) {
  const std::size_t e = g.size();
  if (e > max_exhaustive_edges)
    throw Error(ErrorKind::TooManyEdges, std::to_string(e) + " edges exceed the exhaustive limit of " +
                                             std::to_string(max_exhaustive_edges));
  ArrowingResult result;
  const auto all_red = [&] { return EdgeColoring{std::vector<Color>(e, Color::Red)}; };
  if (h.order() > g.order()) {
    result.certificate = all_red();
    result.colorings_checked = 1;
    return result;
  }
  const detail::ReducedInstance r = detail::reduce(g, h);
  if (r.pattern_trivial) {
    result.arrows = true;
    result.colorings_checked = 1;
    return result;
  }
  if (e == 0) {
    result.certificate = EdgeColoring{};
    result.colorings_checked = 1;
    return result;
  }
  const detail::SmallPattern sp = detail::small_pattern(r.pattern);
  const std::size_t m = r.host_vertices.size();
  const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::vector<std::uint64_t> red(m, 0), blue(m, 0);
  std::uint32_t coloring = 0;  // bit i set = edge i blue
  for (const auto& [a, b] : r.edges) {
    red[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    red[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  }

  // Edge mask of a found copy, so cache validity is one AND.
  std::vector<std::vector<int>> edge_id(m, std::vector<int>(m, -1));
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    edge_id[static_cast<std::size_t>(r.edges[i].first)][static_cast<std::size_t>(r.edges[i].second)] = static_cast<int>(i);
    edge_id[static_cast<std::size_t>(r.edges[i].second)][static_cast<std::size_t>(r.edges[i].first)] = static_cast<int>(i);
  }
  const auto copy_edges = [&](const std::vector<int>& img) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < sp.order.size(); ++i)
      for (const int b : sp.back[i])
        mask |= std::uint32_t{1} << edge_id[static_cast<std::size_t>(img[i])][static_cast<std::size_t>(img[static_cast<std::size_t>(b)])];
    return mask;
  };

  std::optional<std::uint32_t> red_copy, blue_copy;
  std::vector<int> img;
  const std::uint64_t total = std::uint64_t{1} << (e - 1);
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i > 0) {
      const int bit = std::countr_zero(i) + 1;  // edge 0 stays red
      const auto [a, b] = r.edges[static_cast<std::size_t>(bit)];
      const std::uint64_t ba = std::uint64_t{1} << a, bb = std::uint64_t{1} << b;
      const std::uint32_t ebit = std::uint32_t{1} << bit;
      coloring ^= ebit;
      const bool now_blue = (coloring & ebit) != 0;
      auto& from = now_blue ? red : blue;
      auto& to = now_blue ? blue : red;
      from[static_cast<std::size_t>(a)] &= ~bb;
      from[static_cast<std::size_t>(b)] &= ~ba;
      to[static_cast<std::size_t>(a)] |= bb;
      to[static_cast<std::size_t>(b)] |= ba;
      auto& lost = now_blue ? red_copy : blue_copy;
      if (lost && (*lost & ebit)) lost.reset();
    }
    ++result.colorings_checked;
    if (red_copy || blue_copy) continue;
    if (detail::small_find(sp, red, all, img)) {
      red_copy = copy_edges(img);
      continue;
    }
    if (detail::small_find(sp, blue, all, img)) {
      blue_copy = copy_edges(img);
      continue;
    }
    EdgeColoring cert;
    for (std::size_t k = 0; k < e; ++k) cert.colors.push_back(coloring >> k & 1U ? Color::Blue : Color::Red);
    if (mono_subgraph_search(g, cert, h, Color::Red, 0) || mono_subgraph_search(g, cert, h, Color::Blue, 0))
      throw Error(ErrorKind::Internal, "arrowing certificate failed re-verification");
    result.certificate = std::move(cert);
    return result;
  }
  result.arrows = true;
  return result;
}

/// Local search for a colouring without a monochromatic H: flip one edge at
/// a time, keeping flips that do not increase the number of monochromatic
/// copies, with a random restart when stuck. `budget` counts evaluated
/// flips. Anything returned has been re-verified in both colours.
inline std::optional<EdgeColoring> adversarial_coloring_search(const Graph& g, const Graph& h, std::size_t budget,
                                                               std::uint64_t seed) {
  if (budget == 0) return std::nullopt;
  const std::size_t e = g.size();
  const auto verified = [&](const EdgeColoring& c) -> std::optional<EdgeColoring> {
    if (mono_subgraph_search(g, c, h, Color::Red, 0) || mono_subgraph_search(g, c, h, Color::Blue, 0))
      throw Error(ErrorKind::Internal, "adversarial colouring failed re-verification");
    return c;
  };
  if (h.order() > g.order()) return verified(EdgeColoring{std::vector<Color>(e, Color::Red)});
  const detail::ReducedInstance r = detail::reduce(g, h);
  if (r.pattern_trivial || e == 0) return std::nullopt;
  if (r.host_vertices.size() > 64) throw Error(ErrorKind::TooLarge, "adversarial search supports at most 64 non-isolated vertices");
  const detail::SmallPattern sp = detail::small_pattern(r.pattern);
  const std::size_t m = r.host_vertices.size();
  const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;

  Rng rng(derive_seed(seed, {tag::coloring}));
  std::vector<std::uint64_t> rows[2] = {std::vector<std::uint64_t>(m, 0), std::vector<std::uint64_t>(m, 0)};
  std::vector<int> col(e);
  const auto set_edge = [&](std::size_t i, int c) {
    const auto [a, b] = r.edges[i];
    rows[col[i]][static_cast<std::size_t>(a)] &= ~(std::uint64_t{1} << b);
    rows[col[i]][static_cast<std::size_t>(b)] &= ~(std::uint64_t{1} << a);
    col[i] = c;
    rows[c][static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    rows[c][static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  };
  const auto restart = [&] {
    std::fill(rows[0].begin(), rows[0].end(), 0);
    std::fill(rows[1].begin(), rows[1].end(), 0);
    for (std::size_t i = 0; i < e; ++i) {
      col[i] = static_cast<int>(rng.next() >> 63);
      const auto [a, b] = r.edges[i];
      rows[col[i]][static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
      rows[col[i]][static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
    }
  };
  const auto score = [&] { return detail::small_count(sp, rows[0], all) + detail::small_count(sp, rows[1], all); };

  restart();
  std::uint64_t current = score();
  std::size_t stale = 0;
  for (std::size_t step = 0; step < budget && current > 0; ++step) {
    const std::size_t i = rng.below(e);
    const int old = col[i];
    set_edge(i, 1 - old);
    const std::uint64_t next = score();
    if (next <= current) {
      stale = next < current ? 0 : stale + 1;
      current = next;
    } else {
      set_edge(i, old);
      ++stale;
    }
    if (stale > 4 * e) {
      restart();
      current = score();
      stale = 0;
    }
  }
  if (current > 0) return std::nullopt;
  EdgeColoring c;
  for (const int x : col) c.colors.push_back(x ? Color::Blue : Color::Red);
  return verified(c);
}

// Colourings as "u v c" lines in G.edges() order, c = 0 red, 1 blue.

inline void write_coloring(std::ostream& os, const Graph& g, const EdgeColoring& c) {
  check_coloring(g, c);
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    os << edges[i].first << ' ' << edges[i].second << ' ' << static_cast<int>(c.colors[i]) << '\n';
}

inline EdgeColoring read_coloring(std::istream& is, const Graph& g) {
  const EdgeIndex index(g);
  EdgeColoring c{std::vector<Color>(g.size(), Color::Red)};
  std::vector<char> seen(g.size(), 0);
  long long u, v, col;
  std::size_t count = 0;
  while (is >> u) {
    if (!(is >> v >> col)) throw Error(ErrorKind::ParseError, "incomplete colouring line");
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= g.order() || static_cast<std::size_t>(v) >= g.order() ||
        (col != 0 && col != 1))
      throw Error(ErrorKind::ParseError, "bad colouring entry");
    if (!g.adjacent(static_cast<Vertex>(u), static_cast<Vertex>(v))) throw Error(ErrorKind::ParseError, "not an edge");
    const std::size_t id = index(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (seen[id]) throw Error(ErrorKind::ParseError, "edge coloured twice");
    seen[id] = 1;
    c.colors[id] = col ? Color::Blue : Color::Red;
    ++count;
  }
  if (!is.eof()) throw Error(ErrorKind::ParseError, "bad token");
  if (count != g.size()) throw Error(ErrorKind::ParseError, "colouring does not cover every edge");
  return c;
}

}  // namespace sizeramsey
