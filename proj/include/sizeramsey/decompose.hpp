#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace sizeramsey {

enum class BlockKind { Path, Cycle };

/// An induced path (vertices in path order) or an induced cycle of length
/// >= 4 (vertices in cyclic order).
struct Block {
  std::vector<Vertex> vertices;
  BlockKind kind = BlockKind::Path;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Ordered blocks B_1..B_t. back_degree[v] counts neighbours of v in earlier
/// blocks; every vertex outside B_1 has back_degree <= 1.
struct BlockDecomposition {
  std::vector<Block> blocks;
  std::vector<std::uint32_t> back_degree;

  std::size_t cycle_count() const {
    return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(),
                                                  [](const Block& b) { return b.kind == BlockKind::Cycle; }));
  }
};

inline constexpr std::size_t exact_path_threshold = 64;

namespace detail {

/// Searches the subgraph induced by `alive` for a chordless cycle of length
/// >= min_len. Every such cycle contains an induced path q_1..q_{L-1}
/// (L = min_len); conversely, for any induced path Q of that length, a
/// shortest q_{L-1} -> q_1 path avoiding the interior of Q and its
/// neighbourhood closes Q into a chordless cycle of length >= L. So trying
/// each induced (L-1)-path in lexicographic order with one BFS decides
/// existence exactly and deterministically.
inline std::optional<std::vector<Vertex>> find_long_hole(const Graph& h, const std::vector<char>& alive,
                                                         std::size_t min_len) {
  const std::size_t n = h.order();
  const std::size_t qlen = min_len - 1;
  std::vector<Vertex> path;
  std::vector<int> parent(n);
  std::vector<char> blocked(n);
  std::optional<std::vector<Vertex>> result;

  const auto close = [&]() -> bool {
    const Vertex first = path.front(), last = path.back();
    if (first > last) return false;  // each cycle is tried from one orientation
    std::fill(blocked.begin(), blocked.end(), 0);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      blocked[path[i]] = 1;
      for (const Vertex w : h.neighbors(path[i])) blocked[w] = 1;
    }
    blocked[first] = blocked[last] = 0;
    std::fill(parent.begin(), parent.end(), -1);
    std::vector<Vertex> queue{last};
    parent[last] = static_cast<int>(last);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (const Vertex w : h.neighbors(u)) {
        if (!alive[w] || blocked[w] || parent[w] != -1) continue;
        if (u == last && w == first) continue;
        parent[w] = static_cast<int>(u);
        if (w == first) {
          std::vector<Vertex> back;
          for (Vertex x = static_cast<Vertex>(parent[first]); x != last; x = static_cast<Vertex>(parent[x]))
            back.push_back(x);
          std::vector<Vertex> cycle = path;
          cycle.insert(cycle.end(), back.rbegin(), back.rend());
          result = std::move(cycle);
          return true;
        }
        queue.push_back(w);
      }
    }
    return false;
  };

  // Depth-first over induced paths; `bad[v]` counts path vertices other
  // than the current endpoint that v is adjacent to or equal to.
  std::vector<int> bad(n, 0);
  const auto extend = [&](auto&& self) -> bool {
    if (path.size() == qlen) return close();
    const Vertex last = path.back();
    for (const Vertex w : h.neighbors(last)) {
      if (!alive[w] || bad[w] != 0 || w < path.front()) continue;
      // w must not touch any earlier path vertex; `bad` tracks all but `last`.
      bad[last] += 1;
      for (const Vertex x : h.neighbors(last)) bad[x] += 1;
      path.push_back(w);
      const bool done = self(self);
      path.pop_back();
      bad[last] -= 1;
      for (const Vertex x : h.neighbors(last)) bad[x] -= 1;
      if (done) return true;
    }
    return false;
  };
  for (Vertex s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    path.assign(1, s);
    if (extend(extend)) return result;
  }
  return std::nullopt;
}

/// Exact longest induced path on <= 64 vertices (bitmask adjacency).
/// Returns the lexicographically smallest maximum-length vertex sequence:
/// sequences are explored in lexicographic order and only strictly longer
/// ones replace the incumbent. Bound: path length plus the number of
/// vertices still reachable from the endpoint through allowed vertices.
inline std::vector<int> longest_induced_path_small(const std::vector<std::uint64_t>& nb) {
  const int n = static_cast<int>(nb.size());
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<int> best, path;

  const auto reach = [&](int from, std::uint64_t allowed) {
    std::uint64_t frontier = nb[from] & allowed, seen = frontier;
    while (frontier) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f; f &= f - 1) next |= nb[std::countr_zero(f)];
      next &= allowed & ~seen;
      seen |= next;
      frontier = next;
    }
    return std::popcount(seen);
  };

  const auto dfs = [&](auto&& self, std::uint64_t allowed) -> void {
    if (path.size() > best.size()) best = path;
    const int last = path.back();
    std::uint64_t cand = nb[last] & allowed;
    if (!cand) return;
    if (path.size() + static_cast<std::size_t>(reach(last, allowed)) <= best.size()) return;
    // Neighbours of `last` other than the chosen one become unusable.
    const std::uint64_t next_allowed = allowed & ~nb[last];
    for (; cand; cand &= cand - 1) {
      const int w = std::countr_zero(cand);
      path.push_back(w);
      self(self, next_allowed & ~(std::uint64_t{1} << w));
      path.pop_back();
    }
  };

  for (int s = 0; s < n; ++s) {
    path.assign(1, s);
    dfs(dfs, full & ~(std::uint64_t{1} << s));
    if (best.size() == static_cast<std::size_t>(n)) break;
  }
  return best;
}

inline std::vector<std::uint64_t> mask_adjacency(const Graph& h, const std::vector<Vertex>& vs) {
  std::vector<std::uint64_t> nb(vs.size(), 0);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j && h.adjacent(vs[i], vs[j])) nb[i] |= std::uint64_t{1} << j;
  return nb;
}

inline std::vector<Vertex> alive_vertices(const std::vector<char>& alive) {
  std::vector<Vertex> vs;
  for (Vertex v = 0; v < alive.size(); ++v)
    if (alive[v]) vs.push_back(v);
  return vs;
}

inline std::vector<Vertex> longest_induced_path_alive(const Graph& h, const std::vector<char>& alive,
                                                      std::size_t threshold) {
  const std::vector<Vertex> vs = alive_vertices(alive);
  if (vs.size() > threshold || vs.size() > 64)
    throw Error(ErrorKind::TooLargeForExact,
                std::to_string(vs.size()) + " vertices exceed the exact induced-path threshold " +
                    std::to_string(std::min<std::size_t>(threshold, 64)));
  std::vector<Vertex> out;
  for (const int i : longest_induced_path_small(mask_adjacency(h, vs))) out.push_back(vs[i]);
  return out;
}

inline void check_cubic_input(const Graph& h) {
  if (h.order() == 0) throw Error(ErrorKind::InvalidArgument, "empty graph");
  if (h.max_degree() > 3) throw Error(ErrorKind::DegreeTooHigh, "maximum degree exceeds 3");
  if (is_k4(h)) throw Error(ErrorKind::IsK4, "K4 has no block decomposition");
  if (!is_connected(h)) throw Error(ErrorKind::NotConnected, "graph is not connected");
}

}  // namespace detail

/// Greedy maximal family of disjoint chordless cycles of length >= min_len,
/// each listed in cyclic order. Maximal, not maximum.
inline std::vector<std::vector<Vertex>> max_induced_cycle_family(const Graph& h, std::size_t min_len) {
  if (min_len < 4) throw Error(ErrorKind::InvalidArgument, "min_len must be at least 4");
  std::vector<char> alive(h.order(), 1);
  std::vector<std::vector<Vertex>> family;
  while (auto hole = detail::find_long_hole(h, alive, min_len)) {
    for (const Vertex v : *hole) alive[v] = 0;
    family.push_back(std::move(*hole));
  }
  return family;
}

/// A maximum induced path by exact branch-and-bound; ties go to the
/// lexicographically smallest vertex sequence.
inline std::vector<Vertex> longest_induced_path(const Graph& h,
                                                std::size_t exact_threshold = exact_path_threshold) {
  if (h.order() == 0) throw Error(ErrorKind::InvalidArgument, "empty graph");
  return detail::longest_induced_path_alive(h, std::vector<char>(h.order(), 1), exact_threshold);
}

inline std::vector<std::uint32_t> compute_back_degrees(const Graph& h, const std::vector<Block>& blocks) {
  std::vector<std::size_t> block_of(h.order(), SIZE_MAX);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (const Vertex v : blocks[i].vertices)
      if (v < h.order() && block_of[v] == SIZE_MAX) block_of[v] = i;
  std::vector<std::uint32_t> back(h.order(), 0);
  for (Vertex v = 0; v < h.order(); ++v)
    for (const Vertex w : h.neighbors(v))
      if (block_of[w] < block_of[v]) ++back[v];
  return back;
}

namespace detail {
inline BlockDecomposition finish(const Graph& h, std::vector<Block> construction_order) {
  std::reverse(construction_order.begin(), construction_order.end());
  BlockDecomposition d;
  d.blocks = std::move(construction_order);
  d.back_degree = compute_back_degrees(h, d.blocks);
  return d;
}
}  // namespace detail

/// Blocks are built in reverse: a maximal family of induced cycles of
/// length >= 4, then repeatedly a longest induced path of what remains.
/// In construction order each vertex has <= 1 neighbour in later blocks;
/// the list is reversed before returning so the bound holds for earlier
/// blocks instead.
inline BlockDecomposition decompose_cubic(const Graph& h, std::size_t exact_threshold = exact_path_threshold) {
  detail::check_cubic_input(h);
  std::vector<Block> built;
  std::vector<char> alive(h.order(), 1);
  for (auto& cyc : max_induced_cycle_family(h, 4)) {
    for (const Vertex v : cyc) alive[v] = 0;
    built.push_back({std::move(cyc), BlockKind::Cycle});
  }
  while (std::find(alive.begin(), alive.end(), 1) != alive.end()) {
    std::vector<Vertex> path = detail::longest_induced_path_alive(h, alive, exact_threshold);
    for (const Vertex v : path) alive[v] = 0;
    built.push_back({std::move(path), BlockKind::Path});
  }
  return detail::finish(h, std::move(built));
}

/// Triangle-free variant: cycles of length >= 5 (>= 6 in bipartite mode).
/// Before each path extraction every vertex of degree two in the remainder
/// gets a temporary pendant neighbour; the longest induced path of that
/// expanded graph, stripped of temporaries, becomes the next block.
inline BlockDecomposition decompose_triangle_free(const Graph& h, bool bipartite_mode,
                                                  std::size_t exact_threshold = exact_path_threshold) {
  if (h.order() == 0) throw Error(ErrorKind::InvalidArgument, "empty graph");
  if (has_triangle(h)) throw Error(ErrorKind::HasTriangle, "graph contains a triangle");
  if (h.order() < 7) throw Error(ErrorKind::TooSmall, "triangle-free decomposition needs at least 7 vertices");
  if (!is_regular_of_degree(h, 3)) throw Error(ErrorKind::InvalidArgument, "graph is not cubic");
  if (!is_connected(h)) throw Error(ErrorKind::NotConnected, "graph is not connected");
  if (bipartite_mode && !is_bipartite(h)) throw Error(ErrorKind::NotBipartite, "graph is not bipartite");

  std::vector<Block> built;
  std::vector<char> alive(h.order(), 1);
  for (auto& cyc : max_induced_cycle_family(h, bipartite_mode ? 6 : 5)) {
    for (const Vertex v : cyc) alive[v] = 0;
    built.push_back({std::move(cyc), BlockKind::Cycle});
  }
  while (std::find(alive.begin(), alive.end(), 1) != alive.end()) {
    const std::vector<Vertex> vs = detail::alive_vertices(alive);
    std::vector<std::uint64_t> nb = detail::mask_adjacency(h, vs);
    const std::size_t originals = vs.size();
    std::size_t total = originals;
    for (std::size_t i = 0; i < originals; ++i)
      if (std::popcount(nb[i]) == 2) ++total;
    if (total > exact_threshold || total > 64)
      throw Error(ErrorKind::TooLargeForExact, "expanded remainder has " + std::to_string(total) + " vertices");
    std::size_t next = originals;
    for (std::size_t i = 0; i < originals; ++i) {
      if (std::popcount(nb[i]) != 2) continue;
      nb.push_back(std::uint64_t{1} << i);
      nb[i] |= std::uint64_t{1} << next;
      ++next;
    }
    std::vector<Vertex> path;
    for (const int i : detail::longest_induced_path_small(nb))
      if (static_cast<std::size_t>(i) < originals) path.push_back(vs[i]);
    for (const Vertex v : path) alive[v] = 0;
    built.push_back({std::move(path), BlockKind::Path});
  }
  return detail::finish(h, std::move(built));
}

/// Per-component decomposition for graphs with maximum degree <= 3: K4
/// components are returned separately, the rest are decomposed and
/// concatenated in order of decreasing component size (ties: smallest
/// vertex first). No edges join components, so concatenation keeps the
/// back-degree bound.
struct ComponentDecomposition {
  std::vector<std::vector<Vertex>> k4_components;
  BlockDecomposition decomposition;
};

inline ComponentDecomposition decompose_components(const Graph& h,
                                                   std::size_t exact_threshold = exact_path_threshold) {
  if (h.max_degree() > 3) throw Error(ErrorKind::DegreeTooHigh, "maximum degree exceeds 3");
  auto comps = connected_components(h);
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  ComponentDecomposition out;
  for (const auto& comp : comps) {
    const Graph sub = h.induced(comp);
    if (is_k4(sub)) {
      out.k4_components.push_back(comp);
      continue;
    }
    for (Block b : decompose_cubic(sub, exact_threshold).blocks) {
      for (Vertex& v : b.vertices) v = comp[v];
      out.decomposition.blocks.push_back(std::move(b));
    }
  }
  out.decomposition.back_degree = compute_back_degrees(h, out.decomposition.blocks);
  return out;
}

enum class ViolationKind { NonPartition, BrokenBlock, NotInduced, CycleTooShort, BackDegree };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NonPartition: return "NonPartition";
    case ViolationKind::BrokenBlock: return "BrokenBlock";
    case ViolationKind::NotInduced: return "NotInduced";
    case ViolationKind::CycleTooShort: return "CycleTooShort";
    case ViolationKind::BackDegree: return "BackDegree";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::size_t block = 0;
  std::optional<Vertex> vertex;
  std::string detail;
};

/// Independent checker: partition, induced path/cycle shape, cycle length,
/// and back-degree <= 1 for every block after the first. Empty result means
/// valid.
inline std::vector<Violation> validate_decomposition(const Graph& h, const BlockDecomposition& d,
                                                     std::size_t min_cycle) {
  std::vector<Violation> out;
  std::vector<std::size_t> block_of(h.order(), SIZE_MAX);
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto& vs = d.blocks[i].vertices;
    if (vs.empty()) out.push_back({ViolationKind::BrokenBlock, i, std::nullopt, "empty block"});
    for (const Vertex v : vs) {
      if (v >= h.order()) {
        out.push_back({ViolationKind::NonPartition, i, v, "vertex out of range"});
      } else if (block_of[v] != SIZE_MAX) {
        out.push_back({ViolationKind::NonPartition, i, v,
                       "vertex already in block " + std::to_string(block_of[v])});
      } else {
        block_of[v] = i;
      }
    }
  }
  for (Vertex v = 0; v < h.order(); ++v)
    if (block_of[v] == SIZE_MAX) out.push_back({ViolationKind::NonPartition, d.blocks.size(), v, "vertex not covered"});

  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto& b = d.blocks[i];
    const auto& vs = b.vertices;
    const std::size_t k = vs.size();
    bool in_range = true;
    for (const Vertex v : vs) in_range = in_range && v < h.order();
    if (!in_range) continue;
    const bool cycle = b.kind == BlockKind::Cycle;
    if (cycle && k < 3) {
      out.push_back({ViolationKind::BrokenBlock, i, std::nullopt, "cycle with fewer than 3 vertices"});
      continue;
    }
    if (cycle && k < min_cycle)
      out.push_back({ViolationKind::CycleTooShort, i, std::nullopt,
                     "cycle of length " + std::to_string(k) + " < " + std::to_string(min_cycle)});
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t c = a + 1; c < k; ++c) {
        if (vs[a] == vs[c]) continue;
        const bool consecutive = c == a + 1 || (cycle && a == 0 && c == k - 1);
        const bool adj = h.adjacent(vs[a], vs[c]);
        if (consecutive && !adj)
          out.push_back({ViolationKind::BrokenBlock, i, vs[a],
                         "missing edge " + std::to_string(vs[a]) + "-" + std::to_string(vs[c])});
        if (!consecutive && adj)
          out.push_back({ViolationKind::NotInduced, i, vs[a],
                         "chord " + std::to_string(vs[a]) + "-" + std::to_string(vs[c])});
      }
  }

  for (Vertex v = 0; v < h.order(); ++v) {
    if (block_of[v] == SIZE_MAX || block_of[v] == 0) continue;
    std::size_t back = 0;
    for (const Vertex w : h.neighbors(v))
      if (block_of[w] < block_of[v]) ++back;
    if (back > 1)
      out.push_back({ViolationKind::BackDegree, block_of[v], v,
                     std::to_string(back) + " neighbours in earlier blocks"});
  }
  return out;
}

// Text format: one block per line, "P v1 v2 ..." or "C v1 v2 ...".

inline void write_decomposition(std::ostream& os, const BlockDecomposition& d) {
  for (const auto& b : d.blocks) {
    os << (b.kind == BlockKind::Path ? 'P' : 'C');
    for (const Vertex v : b.vertices) os << ' ' << v;
    os << '\n';
  }
}

inline std::vector<Block> read_decomposition(std::istream& is) {
  std::vector<Block> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    Block b;
    if (kind == "P") {
      b.kind = BlockKind::Path;
    } else if (kind == "C") {
      b.kind = BlockKind::Cycle;
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected P or C");
    }
    long long v;
    while (ls >> v) {
      if (v < 0 || v > UINT32_MAX) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad vertex");
      b.vertices.push_back(static_cast<Vertex>(v));
    }
    if (!ls.eof()) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad token");
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace sizeramsey
