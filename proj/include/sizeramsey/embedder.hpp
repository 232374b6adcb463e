#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "graph_metrics.hpp"
#include "seed.hpp"

namespace sizeramsey {

/// Partial injection of a pattern into a host, with the bucket bookkeeping
/// of the first-free-bucket strategy. occupancy[j] is X_j, the number of
/// host vertices taken from tree bucket j so far; occupancy_peak keeps the
/// running maximum (backtracking can lower X_j).
struct EmbeddingState {
  std::vector<std::int64_t> image;  // -1 = not embedded
  VertexSet used;
  std::vector<int> bucket_index;  // tree bucket z of each embedded vertex, -1 if none
  std::vector<int> cell_level;    // cell choice z_v in {0,1} from embed_blocks, -1 if none
  std::vector<std::size_t> occupancy;
  std::vector<std::size_t> occupancy_peak;
  std::array<std::size_t, 2> cell_occupancy{0, 0};

  EmbeddingState() = default;
  EmbeddingState(std::size_t pattern_order, std::size_t host_order)
      : image(pattern_order, -1), used(host_order), bucket_index(pattern_order, -1), cell_level(pattern_order, -1) {}

  bool embedded(Vertex v) const { return image[v] >= 0; }
  Vertex at(Vertex v) const { return static_cast<Vertex>(image[v]); }
  std::size_t embedded_count() const {
    return static_cast<std::size_t>(std::count_if(image.begin(), image.end(), [](std::int64_t x) { return x >= 0; }));
  }

  void assign(Vertex v, Vertex x, int bucket) {
    if (embedded(v)) throw Error(ErrorKind::Internal, "pattern vertex embedded twice", v);
    if (used.test(x)) throw Error(ErrorKind::Internal, "host vertex reused", x);
    image[v] = x;
    used.set(x);
    bucket_index[v] = bucket;
    if (bucket >= 0) {
      const auto j = static_cast<std::size_t>(bucket);
      if (occupancy.size() <= j) {
        occupancy.resize(j + 1, 0);
        occupancy_peak.resize(j + 1, 0);
      }
      occupancy_peak[j] = std::max(occupancy_peak[j], ++occupancy[j]);
    }
  }

  void unassign(Vertex v) {
    used.reset(at(v));
    if (bucket_index[v] >= 0) --occupancy[static_cast<std::size_t>(bucket_index[v])];
    image[v] = -1;
    bucket_index[v] = -1;
  }

  friend bool operator==(const EmbeddingState&, const EmbeddingState&) = default;
};

/// Injective, total on V(H), and edge-preserving.
template <AdjacencyOracle G>
bool verify_embedding(const G& g, const Graph& h, const EmbeddingState& state) {
  if (state.image.size() != h.order()) return false;
  std::vector<char> seen(g.order(), 0);
  for (const std::int64_t x : state.image) {
    if (x < 0 || static_cast<std::size_t>(x) >= g.order() || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
  }
  for (const auto& [u, v] : h.edges())
    if (!g.adjacent(state.at(u), state.at(v))) return false;
  return true;
}

/// Free vertices of `target` adjacent to the images of every embedded
/// pattern neighbour of v.
inline VertexSet candidate_set(const Graph& g, const EmbeddingState& state, const Graph& pattern, Vertex v,
                               const VertexSet& target) {
  VertexSet out = target;
  for (const Vertex w : pattern.neighbors(v))
    if (state.embedded(w)) out &= g.row(state.at(w));
  out -= state.used;
  return out;
}

/// z + 1 buckets, z = min(6, least z with (np^2)^z > n^2), at least 2.
inline std::size_t default_bucket_count(std::size_t n, double p) {
  const double base = static_cast<double>(n) * p * p;
  const double goal = static_cast<double>(n) * static_cast<double>(n);
  std::size_t z = 6;
  if (base > 1.0) {
    double power = base;
    for (std::size_t k = 1; k <= 6; ++k, power *= base)
      if (power > goal) {
        z = k;
        break;
      }
  }
  return std::max<std::size_t>(z, 2) + 1;
}

/// Pattern piece handed to embed_tree / embed_cycle. Local vertex i stands
/// for pattern vertex ids[i] of the state (identity when ids is empty).
/// targets[i] is N_v; when anchors[i] is set it must lie in the host
/// neighbourhood of that vertex.
struct TreeEmbedInput {
  Graph pattern;
  std::vector<Vertex> ids;
  std::vector<std::optional<Vertex>> anchors;
  std::vector<VertexSet> targets;
  std::size_t bucket_count = 3;
  std::uint64_t seed = 0;
};

struct CycleOptions {
  std::size_t short_threshold = 12;
  std::size_t node_budget = 1000000;
  std::size_t closure_depth = 8;  // path vertices revisited when closing a long cycle
};

namespace detail {

inline Vertex global_id(const TreeEmbedInput& in, std::size_t i) {
  return in.ids.empty() ? static_cast<Vertex>(i) : in.ids[i];
}

inline void check_input(const Graph& g, const TreeEmbedInput& in, const EmbeddingState& state) {
  const std::size_t t = in.pattern.order();
  if (in.targets.size() != t) throw Error(ErrorKind::InvalidArgument, "one target set per pattern vertex required");
  if (!in.ids.empty() && in.ids.size() != t) throw Error(ErrorKind::InvalidArgument, "ids size mismatch");
  if (!in.anchors.empty() && in.anchors.size() != t) throw Error(ErrorKind::InvalidArgument, "anchors size mismatch");
  if (in.bucket_count == 0) throw Error(ErrorKind::InvalidArgument, "bucket_count must be positive");
  if (state.used.size() != g.order()) throw Error(ErrorKind::InvalidArgument, "state does not match host");
  for (std::size_t i = 0; i < t; ++i) {
    if (in.targets[i].size() != g.order()) throw Error(ErrorKind::InvalidArgument, "target set does not match host");
    const Vertex id = global_id(in, i);
    if (id >= state.image.size()) throw Error(ErrorKind::InvalidArgument, "pattern id out of range", id);
    if (state.embedded(id)) throw Error(ErrorKind::InvalidArgument, "pattern vertex already embedded", id);
    if (!in.anchors.empty() && in.anchors[i]) {
      if (*in.anchors[i] >= g.order()) throw Error(ErrorKind::InvalidArgument, "anchor out of range");
      if (!in.targets[i].is_subset_of(g.row(*in.anchors[i])))
        throw Error(ErrorKind::InvalidArgument, "target set not inside the anchor's neighbourhood", id);
    }
  }
}

/// Random equipartition of the union of the target sets into `count`
/// buckets, as bitsets over the host.
inline std::vector<VertexSet> make_buckets(const Graph& g, const TreeEmbedInput& in) {
  VertexSet uni(g.order());
  for (const auto& t : in.targets) uni |= t;
  std::vector<Vertex> u = to_vector(uni);
  Rng rng(derive_seed(in.seed, {tag::buckets}));
  rng.shuffle(u);
  std::vector<VertexSet> buckets(in.bucket_count, VertexSet(g.order()));
  for (std::size_t i = 0; i < u.size(); ++i) buckets[i * in.bucket_count / u.size()].set(u[i]);
  return buckets;
}

inline int bucket_of(const std::vector<VertexSet>& buckets, Vertex x) {
  for (std::size_t j = 0; j < buckets.size(); ++j)
    if (buckets[j].test(x)) return static_cast<int>(j);
  return -1;
}

/// Candidates in (bucket, index) order.
inline std::vector<Vertex> ordered_candidates(const VertexSet& cand, const std::vector<VertexSet>& buckets) {
  std::vector<Vertex> out;
  for (const auto& b : buckets) {
    const VertexSet c = cand & b;
    for (auto x = c.find_first(); x != VertexSet::npos; x = c.find_next(x)) out.push_back(static_cast<Vertex>(x));
  }
  return out;
}

inline std::string occupancy_text(const EmbeddingState& s) {
  std::string out = "X =";
  for (const std::size_t x : s.occupancy) out += " " + std::to_string(x);
  return out;
}

}  // namespace detail

/// Greedy tree embedding: vertices in BFS order from the smallest vertex of
/// each component, so every non-root has exactly one earlier neighbour. Each
/// vertex takes the lowest-index vertex of the first bucket in which its
/// free candidate set is non-empty.
inline EmbeddingState embed_tree(const Graph& g, const TreeEmbedInput& in, EmbeddingState state) {
  detail::check_input(g, in, state);
  const Graph& t = in.pattern;
  if (t.size() + connected_components(t).size() != t.order())
    throw Error(ErrorKind::InvalidArgument, "pattern is not a forest");
  const auto buckets = detail::make_buckets(g, in);

  std::vector<int> parent(t.order(), -1);
  std::vector<Vertex> order;
  std::vector<char> seen(t.order(), 0);
  for (Vertex root = 0; root < t.order(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    const std::size_t start = order.size();
    order.push_back(root);
    for (std::size_t head = start; head < order.size(); ++head) {
      for (const Vertex w : t.neighbors(order[head]))
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = static_cast<int>(order[head]);
          order.push_back(w);
        }
    }
  }

  for (const Vertex v : order) {
    VertexSet cand = in.targets[v] - state.used;
    if (parent[v] >= 0) cand &= g.row(state.at(detail::global_id(in, static_cast<std::size_t>(parent[v]))));
    bool placed = false;
    for (std::size_t j = 0; j < buckets.size() && !placed; ++j) {
      const auto x = (cand & buckets[j]).find_first();
      if (x == VertexSet::npos) continue;
      state.assign(detail::global_id(in, v), static_cast<Vertex>(x), static_cast<int>(j));
      placed = true;
    }
    if (!placed)
      throw Error(ErrorKind::Terminated,
                  "no free candidate in any bucket (" + detail::occupancy_text(state) + ")", detail::global_id(in, v));
  }
  return state;
}

namespace detail {

/// Backtracking over cycle positions [from, t) given positions [0, from)
/// already placed. Position t-1 must also be adjacent to position 0.
class CycleSearch {
 public:
  CycleSearch(const Graph& g, const TreeEmbedInput& in, EmbeddingState& state,
              const std::vector<VertexSet>& buckets, std::size_t budget)
      : g_(g), in_(in), state_(state), buckets_(buckets), budget_(budget) {}

  bool run(std::size_t from) { return place(from); }
  bool exhausted_budget() const { return over_; }

 private:
  VertexSet candidates(std::size_t i) const {
    const std::size_t t = in_.pattern.order();
    VertexSet cand = in_.targets[i] - state_.used;
    if (i > 0) cand &= g_.row(state_.at(global_id(in_, i - 1)));
    if (i == t - 1) cand &= g_.row(state_.at(global_id(in_, 0)));
    return cand;
  }

  bool place(std::size_t i) {
    if (i == in_.pattern.order()) return true;
    for (const Vertex x : ordered_candidates(candidates(i), buckets_)) {
      if (++nodes_ > budget_) {
        over_ = true;
        return false;
      }
      state_.assign(global_id(in_, i), x, bucket_of(buckets_, x));
      if (place(i + 1)) return true;
      state_.unassign(global_id(in_, i));
      if (over_) return false;
    }
    return false;
  }

  const Graph& g_;
  const TreeEmbedInput& in_;
  EmbeddingState& state_;
  const std::vector<VertexSet>& buckets_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool over_ = false;
};

}  // namespace detail

/// Cycle C_t with local vertices 0..t-1 in cyclic order. Short cycles are
/// found by exact backtracking. Longer ones: the path 0..t-1 is embedded
/// greedily (the start restricted to vertices with a neighbour in the last
/// target), and the final closure_depth positions are searched exhaustively
/// for a closing edge.
inline EmbeddingState embed_cycle(const Graph& g, const TreeEmbedInput& in, EmbeddingState state,
                                  const CycleOptions& options = {}) {
  detail::check_input(g, in, state);
  const Graph& c = in.pattern;
  const std::size_t t = c.order();
  if (t < 4) throw Error(ErrorKind::InvalidArgument, "cycle needs at least 4 vertices");
  for (std::size_t i = 0; i < t; ++i)
    if (c.degree(static_cast<Vertex>(i)) != 2 || !c.adjacent(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % t)))
      throw Error(ErrorKind::InvalidArgument, "pattern is not a cycle in vertex order");
  const auto buckets = detail::make_buckets(g, in);

  const auto fail = [&](const detail::CycleSearch& s) {
    if (s.exhausted_budget()) throw Error(ErrorKind::BudgetExceeded, "cycle search node budget exhausted");
    throw Error(ErrorKind::ClosureFailed, "no closing edge (" + detail::occupancy_text(state) + ")",
                detail::global_id(in, t - 1));
  };

  if (t <= options.short_threshold) {
    detail::CycleSearch search(g, in, state, buckets, options.node_budget);
    if (!search.run(0)) fail(search);
    return state;
  }

  const std::size_t tail = std::min(options.closure_depth, t - 2);
  const std::size_t head_len = t - tail;
  // Greedy prefix 0..head_len-1.
  VertexSet last_reach(g.order());
  for (auto x = in.targets[t - 1].find_first(); x != VertexSet::npos; x = in.targets[t - 1].find_next(x))
    last_reach |= g.row(static_cast<Vertex>(x));
  for (std::size_t i = 0; i < head_len; ++i) {
    VertexSet cand = in.targets[i] - state.used;
    if (i == 0) cand &= last_reach;
    if (i > 0) cand &= g.row(state.at(detail::global_id(in, i - 1)));
    bool placed = false;
    for (std::size_t j = 0; j < buckets.size() && !placed; ++j) {
      const auto x = (cand & buckets[j]).find_first();
      if (x == VertexSet::npos) continue;
      state.assign(detail::global_id(in, i), static_cast<Vertex>(x), static_cast<int>(j));
      placed = true;
    }
    if (!placed)
      throw Error(ErrorKind::Terminated,
                  "no free candidate in any bucket (" + detail::occupancy_text(state) + ")", detail::global_id(in, i));
  }
  detail::CycleSearch search(g, in, state, buckets, options.node_budget);
  if (!search.run(head_len)) fail(search);
  return state;
}

/// Ten colour classes, two cells each: cells[i][a] is V_i^a.
struct HostPartition {
  std::array<std::array<std::vector<Vertex>, 2>, 10> cells;

  std::size_t cell_count() const { return 20; }
  std::vector<Vertex>& cell(std::size_t k) { return cells[k / 2][k % 2]; }
  const std::vector<Vertex>& cell(std::size_t k) const { return cells[k / 2][k % 2]; }
};

/// Equitable random split of `vertices` into the 20 cells (sorted within
/// each cell); cell k holds the shuffled positions congruent to k mod 20.
inline HostPartition random_partition(std::vector<Vertex> vertices, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {tag::partition}));
  rng.shuffle(vertices);
  HostPartition part;
  for (std::size_t i = 0; i < vertices.size(); ++i) part.cell(i % 20).push_back(vertices[i]);
  for (std::size_t k = 0; k < 20; ++k) std::sort(part.cell(k).begin(), part.cell(k).end());
  return part;
}

struct BlockEmbedOptions {
  double kappa = 1.0 / 12.0;              // free threshold = kappa * |cell| * p
  double p = 0.0;                         // host density scale
  std::optional<double> free_threshold;   // overrides kappa when set
  std::optional<std::size_t> bucket_count;
  CycleOptions cycle{};
  std::uint64_t seed = 0;
};

/// Block-by-block embedding. For v in block B_i with an earlier neighbour
/// a_v, F_v is the set of free neighbours of the image of a_v in cell
/// V_{phi(v)}^{z}, for the first z in {0,1} where it is large enough; vertices
/// without an earlier neighbour use the whole free cell. The block is then
/// embedded inside the sets F_v as a tree or a cycle.
inline EmbeddingState embed_blocks(const Graph& g, const Graph& h, const BlockDecomposition& d,
                                   const HostPartition& partition, const VertexColoring& coloring,
                                   const BlockEmbedOptions& options = {}) {
  if (coloring.colors.size() != h.order() || coloring.num_colors > 10 || !is_distance2_coloring(h, coloring))
    throw Error(ErrorKind::ColoringInvalid, "not a distance-2 colouring with at most 10 colours");
  if (!validate_decomposition(h, d, 4).empty())
    throw Error(ErrorKind::InvalidArgument, "invalid block decomposition");
  VertexSet seen(g.order());
  std::array<std::array<VertexSet, 2>, 10> cell_sets;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t a = 0; a < 2; ++a) {
      cell_sets[i][a] = VertexSet(g.order());
      for (const Vertex x : partition.cells[i][a]) {
        if (x >= g.order() || seen.test(x)) throw Error(ErrorKind::InvalidArgument, "partition cells overlap");
        seen.set(x);
        cell_sets[i][a].set(x);
      }
    }
  const std::size_t buckets = options.bucket_count.value_or(default_bucket_count(g.order(), options.p));

  EmbeddingState state(h.order(), g.order());
  std::vector<std::size_t> block_of(h.order());
  for (std::size_t i = 0; i < d.blocks.size(); ++i)
    for (const Vertex v : d.blocks[i].vertices) block_of[v] = i;

  for (std::size_t bi = 0; bi < d.blocks.size(); ++bi) {
    const Block& block = d.blocks[bi];
    TreeEmbedInput in;
    in.pattern = h.induced(block.vertices);
    in.ids = block.vertices;
    in.bucket_count = buckets;
    in.seed = derive_seed(options.seed, {tag::buckets, bi});
    std::vector<int> level(block.vertices.size(), -1);
    for (std::size_t k = 0; k < block.vertices.size(); ++k) {
      const Vertex v = block.vertices[k];
      std::optional<Vertex> anchor;
      for (const Vertex w : h.neighbors(v))
        if (block_of[w] < bi) anchor = state.at(w);
      const auto color = static_cast<std::size_t>(coloring.colors[v]);
      std::optional<VertexSet> free;
      for (int z = 0; z < 2 && !free; ++z) {
        const auto& cell = cell_sets[color][static_cast<std::size_t>(z)];
        VertexSet f = cell - state.used;
        if (anchor) f &= g.row(*anchor);
        const double need = options.free_threshold.value_or(
            options.kappa * static_cast<double>(partition.cells[color][static_cast<std::size_t>(z)].size()) * options.p);
        if (f.any() && static_cast<double>(f.count()) >= need) {
          free = std::move(f);
          level[k] = z;
        }
      }
      if (!free) throw Error(ErrorKind::BucketExhausted, "no cell with enough free candidates", v);
      in.anchors.push_back(anchor);
      in.targets.push_back(std::move(*free));
    }
    if (block.kind == BlockKind::Cycle)
      state = embed_cycle(g, in, std::move(state), options.cycle);
    else
      state = embed_tree(g, in, std::move(state));
    for (std::size_t k = 0; k < block.vertices.size(); ++k) {
      state.cell_level[block.vertices[k]] = level[k];
      ++state.cell_occupancy[static_cast<std::size_t>(level[k])];
    }
  }
  if (!verify_embedding(g, h, state)) throw Error(ErrorKind::Internal, "embedding failed verification");
  return state;
}

struct OccupancyRow {
  std::size_t bucket = 0;
  std::size_t max_occupancy = 0;
  double bound = 0.0;
  bool exceeded = false;
};

/// X_j against c_j n / (np^2)^j. Missing constants repeat the last one.
/// Rows cover at least `levels` buckets; untouched buckets report 0.
inline std::vector<OccupancyRow> occupancy_report(const EmbeddingState& state, std::size_t n, double p,
                                                  const std::vector<double>& c, std::size_t levels = 0) {
  if (c.empty()) throw Error(ErrorKind::InvalidArgument, "at least one constant required");
  std::vector<OccupancyRow> rows;
  const double base = static_cast<double>(n) * p * p;
  for (std::size_t j = 0; j < std::max(levels, state.occupancy_peak.size()); ++j) {
    OccupancyRow r;
    r.bucket = j;
    r.max_occupancy = j < state.occupancy_peak.size() ? state.occupancy_peak[j] : 0;
    r.bound = c[std::min(j, c.size() - 1)] * static_cast<double>(n) / std::pow(base, static_cast<double>(j));
    r.exceeded = static_cast<double>(r.max_occupancy) > r.bound;
    rows.push_back(r);
  }
  return rows;
}

inline void write_occupancy_csv(std::ostream& os, const std::string& run_id, const std::vector<OccupancyRow>& rows,
                                bool header = true) {
  if (header) os << "run_id,bucket,max_occupancy,bound,exceeded\n";
  for (const auto& r : rows) {
    std::ostringstream bound;
    bound.precision(17);
    bound << r.bound;
    os << run_id << ',' << r.bucket << ',' << r.max_occupancy << ',' << bound.str() << ','
       << (r.exceeded ? 1 : 0) << '\n';
  }
}

// "pattern_vertex host_vertex" per embedded vertex, in pattern order.

inline void write_embedding(std::ostream& os, const EmbeddingState& state) {
  for (std::size_t v = 0; v < state.image.size(); ++v)
    if (state.image[v] >= 0) os << v << ' ' << state.image[v] << '\n';
}

inline std::vector<std::int64_t> read_embedding(std::istream& is, std::size_t pattern_order) {
  std::vector<std::int64_t> image(pattern_order, -1);
  long long v, x;
  while (is >> v) {
    if (!(is >> x)) throw Error(ErrorKind::ParseError, "dangling pattern vertex");
    if (v < 0 || static_cast<std::size_t>(v) >= pattern_order || x < 0)
      throw Error(ErrorKind::ParseError, "vertex out of range");
    if (image[static_cast<std::size_t>(v)] >= 0) throw Error(ErrorKind::ParseError, "pattern vertex listed twice");
    image[static_cast<std::size_t>(v)] = x;
  }
  if (!is.eof()) throw Error(ErrorKind::ParseError, "bad token");
  return image;
}

}  // namespace sizeramsey
