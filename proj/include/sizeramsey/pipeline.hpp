#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "embedder.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "graph_metrics.hpp"
#include "ramsey.hpp"
#include "rational.hpp"
#include "regularity.hpp"
#include "seed.hpp"

namespace sizeramsey {

struct PipelineOptions {
  double kappa = 1.0 / 12.0;
  std::optional<double> free_threshold;
  std::optional<std::size_t> bucket_count;
  CycleOptions cycle{};
  std::size_t k4_budget = 1000000;
  std::size_t regularity_pairs = 3;  // sampled cell pairs for the diagnostic
  std::size_t regularity_samples = 50;
  Rational regularity_epsilon{1, 4};
};

struct PipelineResult {
  std::optional<EmbeddingState> embedding;  // verified against the host
  Rational cleanup_d;
  std::size_t cleanup_removed = 0;
  std::optional<double> regularity_pass_fraction;
  std::size_t k4_components = 0;
  std::optional<Color> color;  // class used by ramsey_pipeline
};

inline double edge_density(const Graph& g) {
  const double n = static_cast<double>(g.order());
  return g.order() < 2 ? 0.0 : 2.0 * static_cast<double>(g.size()) / (n * (n - 1.0));
}

/// Pattern K20 minus the ten pairs {V_i^0, V_i^1}; cell k = 2i + a.
inline Graph cell_pattern() {
  Graph k(20);
  for (Vertex a = 0; a < 20; ++a)
    for (Vertex b = a + 1; b < 20; ++b)
      if (a / 2 != b / 2) k.add_edge(a, b);
  return k;
}

/// Embeds H into `host`: K4 components first by backtracking, then a random
/// equitable 20-cell partition of the remaining host vertices, cleanup with
/// d = max(measured between-cell density, p_scale/3), decomposition of the
/// rest of H, a distance-2 colouring, and embed_blocks. `p_scale` is the
/// density of the uncoloured host. Failures surface as exceptions;
/// PartitionDegenerate when cleanup empties a cell.
inline PipelineResult embed_into_host(const Graph& host, const Graph& h, double p_scale, std::uint64_t seed,
                                      const PipelineOptions& options = {}) {
  if (h.order() == 0) throw Error(ErrorKind::InvalidArgument, "empty pattern");
  if (h.max_degree() > 3) throw Error(ErrorKind::DegreeTooHigh, "pattern maximum degree exceeds 3");
  if (!(p_scale > 0.0 && p_scale <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p_scale must lie in (0,1]");
  PipelineResult result;
  EmbeddingState full(h.order(), host.order());

  // K4 components.
  const auto comps = connected_components(h);
  std::vector<Vertex> rest;
  const Graph k4 = graph_from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  for (const auto& comp : comps) {
    if (comp.size() == 4 && is_k4(h.induced(comp))) {
      VertexSet allowed = ~full.used;
      const auto copy = find_subgraph(host, k4, options.k4_budget, &allowed);
      if (!copy) return result;
      for (std::size_t i = 0; i < 4; ++i) full.assign(comp[i], (*copy)[i], -1);
      ++result.k4_components;
    } else {
      rest.insert(rest.end(), comp.begin(), comp.end());
    }
  }
  std::sort(rest.begin(), rest.end());

  if (!rest.empty()) {
    std::vector<Vertex> free_vertices;
    for (Vertex x = 0; x < host.order(); ++x)
      if (!full.used.test(x)) free_vertices.push_back(x);
    HostPartition part = random_partition(std::move(free_vertices), seed);

    // Cleanup over the cell pattern.
    const Graph cp = cell_pattern();
    std::vector<std::vector<Vertex>> sets(20);
    for (std::size_t k = 0; k < 20; ++k) sets[k] = part.cell(k);
    std::int64_t between = 0, pairs = 0;
    for (const auto& [a, b] : cp.edges()) {
      for (const Vertex x : sets[a])
        for (const Vertex y : sets[b])
          if (host.adjacent(x, y)) ++between;
      pairs += static_cast<std::int64_t>(sets[a].size() * sets[b].size());
    }
    const Rational floor_d = Rational::approximate(p_scale / 3.0, 1000000000);
    Rational d = pairs > 0 ? Rational(between, pairs) : Rational(0);
    if (d < floor_d) d = floor_d;
    if (d <= Rational(0)) throw Error(ErrorKind::PartitionDegenerate, "host has no edges between cells");
    result.cleanup_d = d;
    CleanupResult cleaned;
    try {
      cleaned = cleanup(host, cp, sets, d);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Exhausted) throw Error(ErrorKind::PartitionDegenerate, e.what());
      throw;
    }
    result.cleanup_removed = cleaned.removed;
    for (std::size_t k = 0; k < 20; ++k) part.cell(k) = cleaned.sets[k];

    // Regularity diagnostic on a few random cell pairs.
    if (options.regularity_pairs > 0) {
      Rng rng(derive_seed(seed, {tag::probe}));
      const auto edges = cp.edges();
      RegularityParams rp;
      rp.epsilon = options.regularity_epsilon;
      rp.p = Rational::approximate(p_scale, 1000000000);
      std::size_t ok = 0;
      for (std::size_t t = 0; t < options.regularity_pairs; ++t) {
        const auto& [a, b] = edges[rng.below(edges.size())];
        const auto verdict = estimate_regularity(host, std::span<const Vertex>(part.cell(a)),
                                                 std::span<const Vertex>(part.cell(b)), rp,
                                                 options.regularity_samples, derive_seed(seed, {tag::probe, t}));
        if (verdict.regular) ++ok;
      }
      result.regularity_pass_fraction = static_cast<double>(ok) / static_cast<double>(options.regularity_pairs);
    }

    const Graph hr = h.induced(rest);
    const ComponentDecomposition cd = decompose_components(hr);
    const VertexColoring phi = square_coloring(hr);
    BlockEmbedOptions bo;
    bo.kappa = options.kappa;
    bo.p = p_scale;
    bo.free_threshold = options.free_threshold;
    bo.bucket_count = options.bucket_count;
    bo.cycle = options.cycle;
    bo.seed = derive_seed(seed, {tag::buckets});
    const EmbeddingState sub = embed_blocks(host, hr, cd.decomposition, part, phi, bo);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      full.assign(rest[i], sub.at(static_cast<Vertex>(i)), sub.bucket_index[i]);
      full.cell_level[rest[i]] = sub.cell_level[i];
    }
    full.occupancy = sub.occupancy;
    full.occupancy_peak = sub.occupancy_peak;
    full.cell_occupancy = sub.cell_occupancy;
  }
  if (!verify_embedding(host, h, full)) throw Error(ErrorKind::Internal, "pipeline embedding failed verification");
  result.embedding = std::move(full);
  return result;
}

/// Majority colour class (ties go to red), then embed_into_host on it with
/// the density of the whole host as scale. Success is monochromatic by
/// construction and re-checked against the colouring.
inline PipelineResult ramsey_pipeline(const Graph& gamma, const EdgeColoring& coloring, const Graph& h,
                                      std::uint64_t seed, const PipelineOptions& options = {}) {
  check_coloring(gamma, coloring);
  const auto blue = static_cast<std::size_t>(std::count(coloring.colors.begin(), coloring.colors.end(), Color::Blue));
  const Color color = blue > gamma.size() - blue ? Color::Blue : Color::Red;
  const Graph cls = color_class(gamma, coloring, color);
  PipelineResult result = embed_into_host(cls, h, edge_density(gamma), seed, options);
  result.color = color;
  if (result.embedding) {
    const EdgeIndex index(gamma);
    for (const auto& [u, v] : h.edges()) {
      const Vertex a = result.embedding->at(u), b = result.embedding->at(v);
      if (!gamma.adjacent(a, b) || coloring.colors[index(a, b)] != color)
        throw Error(ErrorKind::Internal, "pipeline embedding is not monochromatic");
    }
  }
  return result;
}

}  // namespace sizeramsey
