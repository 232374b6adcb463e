#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "seed.hpp"

namespace sizeramsey {

struct GnpParams {
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// G(n,p) as a pure function of the vertex pair: {u,v} is an edge iff a
/// 64-bit hash of (seed, min, max) falls below p * 2^64. Every pair is an
/// independent Bernoulli(p) trial, and the same predicate backs both the
/// materialised Graph and the implicit view, so they describe one graph.
class GnpEdgeRule {
 public:
  explicit GnpEdgeRule(const GnpParams& params) : key_(mix64(params.seed ^ 0x676e7021ULL)) {
    if (!(params.p >= 0.0 && params.p <= 1.0))
      throw Error(ErrorKind::InvalidArgument, "p must lie in [0,1]");
    if (params.p >= 1.0) {
      all_ = true;
    } else {
      threshold_ = static_cast<std::uint64_t>(std::ldexp(params.p, 64));
    }
  }

  bool operator()(Vertex u, Vertex v) const {
    if (u == v) return false;
    if (all_) return true;
    if (u > v) std::swap(u, v);
    const std::uint64_t pair = (static_cast<std::uint64_t>(u) << 32) | v;
    return mix64(key_ ^ pair) < threshold_;
  }

 private:
  std::uint64_t key_;
  std::uint64_t threshold_ = 0;
  bool all_ = false;
};

/// Unmaterialised G(n,p), for hosts too large for bitset rows.
class ImplicitGnp {
 public:
  explicit ImplicitGnp(const GnpParams& params) : n_(params.n), rule_(params) {}
  std::size_t order() const { return n_; }
  bool adjacent(Vertex u, Vertex v) const { return rule_(u, v); }

  std::vector<Vertex> neighbors(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex w = 0; w < n_; ++w)
      if (rule_(v, w)) out.push_back(w);
    return out;
  }

 private:
  std::size_t n_;
  GnpEdgeRule rule_;
};

inline Graph gnp_sample(const GnpParams& params) {
  const GnpEdgeRule rule(params);
  Graph g(params.n);
  for (Vertex u = 0; u < params.n; ++u)
    for (Vertex v = u + 1; v < params.n; ++v)
      if (rule(u, v)) g.add_edge(u, v);
  return g;
}

/// Configuration-model rejection attempts before GenerationTimeout.
inline constexpr int cubic_rejection_budget = 1000;

/// Uniform-ish random simple cubic graph: pair 3n shuffled stubs, reject
/// samples with loops or parallel edges.
inline Graph random_cubic(std::size_t n, std::uint64_t seed) {
  if (n % 2 == 1) throw Error(ErrorKind::OddOrder, "cubic graphs need an even order");
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "cubic graphs need at least 4 vertices");
  Rng rng(seed);
  std::vector<Vertex> stubs(3 * n);
  for (int attempt = 0; attempt < cubic_rejection_budget; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<Vertex>(i / 3);
    rng.shuffle(stubs);
    Graph g(n);
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      const Vertex a = stubs[i], b = stubs[i + 1];
      simple = a != b && g.add_edge(a, b);
    }
    if (simple) return g;
  }
  throw Error(ErrorKind::GenerationTimeout, "no simple cubic graph after " +
                                                std::to_string(cubic_rejection_budget) + " attempts");
}

enum class NamedGraphId { K4, K33, Petersen, Prism3, Cube, Heawood, MoebiusKantor, Cycle, Path, Complete };

struct NamedGraph {
  NamedGraphId id;
  std::size_t k = 0;  // Cycle/Path/Complete only
};

namespace detail {
inline Graph generalized_petersen(std::size_t n, std::size_t k) {
  Graph g(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(i + n));
    g.add_edge(static_cast<Vertex>(n + i), static_cast<Vertex>(n + (i + k) % n));
  }
  return g;
}
}  // namespace detail

/// Vertex labelling (see README):
///   Petersen        GP(5,2): outer cycle 0..4, spokes i~i+5, inner i+5~(i+2)%5+5
///   MoebiusKantor   GP(8,3), same scheme on 16 vertices
///   Heawood         Hamiltonian cycle 0..13 plus chords i~i+5 for even i
///   Prism3          triangles {0,1,2} and {3,4,5}, rungs i~i+3
///   Cube            Q3 on 0..7, u~v iff they differ in one bit
///   K33             {0,1,2} x {3,4,5}
///   Cycle(k)        0~1~...~k-1~0 (k >= 3); Path(k) on k vertices (k >= 1)
inline Graph named_graph(const NamedGraph& spec) {
  switch (spec.id) {
    case NamedGraphId::K4:
      return named_graph({NamedGraphId::Complete, 4});
    case NamedGraphId::K33: {
      Graph g(6);
      for (Vertex a = 0; a < 3; ++a)
        for (Vertex b = 3; b < 6; ++b) g.add_edge(a, b);
      return g;
    }
    case NamedGraphId::Petersen:
      return detail::generalized_petersen(5, 2);
    case NamedGraphId::MoebiusKantor:
      return detail::generalized_petersen(8, 3);
    case NamedGraphId::Prism3: {
      Graph g(6);
      for (Vertex i = 0; i < 3; ++i) {
        g.add_edge(i, (i + 1) % 3);
        g.add_edge(3 + i, 3 + (i + 1) % 3);
        g.add_edge(i, i + 3);
      }
      return g;
    }
    case NamedGraphId::Cube: {
      Graph g(8);
      for (Vertex u = 0; u < 8; ++u)
        for (Vertex b = 1; b < 8; b <<= 1)
          if ((u ^ b) > u) g.add_edge(u, u ^ b);
      return g;
    }
    case NamedGraphId::Heawood: {
      Graph g(14);
      for (Vertex i = 0; i < 14; ++i) g.add_edge(i, (i + 1) % 14);
      for (Vertex i = 0; i < 14; i += 2) g.add_edge(i, (i + 5) % 14);
      return g;
    }
    case NamedGraphId::Cycle: {
      if (spec.k < 3) throw Error(ErrorKind::InvalidArgument, "Cycle(k) needs k >= 3");
      Graph g(spec.k);
      for (Vertex i = 0; i < spec.k; ++i) g.add_edge(i, static_cast<Vertex>((i + 1) % spec.k));
      return g;
    }
    case NamedGraphId::Path: {
      if (spec.k < 1) throw Error(ErrorKind::InvalidArgument, "Path(k) needs k >= 1");
      Graph g(spec.k);
      for (Vertex i = 0; i + 1 < spec.k; ++i) g.add_edge(i, i + 1);
      return g;
    }
    case NamedGraphId::Complete: {
      if (spec.k < 1) throw Error(ErrorKind::InvalidArgument, "Complete(k) needs k >= 1");
      Graph g(spec.k);
      for (Vertex u = 0; u < spec.k; ++u)
        for (Vertex v = u + 1; v < spec.k; ++v) g.add_edge(u, v);
      return g;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown named graph");
}

namespace detail {
inline bool parse_size(const std::string& s, std::size_t& out) {
  if (s.empty() || s.size() > 9) return false;
  for (const char c : s)
    if (c < '0' || c > '9') return false;
  out = std::stoul(s);
  return true;
}
}  // namespace detail

/// Accepts K4, K33, Petersen, Prism3, Cube, Heawood, MoebiusKantor,
/// Cycle(k)/C<k>, Path(k)/P<k>, Complete(k)/K<k>.
inline NamedGraph parse_named_graph(const std::string& name) {
  if (name == "K4") return {NamedGraphId::K4};
  if (name == "K33" || name == "K3,3") return {NamedGraphId::K33};
  if (name == "Petersen") return {NamedGraphId::Petersen};
  if (name == "Prism3" || name == "Prism") return {NamedGraphId::Prism3};
  if (name == "Cube" || name == "Q3") return {NamedGraphId::Cube};
  if (name == "Heawood") return {NamedGraphId::Heawood};
  if (name == "MoebiusKantor" || name == "MobiusKantor") return {NamedGraphId::MoebiusKantor};
  const auto paren = [&](const std::string& prefix, NamedGraphId id, NamedGraph& out) {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return false;
    std::size_t k;
    if (!detail::parse_size(name.substr(prefix.size() + 1, name.size() - prefix.size() - 2), k))
      return false;
    out = {id, k};
    return true;
  };
  NamedGraph out{NamedGraphId::K4};
  if (paren("Cycle", NamedGraphId::Cycle, out) || paren("Path", NamedGraphId::Path, out) ||
      paren("Complete", NamedGraphId::Complete, out))
    return out;
  std::size_t k;
  if (name.size() >= 2 && detail::parse_size(name.substr(1), k)) {
    if (name[0] == 'C') return {NamedGraphId::Cycle, k};
    if (name[0] == 'P') return {NamedGraphId::Path, k};
    if (name[0] == 'K') return {NamedGraphId::Complete, k};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown graph name '" + name + "'");
}

}  // namespace sizeramsey
