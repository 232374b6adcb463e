#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "seed.hpp"

namespace sizeramsey {

struct RegularityParams {
  Rational epsilon{1, 10};
  Rational p{1, 2};
  Rational gamma{0};

  void validate() const {
    if (epsilon <= Rational(0) || epsilon > Rational(1))
      throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0,1]");
    if (p <= Rational(0) || p > Rational(1)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0,1]");
    if (gamma < Rational(0)) throw Error(ErrorKind::InvalidArgument, "gamma must be non-negative");
  }
};

struct RegularityWitness {
  std::vector<Vertex> u1;
  std::vector<Vertex> u2;
  Rational deviation;  // |d(U1,U2) - d(A,B)|
};

struct RegularityVerdict {
  bool regular = true;
  std::optional<RegularityWitness> witness;
};

inline constexpr std::size_t exact_regularity_bound = 16;
inline constexpr double regularity_tolerance = 1e-12;

namespace detail {

inline void check_pair_sets(std::size_t n, std::span<const Vertex> a, std::span<const Vertex> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySide, "pair side is empty");
  std::vector<char> seen(n, 0);
  for (const Vertex v : a) {
    if (v >= n) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    if (seen[v]) throw Error(ErrorKind::InvalidArgument, "duplicate vertex in side");
    seen[v] = 1;
  }
  for (const Vertex v : b) {
    if (v >= n) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    if (seen[v] == 1) throw Error(ErrorKind::Overlap, "pair sides intersect", v);
    if (seen[v] == 2) throw Error(ErrorKind::InvalidArgument, "duplicate vertex in side");
    seen[v] = 2;
  }
}

/// Bipartite adjacency between two vertex lists, indexed by position.
struct BipartiteMatrix {
  std::size_t na = 0, nb = 0;
  std::vector<VertexSet> rows;  // rows[i] over B positions
  std::vector<VertexSet> cols;  // cols[j] over A positions
  std::size_t edges = 0;

  template <AdjacencyOracle G>
  BipartiteMatrix(const G& g, std::span<const Vertex> a, std::span<const Vertex> b)
      : na(a.size()), nb(b.size()), rows(na, VertexSet(nb)), cols(nb, VertexSet(na)) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        if (g.adjacent(a[i], b[j])) {
          rows[i].set(j);
          cols[j].set(i);
          ++edges;
        }
  }
};

inline Rational exact_density(const BipartiteMatrix& m, std::span<const std::size_t> ia,
                              std::span<const std::size_t> ib) {
  VertexSet mask(m.nb);
  for (const std::size_t j : ib) mask.set(j);
  std::int64_t e = 0;
  for (const std::size_t i : ia) e += static_cast<std::int64_t>((m.rows[i] & mask).count());
  return Rational(e, static_cast<std::int64_t>(ia.size() * ib.size()));
}

inline std::size_t min_subset(const Rational& eps, std::size_t n) {
  return static_cast<std::size_t>(std::max<std::int64_t>(1, ceil(eps * Rational(static_cast<std::int64_t>(n)))));
}

}  // namespace detail

/// Exact e(A,B)/(|A||B|).
template <AdjacencyOracle G>
Rational density(const G& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  detail::check_pair_sets(g.order(), a, b);
  std::int64_t e = 0;
  for (const Vertex u : a)
    for (const Vertex v : b)
      if (g.adjacent(u, v)) ++e;
  return Rational(e, static_cast<std::int64_t>(a.size() * b.size()));
}

/// Ground truth by enumeration of every U1 subset of A. For fixed U1 the
/// extreme densities over |U2| = k come from the k highest and k lowest
/// degrees into U1, so B needs no enumeration. The witness is a pair of
/// maximum deviation; ties go to the first U1 in bitmask order, then the
/// largest U2.
template <AdjacencyOracle G>
RegularityVerdict is_regular_exact(const G& g, std::span<const Vertex> a, std::span<const Vertex> b,
                                   const RegularityParams& params,
                                   std::size_t exact_bound = exact_regularity_bound) {
  params.validate();
  detail::check_pair_sets(g.order(), a, b);
  if (a.size() > exact_bound || b.size() > exact_bound || a.size() > 31)
    throw Error(ErrorKind::TooLargeForExact, "pair sides exceed the exact regularity bound");
  const std::size_t na = a.size(), nb = b.size();
  std::vector<std::uint32_t> col(nb, 0);
  std::int64_t total = 0;
  for (std::size_t j = 0; j < nb; ++j)
    for (std::size_t i = 0; i < na; ++i)
      if (g.adjacent(a[i], b[j])) {
        col[j] |= std::uint32_t{1} << i;
        ++total;
      }
  const Rational d_ab(total, static_cast<std::int64_t>(na * nb));
  const Rational limit = params.epsilon * params.p;
  const std::size_t ka = detail::min_subset(params.epsilon, na);
  const std::size_t kb = detail::min_subset(params.epsilon, nb);

  Rational best_dev(-1);
  std::uint32_t best_mask = 0;
  std::size_t best_k = 0;
  bool best_top = true;
  std::vector<std::size_t> order(nb);
  std::vector<int> c(nb);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << na); ++mask) {
    const auto size1 = static_cast<std::size_t>(std::popcount(mask));
    if (size1 < ka) continue;
    for (std::size_t j = 0; j < nb; ++j) c[j] = std::popcount(col[j] & mask);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return c[x] > c[y]; });
    std::vector<std::int64_t> prefix(nb + 1, 0);
    for (std::size_t t = 0; t < nb; ++t) prefix[t + 1] = prefix[t] + c[order[t]];
    for (std::size_t k = nb; k >= kb; --k) {
      const auto denom = static_cast<std::int64_t>(size1 * k);
      const Rational top = Rational(prefix[k], denom) - d_ab;
      const Rational bottom = d_ab - Rational(prefix[nb] - prefix[nb - k], denom);
      if (top > best_dev) {
        best_dev = top;
        best_mask = mask;
        best_k = k;
        best_top = true;
      }
      if (bottom > best_dev) {
        best_dev = bottom;
        best_mask = mask;
        best_k = k;
        best_top = false;
      }
      if (k == 0) break;
    }
  }

  RegularityVerdict verdict;
  if (best_dev <= limit) return verdict;
  verdict.regular = false;
  RegularityWitness w;
  for (std::size_t i = 0; i < na; ++i)
    if (best_mask >> i & 1U) w.u1.push_back(a[i]);
  for (std::size_t j = 0; j < nb; ++j) c[j] = std::popcount(col[j] & best_mask);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return c[x] > c[y]; });
  for (std::size_t t = 0; t < best_k; ++t) w.u2.push_back(b[best_top ? order[t] : order[nb - 1 - t]]);
  std::sort(w.u2.begin(), w.u2.end());
  w.deviation = best_dev;
  verdict.witness = std::move(w);
  return verdict;
}

struct EstimatorOptions {
  std::size_t local_search_steps = 64;  // single-vertex swaps from the worst sampled pair
};

/// One-sided surrogate: random pairs at the extremal sizes, then swap-based
/// hill climbing from the worst one. A reported witness is recomputed
/// exactly before it is returned; "regular" only means none was found.
template <AdjacencyOracle G>
RegularityVerdict estimate_regularity(const G& g, std::span<const Vertex> a, std::span<const Vertex> b,
                                      const RegularityParams& params, std::size_t samples, std::uint64_t seed,
                                      const EstimatorOptions& options = {}) {
  params.validate();
  detail::check_pair_sets(g.order(), a, b);
  const detail::BipartiteMatrix m(g, a, b);
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t ka = detail::min_subset(params.epsilon, na);
  const std::size_t kb = detail::min_subset(params.epsilon, nb);
  const double d_ab = static_cast<double>(m.edges) / (static_cast<double>(na) * static_cast<double>(nb));
  const double limit = params.epsilon.to_double() * params.p.to_double();
  const double area = static_cast<double>(ka) * static_cast<double>(kb);

  Rng rng(seed);
  std::vector<std::size_t> all_a(na), all_b(nb);
  std::iota(all_a.begin(), all_a.end(), 0);
  std::iota(all_b.begin(), all_b.end(), 0);

  std::vector<std::size_t> best_a, best_b;
  double best_dev = -1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto ia = rng.sample(all_a, ka);
    auto ib = rng.sample(all_b, kb);
    VertexSet mask(nb);
    for (const std::size_t j : ib) mask.set(j);
    std::size_t e = 0;
    for (const std::size_t i : ia) e += (m.rows[i] & mask).count();
    const double dev = std::fabs(static_cast<double>(e) / area - d_ab);
    if (dev > best_dev) {
      best_dev = dev;
      best_a = std::move(ia);
      best_b = std::move(ib);
    }
  }

  if (!best_a.empty() && options.local_search_steps > 0) {
    // Climb in the direction of the current deviation. r[i] = deg(a_i, U2),
    // c[j] = deg(b_j, U1); a swap replaces the member contributing least.
    std::vector<char> in_a(na, 0), in_b(nb, 0);
    for (const std::size_t i : best_a) in_a[i] = 1;
    for (const std::size_t j : best_b) in_b[j] = 1;
    std::vector<long> r(na, 0), c(nb, 0);
    long e = 0;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        if (m.rows[i].test(j)) {
          if (in_b[j]) r[i] += 1;
          if (in_a[i]) c[j] += 1;
          if (in_a[i] && in_b[j]) ++e;
        }
    const long sign = static_cast<double>(e) / area >= d_ab ? 1 : -1;
    for (std::size_t step = 0; step < options.local_search_steps; ++step) {
      // Best swap on each side: (worst member, best non-member).
      const auto pick = [&](const std::vector<char>& in, const std::vector<long>& score, std::size_t& out_v,
                            std::size_t& in_v) {
        long worst = 0, best = 0;
        bool has_in = false, has_out = false;
        for (std::size_t x = 0; x < in.size(); ++x) {
          const long s = sign * score[x];
          if (in[x]) {
            if (!has_in || s < worst) { worst = s; out_v = x; has_in = true; }
          } else if (!has_out || s > best) {
            best = s; in_v = x; has_out = true;
          }
        }
        return has_in && has_out ? best - worst : 0L;
      };
      std::size_t a_out = 0, a_in = 0, b_out = 0, b_in = 0;
      const long gain_a = pick(in_a, r, a_out, a_in);
      const long gain_b = pick(in_b, c, b_out, b_in);
      if (gain_a <= 0 && gain_b <= 0) break;
      if (gain_a >= gain_b) {
        in_a[a_out] = 0;
        in_a[a_in] = 1;
        e += sign * gain_a;
        for (std::size_t j = 0; j < nb; ++j)
          c[j] += static_cast<long>(m.rows[a_in].test(j)) - static_cast<long>(m.rows[a_out].test(j));
      } else {
        in_b[b_out] = 0;
        in_b[b_in] = 1;
        e += sign * gain_b;
        for (std::size_t i = 0; i < na; ++i)
          r[i] += static_cast<long>(m.cols[b_in].test(i)) - static_cast<long>(m.cols[b_out].test(i));
      }
    }
    const double dev = std::fabs(static_cast<double>(e) / area - d_ab);
    if (dev > best_dev) {
      best_dev = dev;
      best_a.clear();
      best_b.clear();
      for (std::size_t i = 0; i < na; ++i)
        if (in_a[i]) best_a.push_back(i);
      for (std::size_t j = 0; j < nb; ++j)
        if (in_b[j]) best_b.push_back(j);
    }
  }

  RegularityVerdict verdict;
  if (best_dev <= limit + regularity_tolerance) return verdict;
  const Rational dev = abs(detail::exact_density(m, best_a, best_b) -
                           Rational(static_cast<std::int64_t>(m.edges), static_cast<std::int64_t>(na * nb)));
  if (dev <= params.epsilon * params.p) return verdict;
  RegularityWitness w;
  for (const std::size_t i : best_a) w.u1.push_back(a[i]);
  for (const std::size_t j : best_b) w.u2.push_back(b[j]);
  std::sort(w.u1.begin(), w.u1.end());
  std::sort(w.u2.begin(), w.u2.end());
  w.deviation = dev;
  verdict.regular = false;
  verdict.witness = std::move(w);
  return verdict;
}

struct CleanupResult {
  std::vector<std::vector<Vertex>> sets;
  std::vector<std::size_t> original_sizes;
  std::size_t removed = 0;
};

namespace detail {

/// 2 * deg * den >= num * |V_j|, i.e. deg >= d |V_j| / 2.
inline bool meets_cleanup_threshold(std::size_t deg, const Rational& d, std::size_t original_size) {
  return static_cast<__int128>(2) * static_cast<__int128>(deg) * d.den() >=
         static_cast<__int128>(d.num()) * static_cast<__int128>(original_size);
}

}  // namespace detail

/// Deletes vertices with fewer than d|V_j|/2 neighbours in the surviving part
/// of V_j, for pattern edges ij, until none is left. |V_j| is the input size
/// throughout, so deletions only ever create more deletions and the loop is
/// monotone. The degree condition of the result is re-checked on return.
template <AdjacencyOracle G>
CleanupResult cleanup(const G& g, const Graph& pattern, const std::vector<std::vector<Vertex>>& sets,
                      const Rational& d) {
  if (sets.size() != pattern.order())
    throw Error(ErrorKind::InvalidArgument, "one set per pattern vertex required");
  if (d <= Rational(0)) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  const std::size_t k = sets.size();
  std::vector<std::int64_t> owner(g.order(), -1);
  for (std::size_t i = 0; i < k; ++i)
    for (const Vertex v : sets[i]) {
      if (v >= g.order()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
      if (owner[v] != -1) throw Error(ErrorKind::Overlap, "sets are not disjoint", v);
      owner[v] = static_cast<std::int64_t>(i);
    }

  // deg[i][x][t]: neighbours of sets[i][x] in the surviving part of the set
  // of the t-th pattern neighbour of i.
  std::vector<std::vector<std::vector<std::size_t>>> deg(k);
  std::vector<std::vector<char>> alive(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto nbrs = pattern.neighbors(static_cast<Vertex>(i));
    deg[i].assign(sets[i].size(), std::vector<std::size_t>(nbrs.size(), 0));
    alive[i].assign(sets[i].size(), 1);
    for (std::size_t x = 0; x < sets[i].size(); ++x)
      for (std::size_t t = 0; t < nbrs.size(); ++t)
        for (const Vertex w : sets[nbrs[t]])
          if (g.adjacent(sets[i][x], w)) ++deg[i][x][t];
  }
  const auto bad = [&](std::size_t i, std::size_t x) {
    const auto nbrs = pattern.neighbors(static_cast<Vertex>(i));
    for (std::size_t t = 0; t < nbrs.size(); ++t)
      if (!detail::meets_cleanup_threshold(deg[i][x][t], d, sets[nbrs[t]].size())) return true;
    return false;
  };

  std::vector<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t x = 0; x < sets[i].size(); ++x)
      if (bad(i, x)) {
        alive[i][x] = 0;
        queue.emplace_back(i, x);
      }
  CleanupResult out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [j, y] = queue[head];
    const Vertex v = sets[j][y];
    // v left V_j: update every vertex of a pattern-neighbour set of j.
    for (const Vertex i : pattern.neighbors(static_cast<Vertex>(j))) {
      const auto nbrs = pattern.neighbors(i);
      const auto t = static_cast<std::size_t>(std::find(nbrs.begin(), nbrs.end(), static_cast<Vertex>(j)) - nbrs.begin());
      for (std::size_t x = 0; x < sets[i].size(); ++x) {
        if (!g.adjacent(sets[i][x], v)) continue;
        --deg[i][x][t];
        if (alive[i][x] && bad(i, x)) {
          alive[i][x] = 0;
          queue.emplace_back(i, x);
        }
      }
    }
  }
  out.removed = queue.size();
  out.sets.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.original_sizes.push_back(sets[i].size());
    for (std::size_t x = 0; x < sets[i].size(); ++x)
      if (alive[i][x]) out.sets[i].push_back(sets[i][x]);
  }

  // Postcondition, from scratch.
  for (std::size_t i = 0; i < k; ++i)
    for (const Vertex j : pattern.neighbors(static_cast<Vertex>(i)))
      for (const Vertex v : out.sets[i]) {
        std::size_t cnt = 0;
        for (const Vertex w : out.sets[j])
          if (g.adjacent(v, w)) ++cnt;
        if (!detail::meets_cleanup_threshold(cnt, d, sets[j].size()))
          throw Error(ErrorKind::Internal, "cleanup postcondition violated", v);
      }
  for (std::size_t i = 0; i < k; ++i)
    if (out.sets[i].empty())
      throw Error(ErrorKind::Exhausted, "cleanup emptied set " + std::to_string(i));
  return out;
}

struct ProbeStatistics {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::optional<double> pass_fraction;  // empty when trials == 0
  double worst_deviation = 0.0;  // largest witness deviation seen
};

struct ProbeOptions {
  std::size_t samples = 200;
  EstimatorOptions estimator{};
};

/// Samples vertices v, w outside V1 u V2, random slices N_v of N(v,V1) and
/// N_w of N(w,V2), and checks that (N_v,V2) and (N_v,N_w) look
/// (eps',p)-regular with density (1 +- eps')d. Reports, does not assert.
template <AdjacencyOracle G>
ProbeStatistics inheritance_probe(const G& g, std::span<const Vertex> v1, std::span<const Vertex> v2,
                                  const Rational& d, std::size_t slice_size, std::size_t trials,
                                  const RegularityParams& params, std::uint64_t seed,
                                  const ProbeOptions& options = {}) {
  params.validate();
  detail::check_pair_sets(g.order(), v1, v2);
  ProbeStatistics stats;
  stats.trials = trials;
  if (trials == 0) return stats;
  if (slice_size == 0) throw Error(ErrorKind::InvalidArgument, "slice_size must be positive");
  std::vector<char> inside(g.order(), 0);
  for (const Vertex v : v1) inside[v] = 1;
  for (const Vertex v : v2) inside[v] = 1;
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < g.order(); ++v)
    if (!inside[v]) outside.push_back(v);
  if (outside.empty()) throw Error(ErrorKind::InvalidArgument, "no vertices outside V1 and V2");

  const double eps = params.epsilon.to_double();
  const double dd = d.to_double();
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, {tag::probe, t}));
    const Vertex v = outside[rng.below(outside.size())];
    const Vertex w = outside[rng.below(outside.size())];
    std::vector<Vertex> nv, nw;
    for (const Vertex x : v1)
      if (g.adjacent(v, x)) nv.push_back(x);
    for (const Vertex x : v2)
      if (g.adjacent(w, x)) nw.push_back(x);
    if (nv.size() < slice_size || nw.size() < slice_size)
      throw Error(ErrorKind::SliceTooLarge, "neighbourhood smaller than slice_size",
                  nv.size() < slice_size ? v : w);
    nv = rng.sample(std::move(nv), slice_size);
    nw = rng.sample(std::move(nw), slice_size);
    std::sort(nv.begin(), nv.end());
    std::sort(nw.begin(), nw.end());

    bool ok = true;
    for (const auto& other : {std::span<const Vertex>(v2), std::span<const Vertex>(nw)}) {
      const Rational dens = density(g, std::span<const Vertex>(nv), other);
      const double dv = dens.to_double();
      if (std::fabs(dv - dd) > eps * dd + regularity_tolerance) ok = false;
      const auto verdict = estimate_regularity(g, std::span<const Vertex>(nv), other, params, options.samples,
                                               derive_seed(seed, {tag::probe, t, 1}), options.estimator);
      if (!verdict.regular) {
        ok = false;
        stats.worst_deviation = std::max(stats.worst_deviation, verdict.witness->deviation.to_double());
      }
    }
    if (ok) ++stats.passed;
  }
  stats.pass_fraction = static_cast<double>(stats.passed) / static_cast<double>(trials);
  return stats;
}

}  // namespace sizeramsey
