#include <gtest/gtest.h>

#include <functional>

#include "sizeramsey/generators.hpp"
#include "sizeramsey/regularity.hpp"

using namespace sizeramsey;

namespace {

struct Pair {
  Graph g;
  std::vector<Vertex> a, b;
};

// A = 0..na-1, B = na..na+nb-1, each cross pair present with probability q.
Pair random_pair(std::size_t na, std::size_t nb, double q, std::uint64_t seed) {
  Pair p{Graph(na + nb), {}, {}};
  Rng rng(seed);
  for (Vertex i = 0; i < na; ++i) p.a.push_back(i);
  for (Vertex j = 0; j < nb; ++j) p.b.push_back(static_cast<Vertex>(na + j));
  for (const Vertex u : p.a)
    for (const Vertex v : p.b)
      if (rng.bernoulli(q)) p.g.add_edge(u, v);
  return p;
}

// Sparse background plus a planted block of density `block_q` on the first
// k vertices of each side.
Pair planted_pair(std::size_t n, std::size_t k, double q, double block_q, std::uint64_t seed) {
  Pair p{Graph(2 * n), {}, {}};
  Rng rng(seed);
  for (Vertex i = 0; i < n; ++i) {
    p.a.push_back(i);
    p.b.push_back(static_cast<Vertex>(n + i));
  }
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j)
      if (rng.bernoulli(i < k && j < k ? block_q : q)) p.g.add_edge(i, static_cast<Vertex>(n + j));
  return p;
}

std::int64_t cross_edges(const Graph& g, const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
  std::int64_t e = 0;
  for (const Vertex u : x)
    for (const Vertex v : y) e += g.adjacent(u, v);
  return e;
}

// Second enumerator: every U1 and every U2 above the size floor, densities
// counted cell by cell. Returns the largest deviation as num/den.
struct MaxDeviation {
  std::int64_t num = -1, den = 1;
};

MaxDeviation enumerate_all(const Pair& p, std::int64_t eps_num, std::int64_t eps_den) {
  const std::size_t na = p.a.size(), nb = p.b.size();
  const auto floor_size = [&](std::size_t n) {
    return static_cast<int>((eps_num * static_cast<std::int64_t>(n) + eps_den - 1) / eps_den);
  };
  const int ka = std::max(1, floor_size(na)), kb = std::max(1, floor_size(nb));
  std::vector<std::uint32_t> row(na, 0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (p.g.adjacent(p.a[i], p.b[j])) row[i] |= 1u << j;
  std::int64_t total = 0;
  for (const auto r : row) total += std::popcount(r);
  const std::int64_t all = static_cast<std::int64_t>(na * nb);
  MaxDeviation best;
  std::vector<std::uint32_t> b_masks;
  for (std::uint32_t m2 = 1; m2 < (1u << nb); ++m2)
    if (std::popcount(m2) >= kb) b_masks.push_back(m2);
  for (std::uint32_t m1 = 1; m1 < (1u << na); ++m1) {
    const int s1 = std::popcount(m1);
    if (s1 < ka) continue;
    for (const std::uint32_t m2 : b_masks) {
      std::int64_t e = 0;
      for (std::size_t i = 0; i < na; ++i)
        if (m1 >> i & 1) e += std::popcount(row[i] & m2);
      const std::int64_t area = static_cast<std::int64_t>(s1) * std::popcount(m2);
      // |e/area - total/all| = |e*all - total*area| / (area*all)
      const std::int64_t num = std::abs(e * all - total * area), den = area * all;
      if (best.num < 0 || static_cast<__int128>(num) * best.den > static_cast<__int128>(best.num) * den)
        best = {num, den};
    }
  }
  return best;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Internal;
}

RegularityParams params(Rational eps, Rational p) { return {eps, p, Rational(0)}; }

}  // namespace

TEST(Density, Examples) {
  Graph g(4);
  const std::vector<Vertex> a{0, 1}, b{2, 3};
  EXPECT_EQ(density(g, std::span<const Vertex>(a), std::span<const Vertex>(b)), Rational(0));
  g.add_edge(0, 2);
  EXPECT_EQ(density(g, std::span<const Vertex>(a), std::span<const Vertex>(b)), Rational(1, 4));
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  EXPECT_EQ(density(g, std::span<const Vertex>(a), std::span<const Vertex>(b)), Rational(1));
}

TEST(Density, Errors) {
  const Graph g(4);
  const std::vector<Vertex> a{0, 1}, b{1, 2}, none;
  EXPECT_EQ(kind_of([&] { density(g, std::span<const Vertex>(a), std::span<const Vertex>(b)); }), ErrorKind::Overlap);
  EXPECT_EQ(kind_of([&] { density(g, std::span<const Vertex>(a), std::span<const Vertex>(none)); }),
            ErrorKind::EmptySide);
}

TEST(ExactRegularity, CompletePairIsRegular) {
  const Pair p = random_pair(8, 9, 1.0, 1);
  for (const auto eps : {Rational(1, 10), Rational(1, 3), Rational(1)})
    EXPECT_TRUE(is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b),
                                 params(eps, Rational(1, 100)))
                    .regular);
}

TEST(ExactRegularity, IsolatedVertexWitness) {
  Pair p = random_pair(6, 6, 1.0, 1);
  for (const Vertex v : p.b) p.g.remove_edge(0, v);
  const auto verdict = is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b),
                                        params(Rational(1, 6), Rational(1, 10)));
  ASSERT_FALSE(verdict.regular);
  ASSERT_TRUE(verdict.witness);
  EXPECT_EQ(verdict.witness->u1, std::vector<Vertex>{0});
  EXPECT_EQ(verdict.witness->u2, p.b);
  EXPECT_EQ(verdict.witness->deviation, Rational(30, 36));
}

TEST(ExactRegularity, MatchesIndependentEnumerator) {
  int irregular = 0, regular = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const double q = seed < 4 ? 0.5 : 0.97;
    const Pair p = random_pair(12, 12, q, seed);
    const auto prm = params(Rational(2, 5), Rational(1, 2));
    const auto verdict = is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), prm);
    const auto oracle = enumerate_all(p, 2, 5);
    const Rational worst(oracle.num, oracle.den);
    EXPECT_EQ(verdict.regular, worst <= prm.epsilon * prm.p) << "seed " << seed;
    if (!verdict.regular) {
      ++irregular;
      EXPECT_EQ(verdict.witness->deviation, worst);
      const Rational d_w(cross_edges(p.g, verdict.witness->u1, verdict.witness->u2),
                         static_cast<std::int64_t>(verdict.witness->u1.size() * verdict.witness->u2.size()));
      const Rational d_all(cross_edges(p.g, p.a, p.b), 144);
      EXPECT_EQ(abs(d_w - d_all), worst);
    } else {
      ++regular;
    }
  }
  EXPECT_GT(irregular, 0);
  EXPECT_GT(regular, 0);
}

TEST(ExactRegularity, MatchesEnumeratorOnUnevenSides) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t na = 3 + seed % 6, nb = 2 + (seed * 7) % 8;
    const Pair p = random_pair(na, nb, 0.3 + 0.015 * static_cast<double>(seed), seed + 77);
    const auto prm = params(Rational(1, 4), Rational(1, 2));
    const auto verdict = is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), prm);
    const auto oracle = enumerate_all(p, 1, 4);
    const Rational worst(oracle.num, oracle.den);
    EXPECT_EQ(verdict.regular, worst <= prm.epsilon * prm.p) << "seed " << seed;
    if (!verdict.regular) EXPECT_EQ(verdict.witness->deviation, worst);
  }
}

TEST(ExactRegularity, TooLarge) {
  const Pair p = random_pair(17, 4, 0.5, 3);
  EXPECT_EQ(kind_of([&] {
              is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), RegularityParams{});
            }),
            ErrorKind::TooLargeForExact);
}

TEST(Slicing, HoldsOnSmallFixtures) {
  const struct {
    Rational e1, e2;
  } cases[] = {{Rational(1, 10), Rational(1, 2)}, {Rational(1, 5), Rational(2, 5)}};
  std::size_t fixtures = 0;
  for (const auto& c : cases)
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      const std::size_t na = 3 + seed % 4, nb = 3 + (seed / 4) % 4;
      const double q = seed % 3 == 0 ? 1.0 : 0.9 + 0.1 * static_cast<double>(seed % 2);
      const Pair p = random_pair(na, nb, q, seed);
      const Rational scale(1);
      if (!is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), params(c.e1, scale))
               .regular)
        continue;
      ++fixtures;
      const auto need_a = ceil(c.e2 * Rational(static_cast<std::int64_t>(na)));
      const auto need_b = ceil(c.e2 * Rational(static_cast<std::int64_t>(nb)));
      for (std::uint32_t ma = 1; ma < (1u << na); ++ma) {
        if (std::popcount(ma) < need_a) continue;
        for (std::uint32_t mb = 1; mb < (1u << nb); ++mb) {
          if (std::popcount(mb) < need_b) continue;
          std::vector<Vertex> xa, yb;
          for (std::size_t i = 0; i < na; ++i)
            if (ma >> i & 1) xa.push_back(p.a[i]);
          for (std::size_t j = 0; j < nb; ++j)
            if (mb >> j & 1) yb.push_back(p.b[j]);
          EXPECT_TRUE(is_regular_exact(p.g, std::span<const Vertex>(xa), std::span<const Vertex>(yb),
                                       params(c.e1 / c.e2, scale))
                          .regular);
        }
      }
    }
  EXPECT_GT(fixtures, 50u);
}

TEST(Estimator, CompletePairAlwaysRegular) {
  const Pair p = random_pair(30, 40, 1.0, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_TRUE(estimate_regularity(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b),
                                    params(Rational(1, 10), Rational(1, 100)), 100, seed)
                    .regular);
}

TEST(Estimator, WitnessesAreSound) {
  std::size_t witnesses = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Pair p = random_pair(5 + seed % 30, 5 + (seed * 3) % 30, 0.1 + 0.002 * static_cast<double>(seed), seed);
    const auto prm = params(Rational(1 + static_cast<std::int64_t>(seed % 4), 10), Rational(1, 2));
    const auto v = estimate_regularity(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), prm, 50, seed);
    if (v.regular) continue;
    ++witnesses;
    const auto& w = *v.witness;
    EXPECT_GE(static_cast<std::int64_t>(w.u1.size()), ceil(prm.epsilon * Rational(static_cast<std::int64_t>(p.a.size()))));
    EXPECT_GE(static_cast<std::int64_t>(w.u2.size()), ceil(prm.epsilon * Rational(static_cast<std::int64_t>(p.b.size()))));
    const Rational dw(cross_edges(p.g, w.u1, w.u2), static_cast<std::int64_t>(w.u1.size() * w.u2.size()));
    const Rational da(cross_edges(p.g, p.a, p.b), static_cast<std::int64_t>(p.a.size() * p.b.size()));
    EXPECT_EQ(abs(dw - da), w.deviation);
    EXPECT_GT(w.deviation, prm.epsilon * prm.p);
  }
  EXPECT_GT(witnesses, 50u);
}

TEST(Estimator, FindsPlantedViolation) {
  std::size_t found = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Pair p = planted_pair(60, 12, 0.2, 0.7, seed);
    const auto v = estimate_regularity(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b),
                                       params(Rational(1, 5), Rational(1, 5)), 10000, seed);
    found += !v.regular;
  }
  EXPECT_GE(found, 95u);
}

TEST(Cleanup, CompleteSetsUntouched) {
  const Graph g = named_graph({NamedGraphId::Complete, 12});
  const Graph pattern = named_graph({NamedGraphId::Cycle, 3});
  const std::vector<std::vector<Vertex>> sets{{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}};
  const auto r = cleanup(g, pattern, sets, Rational(1));
  EXPECT_EQ(r.removed, 0u);
  EXPECT_EQ(r.sets, sets);
}

TEST(Cleanup, RemovesIsolatedVertexOnly) {
  Pair p = random_pair(6, 6, 1.0, 1);
  for (const Vertex v : p.b) p.g.remove_edge(2, v);
  const Graph pattern = named_graph({NamedGraphId::Path, 2});
  const auto r = cleanup(p.g, pattern, {p.a, p.b}, Rational(1, 2));
  EXPECT_EQ(r.removed, 1u);
  EXPECT_EQ(r.sets[0], (std::vector<Vertex>{0, 1, 3, 4, 5}));
  EXPECT_EQ(r.sets[1], p.b);
  EXPECT_EQ(r.original_sizes, (std::vector<std::size_t>{6, 6}));
}

TEST(Cleanup, RandomPairLosesLittle) {
  const Graph pattern = named_graph({NamedGraphId::Path, 2});
  const Rational eps(1, 5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Pair p = random_pair(200, 200, 0.05, seed);
    const Rational d = density(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b));
    const auto r = cleanup(p.g, pattern, {p.a, p.b}, d);
    for (int side = 0; side < 2; ++side) {
      const double lost = 1.0 - static_cast<double>(r.sets[side].size()) / 200.0;
      EXPECT_LE(lost, eps.to_double()) << "seed " << seed;
    }
  }
}

TEST(Cleanup, PostconditionAndIdempotence) {
  const Graph pattern = named_graph({NamedGraphId::Cycle, 5});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = gnp_sample({250, 0.15, seed});
    std::vector<std::vector<Vertex>> sets(5);
    for (Vertex v = 0; v < 250; ++v) sets[v % 5].push_back(v);
    const Rational d(3, 20);
    CleanupResult r;
    try {
      r = cleanup(g, pattern, sets, d);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Exhausted);
      continue;
    }
    for (Vertex i = 0; i < 5; ++i)
      for (const Vertex j : pattern.neighbors(i))
        for (const Vertex v : r.sets[i]) {
          std::size_t deg = 0;
          for (const Vertex w : r.sets[j]) deg += g.adjacent(v, w);
          EXPECT_GE(Rational(2 * static_cast<std::int64_t>(deg)), d * Rational(static_cast<std::int64_t>(sets[j].size())));
        }
    const auto again = cleanup(g, pattern, r.sets, d);
    EXPECT_EQ(again.sets, r.sets);
    EXPECT_EQ(again.removed, 0u);
  }
}

TEST(Cleanup, Errors) {
  const Graph g = named_graph({NamedGraphId::Path, 4});
  const Graph pattern = named_graph({NamedGraphId::Path, 2});
  EXPECT_EQ(kind_of([&] { cleanup(g, pattern, {{0}, {2}}, Rational(1)); }), ErrorKind::Exhausted);
  EXPECT_EQ(kind_of([&] { cleanup(g, pattern, {{0, 1}, {1}}, Rational(1)); }), ErrorKind::Overlap);
  EXPECT_EQ(kind_of([&] { cleanup(g, pattern, {{0}}, Rational(1)); }), ErrorKind::InvalidArgument);
}

TEST(InheritanceProbe, CompleteHostPassesEverything) {
  const Graph g = named_graph({NamedGraphId::Complete, 60});
  std::vector<Vertex> v1, v2;
  for (Vertex i = 0; i < 20; ++i) {
    v1.push_back(i);
    v2.push_back(20 + i);
  }
  const auto s = inheritance_probe(g, std::span<const Vertex>(v1), std::span<const Vertex>(v2), Rational(1), 10, 20,
                                   params(Rational(1, 4), Rational(1)), 5);
  ASSERT_TRUE(s.pass_fraction);
  EXPECT_EQ(*s.pass_fraction, 1.0);
  EXPECT_EQ(s.passed, 20u);
}

TEST(InheritanceProbe, ZeroTrialsLeavesFractionUndefined) {
  const Graph g = named_graph({NamedGraphId::Complete, 10});
  const std::vector<Vertex> v1{0, 1}, v2{2, 3};
  const auto s = inheritance_probe(g, std::span<const Vertex>(v1), std::span<const Vertex>(v2), Rational(1), 1, 0,
                                   RegularityParams{}, 1);
  EXPECT_EQ(s.trials, 0u);
  EXPECT_FALSE(s.pass_fraction);
}

TEST(InheritanceProbe, SliceTooLarge) {
  const Graph g = named_graph({NamedGraphId::Complete, 10});
  const std::vector<Vertex> v1{0, 1}, v2{2, 3};
  EXPECT_EQ(kind_of([&] {
              inheritance_probe(g, std::span<const Vertex>(v1), std::span<const Vertex>(v2), Rational(1), 3, 1,
                                RegularityParams{}, 1);
            }),
            ErrorKind::SliceTooLarge);
}

TEST(InheritanceProbe, RandomHostAtDeskScale) {
  const std::size_t n = 50000;
  const ImplicitGnp g({n, 0.05, 2024});
  Rng rng(7);
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  const auto picked = rng.sample(all, 10000);
  std::vector<Vertex> v1(picked.begin(), picked.begin() + 5000), v2(picked.begin() + 5000, picked.end());
  std::sort(v1.begin(), v1.end());
  std::sort(v2.begin(), v2.end());
  const Rational p(1, 20);
  const std::size_t slice = 5000 * 5 / 100 / 4;
  const auto s = inheritance_probe(g, std::span<const Vertex>(v1), std::span<const Vertex>(v2), p, slice, 200,
                                   params(Rational(1, 4), p), 11);
  ASSERT_TRUE(s.pass_fraction);
  RecordProperty("pass_fraction", std::to_string(*s.pass_fraction));
  std::cout << "pass fraction " << *s.pass_fraction << " worst deviation " << s.worst_deviation << '\n';
  EXPECT_GE(*s.pass_fraction, 0.9);
}
