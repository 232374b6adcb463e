// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sizeramsey/decompose.hpp"
#include "sizeramsey/experiment.hpp"
#include "sizeramsey/generators.hpp"
#include "sizeramsey/pipeline.hpp"
#include "sizeramsey/ramsey.hpp"
#include "sizeramsey/regularity.hpp"

using namespace sizeramsey;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int precision = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << x;
  return os.str();
}

Graph named(NamedGraphId id, std::size_t k = 0) { return named_graph({id, k}); }

// Every injection V(H) -> V(G), no pruning beyond partial edge checks.
bool naive_contains(const Graph& g, const Graph& h) {
  const std::size_t k = h.order(), n = g.order();
  if (k > n) return false;
  std::vector<Vertex> img;
  std::vector<char> used(n, 0);
  std::function<bool()> rec = [&]() -> bool {
    const std::size_t i = img.size();
    if (i == k) return true;
    for (Vertex x = 0; x < n; ++x) {
      if (used[x]) continue;
      bool ok = true;
      for (Vertex j = 0; j < i && ok; ++j)
        if (h.adjacent(static_cast<Vertex>(i), j) && !g.adjacent(x, img[j])) ok = false;
      if (!ok) continue;
      used[x] = 1;
      img.push_back(x);
      if (rec()) return true;
      img.pop_back();
      used[x] = 0;
    }
    return false;
  };
  return rec();
}

bool avoids_both(const Graph& g, const EdgeColoring& c, const Graph& h) {
  return !naive_contains(color_class(g, c, Color::Red), h) && !naive_contains(color_class(g, c, Color::Blue), h);
}

bool is_copy(const Graph& g, const Graph& h, const std::vector<Vertex>& img) {
  if (img.size() != h.order()) return false;
  std::vector<Vertex> s = img;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
  for (const auto& [u, v] : h.edges())
    if (!g.adjacent(img[u], img[v])) return false;
  return true;
}

bool is_valid_image(const Graph& g, const Graph& h, const EmbeddingState& s) {
  std::vector<Vertex> img;
  for (const auto x : s.image) {
    if (x < 0 || static_cast<std::size_t>(x) >= g.order()) return false;
    img.push_back(static_cast<Vertex>(x));
  }
  return is_copy(g, h, img);
}

// 1 ------------------------------------------------------------------------

Outcome decomposition_soundness() {
  const auto start = Clock::now();
  std::size_t graphs = 0, skipped = 0, violations = 0;
  for (std::size_t n = 6; n <= 16; n += 2)
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const Graph h = random_cubic(n, derive_seed(1, {n, s}));
      if (!is_connected(h) || is_k4(h)) {
        ++skipped;
        continue;
      }
      ++graphs;
      violations += validate_decomposition(h, decompose_cubic(h), 4).size();
    }
  for (const auto id : {NamedGraphId::K33, NamedGraphId::Petersen, NamedGraphId::Prism3, NamedGraphId::Cube,
                        NamedGraphId::Heawood, NamedGraphId::MoebiusKantor}) {
    const Graph h = named(id);
    ++graphs;
    violations += validate_decomposition(h, decompose_cubic(h), 4).size();
  }
  const double t = seconds_since(start);
  return {violations == 0 && t < 60.0, std::to_string(graphs) + " graphs (" + std::to_string(skipped) +
                                           " disconnected/K4 samples skipped), " + std::to_string(violations) +
                                           " violations, " + fmt(t) + " s"};
}

// 2 ------------------------------------------------------------------------

Outcome triangle_free_decomposition() {
  struct Case {
    NamedGraphId id;
    bool bipartite;
    std::size_t min_cycle;
  };
  std::size_t violations = 0, cycles = 0, shortest = 0;
  bool first = true;
  for (const Case c : {Case{NamedGraphId::Petersen, false, 5}, Case{NamedGraphId::Heawood, true, 6},
                       Case{NamedGraphId::MoebiusKantor, true, 6}}) {
    const Graph h = named(c.id);
    const auto d = decompose_triangle_free(h, c.bipartite);
    violations += validate_decomposition(h, d, c.min_cycle).size();
    for (const auto& b : d.blocks) {
      if (b.kind != BlockKind::Cycle) continue;
      ++cycles;
      if (b.vertices.size() < c.min_cycle) ++violations;
      shortest = first ? b.vertices.size() : std::min(shortest, b.vertices.size());
      first = false;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations, " + std::to_string(cycles) +
                               " cycles, shortest " + std::to_string(shortest)};
}

// 3 ------------------------------------------------------------------------

Outcome exact_ramsey() {
  const Graph k3 = named(NamedGraphId::Complete, 3);
  auto t0 = Clock::now();
  const auto k6 = is_ramsey_exhaustive(named(NamedGraphId::Complete, 6), k3);
  const double t6 = seconds_since(t0);
  t0 = Clock::now();
  const Graph k5g = named(NamedGraphId::Complete, 5);
  const auto k5 = is_ramsey_exhaustive(k5g, k3);
  const double t5 = seconds_since(t0);
  const bool cert = !k5.arrows && k5.certificate && avoids_both(k5g, *k5.certificate, k3);
  const bool pass = k6.arrows && cert && t6 < 5.0 && t5 < 5.0;
  return {pass, std::string("K6->K3 ") + (k6.arrows ? "proved" : "NOT proved") + " in " + fmt(t6, 3) + " s; K5 certificate " +
                    (cert ? "verified" : "missing/invalid") + " in " + fmt(t5, 3) + " s"};
}

// 4 ------------------------------------------------------------------------

Outcome oracle_agreement() {
  const std::vector<Graph> patterns{named(NamedGraphId::Complete, 3), named(NamedGraphId::Path, 3),
                                    named(NamedGraphId::Path, 4),     named(NamedGraphId::Cycle, 4),
                                    named(NamedGraphId::Cycle, 5),    graph_from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}),
                                    named(NamedGraphId::Path, 5),     graph_from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}})};
  std::size_t witnesses = 0, contradictions = 0, mono_checks = 0, mono_disagree = 0, arrowing = 0;
  const auto start = Clock::now();
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t v = 5 + s % 6;
    Graph g = gnp_sample({v, 0.35 + 0.05 * static_cast<double>(s % 8), derive_seed(4, {s})});
    if (g.size() > 20) {
      const auto edges = g.edges();
      for (std::size_t i = 20; i < edges.size(); ++i) g.remove_edge(edges[i].first, edges[i].second);
    }
    if (g.size() == 0) g.add_edge(0, 1);
    const Graph& h = patterns[s % patterns.size()];
    const auto exact = is_ramsey_exhaustive(g, h);
    arrowing += exact.arrows;
    if (const auto w = adversarial_coloring_search(g, h, 5000, s)) {
      ++witnesses;
      if (exact.arrows || !avoids_both(g, *w, h)) ++contradictions;
    }
    const auto col = random_coloring(g, derive_seed(4, {s, 1}));
    for (const Color c : {Color::Red, Color::Blue}) {
      const Graph cls = color_class(g, col, c);
      const bool expected = naive_contains(cls, h);
      const auto got = mono_subgraph_search(g, col, h, c);
      ++mono_checks;
      if (got.has_value() != expected || (got && !is_copy(cls, h, *got))) ++mono_disagree;
    }
  }
  return {contradictions == 0 && mono_disagree == 0,
          "200 fixtures (" + std::to_string(arrowing) + " arrowing), " + std::to_string(witnesses) +
              " adversarial witnesses, " + std::to_string(contradictions) + " contradictions; mono search " +
              std::to_string(mono_checks - mono_disagree) + "/" + std::to_string(mono_checks) +
              " agree with naive; " + fmt(seconds_since(start)) + " s"};
}

// 5 ------------------------------------------------------------------------

Outcome embedding_validity(const std::vector<ExperimentRecord>& scan) {
  std::size_t runs = 0, successes = 0, invalid = 0, unexpected = 0;
  const auto attempt = [&](const std::function<std::optional<EmbeddingState>()>& run,
                           const std::function<bool(const EmbeddingState&)>& check) {
    ++runs;
    try {
      if (const auto e = run()) {
        ++successes;
        if (!check(*e)) ++invalid;
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Internal) ++unexpected;
    } catch (...) {
      ++unexpected;
    }
  };
  const std::vector<std::string> patterns{"C5", "C8", "C20", "Petersen", "Heawood", "K4", "cubic:20", "cubic:40"};
  for (std::uint64_t s = 0; s < 24; ++s) {
    const auto spec = parse_pattern(patterns[s % patterns.size()]);
    const Graph h = spec.sample(derive_seed(5, {s}));
    const Graph host = gnp_sample({3000, 0.12 + 0.01 * static_cast<double>(s % 6), derive_seed(5, {s, 1})});
    attempt([&] { return embed_into_host(host, h, edge_density(host), s).embedding; },
            [&](const EmbeddingState& e) { return is_valid_image(host, h, e) && verify_embedding(host, h, e); });
    const auto col = random_coloring(host, s);
    std::optional<Color> colour;
    attempt(
        [&] {
          const auto r = ramsey_pipeline(host, col, h, s);
          colour = r.color;
          return r.embedding;
        },
        [&](const EmbeddingState& e) { return colour && is_valid_image(color_class(host, col, *colour), h, e); });
  }
  std::size_t scan_internal = 0, scan_success = 0;
  for (const auto& r : scan) {
    scan_success += r.success;
    scan_internal += r.failure_kind == to_string(ErrorKind::Internal);
  }
  return {invalid == 0 && unexpected == 0 && scan_internal == 0,
          std::to_string(successes) + "/" + std::to_string(runs) + " direct runs succeeded, " +
              std::to_string(invalid) + " invalid, " + std::to_string(unexpected) + " internal/foreign exceptions; scan: " +
              std::to_string(scan_success) + " successes, " + std::to_string(scan_internal) +
              " verification failures"};
}

// 6 ------------------------------------------------------------------------

struct Pair {
  Graph g;
  std::vector<Vertex> a, b;
};

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

std::int64_t cross_edges(const Graph& g, const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
  std::int64_t e = 0;
  for (const Vertex u : x)
    for (const Vertex v : y) e += g.adjacent(u, v);
  return e;
}

std::vector<Vertex> pick(const std::vector<Vertex>& from, std::uint32_t mask) {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (mask >> i & 1) out.push_back(from[i]);
  return out;
}

Outcome regularity_coherence() {
  const auto start = Clock::now();
  struct Eps {
    Rational e1, e2;
  };
  const Rational one(1);
  std::size_t fixtures = 0, slices_exhaustive = 0, slices_sampled = 0, slice_failures = 0;
  for (const Eps c : {Eps{Rational(1, 10), Rational(1, 2)}, Eps{Rational(1, 5), Rational(2, 5)}})
    for (std::uint64_t s = 0; s < 400; ++s) {
      const std::size_t na = 4 + s % 11, nb = 4 + (s / 11) % 11;
      const double q = s % 4 == 0 ? 1.0 : 0.8 + 0.02 * static_cast<double>(s % 10);
      const Pair p = random_pair(na, nb, q, derive_seed(6, {s}));
      const RegularityParams prm{c.e1, one, Rational(0)};
      if (!is_regular_exact(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), prm).regular) continue;
      ++fixtures;
      const RegularityParams sliced{c.e1 / c.e2, one, Rational(0)};
      const auto need_a = ceil(c.e2 * Rational(static_cast<std::int64_t>(na)));
      const auto need_b = ceil(c.e2 * Rational(static_cast<std::int64_t>(nb)));
      const auto check = [&](std::uint32_t ma, std::uint32_t mb) {
        const auto x = pick(p.a, ma), y = pick(p.b, mb);
        if (!is_regular_exact(p.g, std::span<const Vertex>(x), std::span<const Vertex>(y), sliced).regular)
          ++slice_failures;
      };
      if (na <= 8 && nb <= 8) {
        for (std::uint32_t ma = 1; ma < (1u << na); ++ma) {
          if (std::popcount(ma) < need_a) continue;
          for (std::uint32_t mb = 1; mb < (1u << nb); ++mb) {
            if (std::popcount(mb) < need_b) continue;
            check(ma, mb);
            ++slices_exhaustive;
          }
        }
      } else {
        Rng rng(derive_seed(6, {s, 1}));
        for (int t = 0; t < 300; ++t) {
          std::uint32_t ma = 0, mb = 0;
          while (std::popcount(ma) < need_a) ma = static_cast<std::uint32_t>(rng.below(1u << na));
          while (std::popcount(mb) < need_b) mb = static_cast<std::uint32_t>(rng.below(1u << nb));
          check(ma, mb);
          ++slices_sampled;
        }
      }
    }

  std::size_t est_checks = 0, witnesses = 0, unsound = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const std::size_t na = 5 + s % 26, nb = 5 + (s / 26) % 26;
    const Pair p = random_pair(na, nb, 0.05 + 0.9 * static_cast<double>(s % 97) / 96.0, derive_seed(6, {s, 2}));
    const RegularityParams prm{Rational(1 + static_cast<std::int64_t>(s % 4), 10), Rational(1, 1 + static_cast<std::int64_t>(s % 3)),
                               Rational(0)};
    const auto v = estimate_regularity(p.g, std::span<const Vertex>(p.a), std::span<const Vertex>(p.b), prm, 20, s);
    ++est_checks;
    if (v.regular) continue;
    ++witnesses;
    const auto& w = *v.witness;
    const Rational dw(cross_edges(p.g, w.u1, w.u2), static_cast<std::int64_t>(w.u1.size() * w.u2.size()));
    const Rational da(cross_edges(p.g, p.a, p.b), static_cast<std::int64_t>(na * nb));
    const bool sizes = static_cast<std::int64_t>(w.u1.size()) >= ceil(prm.epsilon * Rational(static_cast<std::int64_t>(na))) &&
                       static_cast<std::int64_t>(w.u2.size()) >= ceil(prm.epsilon * Rational(static_cast<std::int64_t>(nb)));
    if (!sizes || abs(dw - da) != w.deviation || !(w.deviation > prm.epsilon * prm.p)) ++unsound;
  }

  std::size_t cleanups = 0, post_failures = 0, exhausted = 0;
  const std::vector<Graph> cell_patterns{named(NamedGraphId::Cycle, 5), named(NamedGraphId::Path, 2),
                                         named(NamedGraphId::Complete, 4), named(NamedGraphId::Petersen)};
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Graph& pat = cell_patterns[s % cell_patterns.size()];
    const std::size_t n = 60 * pat.order();
    const Graph g = gnp_sample({n, 0.05 + 0.01 * static_cast<double>(s % 20), derive_seed(6, {s, 3})});
    std::vector<std::vector<Vertex>> sets(pat.order());
    for (Vertex v = 0; v < n; ++v) sets[v % pat.order()].push_back(v);
    const Rational d = Rational(1 + static_cast<std::int64_t>(s % 5), 20);
    ++cleanups;
    CleanupResult r;
    try {
      r = cleanup(g, pat, sets, d);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Exhausted) ++post_failures;
      ++exhausted;
      continue;
    }
    for (Vertex i = 0; i < pat.order(); ++i)
      for (const Vertex j : pat.neighbors(i))
        for (const Vertex v : r.sets[i]) {
          std::int64_t deg = 0;
          for (const Vertex w : r.sets[j]) deg += g.adjacent(v, w);
          if (Rational(2 * deg) < d * Rational(static_cast<std::int64_t>(sets[j].size()))) ++post_failures;
        }
  }

  return {slice_failures == 0 && unsound == 0 && post_failures == 0 && fixtures > 0,
          "slicing: " + std::to_string(fixtures) + " regular fixtures, " + std::to_string(slices_exhaustive) +
              " slices exhaustive (sides <= 8), " + std::to_string(slices_sampled) + " sampled (sides 9-14), " +
              std::to_string(slice_failures) + " failures; estimator: " + std::to_string(witnesses) + " witnesses in " +
              std::to_string(est_checks) + " checks, " + std::to_string(unsound) + " unsound; cleanup: " +
              std::to_string(cleanups) + " runs (" + std::to_string(exhausted) + " exhausted), " +
              std::to_string(post_failures) + " postcondition failures; " + fmt(seconds_since(start)) + " s"};
}

// 7-9 ----------------------------------------------------------------------

ExperimentConfig threshold_config(std::size_t threads) {
  ExperimentConfig c;
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{{"n", "2000,4000"},
                                                                             {"p-exp", "0.5:4:8:log,-0.4"},
                                                                             {"pattern", "cubic:40"},
                                                                             {"trials", "20"},
                                                                             {"seed", "1"},
                                                                             {"mode", "embed-only"}})
    apply_setting(c, k, v);
  c.threads = threads;
  c.validate();
  return c;
}

Outcome threshold_behaviour(const ExperimentConfig& c, const std::vector<ExperimentRecord>& rows, double secs) {
  bool pass = secs < 15 * 60;
  std::ostringstream detail;
  for (const std::size_t n : c.n_list) {
    const std::size_t k = c.p_grid.values.size();
    std::vector<std::size_t> wins(k, 0), trials(k, 0);
    for (const auto& r : rows)
      if (r.n == n) {
        ++trials[r.p_index];
        wins[r.p_index] += r.success;
      }
    std::size_t violations = 0;
    for (std::size_t i = 1; i < k; ++i) violations += wins[i] * trials[i - 1] < wins[i - 1] * trials[i];
    const double top = static_cast<double>(wins.back()) / static_cast<double>(trials.back());
    pass = pass && violations <= 1 && top >= 0.9;
    detail << "n=" << n << " successes";
    for (const auto w : wins) detail << ' ' << w;
    detail << " (of " << c.trials << "), " << violations << " violations, top rate " << fmt(top) << "; ";
  }
  detail << fmt(secs, 1) << " s";
  return {pass, detail.str()};
}

Outcome occupancy_decay(const std::vector<ExperimentRecord>& rows, std::size_t top_index) {
  std::size_t successes = 0, decaying = 0;
  for (const auto& r : rows) {
    if (r.p_index != top_index || !r.success) continue;
    ++successes;
    bool ok = true;
    for (std::size_t j = 0; j + 1 < r.bucket_trace.size(); ++j)
      if (r.bucket_trace[j] > 0 && 2 * r.bucket_trace[j + 1] > r.bucket_trace[j]) ok = false;
    decaying += ok;
  }
  const bool pass = successes > 0 && 10 * decaying >= 9 * successes;
  return {pass, std::to_string(decaying) + "/" + std::to_string(successes) +
                    " successful top-of-grid runs show factor-2 decay (need 90%)"};
}

Outcome determinism(const std::string& csv) {
  const auto start = Clock::now();
  std::ostringstream again;
  write_scan_csv(again, threshold_scan(threshold_config(2)));
  const bool csv_same = again.str() == csv;
  std::size_t same = 0, runs = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Graph h = random_cubic(30, s);
    const auto once = [&] {
      const Graph host = gnp_sample({3000, 0.15, derive_seed(9, {s})});
      try {
        return embed_into_host(host, h, edge_density(host), s).embedding;
      } catch (const Error&) {
        return std::optional<EmbeddingState>{};
      }
    };
    ++runs;
    same += once() == once();
  }
  return {csv_same && same == runs, std::string("scan CSV (threads 1 vs 2) ") + (csv_same ? "byte-identical" : "DIFFERS") +
                                        "; " + std::to_string(same) + "/" + std::to_string(runs) +
                                        " repeated embeddings identical; " + fmt(seconds_since(start), 1) + " s"};
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int k, const Outcome& o) {
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    failed += !o.pass;
  };
  const auto guarded = [&](int k, const std::function<Outcome()>& f) {
    try {
      report(k, f());
    } catch (const std::exception& e) {
      report(k, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, decomposition_soundness);
  guarded(2, triangle_free_decomposition);
  guarded(3, exact_ramsey);
  guarded(4, oracle_agreement);

  const ExperimentConfig cfg = threshold_config(1);
  const auto scan_start = Clock::now();
  std::vector<ExperimentRecord> rows;
  std::string csv;
  try {
    rows = threshold_scan(cfg);
    std::ostringstream os;
    write_scan_csv(os, rows);
    csv = os.str();
  } catch (const std::exception& e) {
    std::cout << "threshold scan raised: " << e.what() << std::endl;
  }
  const double scan_secs = seconds_since(scan_start);

  guarded(5, [&] { return embedding_validity(rows); });
  guarded(6, regularity_coherence);
  guarded(7, [&] { return threshold_behaviour(cfg, rows, scan_secs); });
  guarded(8, [&] { return occupancy_decay(rows, cfg.p_grid.values.size() - 1); });
  guarded(9, [&] { return determinism(csv); });

  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
