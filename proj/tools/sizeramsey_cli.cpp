// Command-line front end: graph generation, decomposition, embedding,
// arrowing checks, threshold scans and plot data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "sizeramsey/decompose.hpp"
#include "sizeramsey/embedder.hpp"
#include "sizeramsey/experiment.hpp"
#include "sizeramsey/generators.hpp"
#include "sizeramsey/graph_io.hpp"
#include "sizeramsey/pipeline.hpp"
#include "sizeramsey/ramsey.hpp"

using namespace sizeramsey;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;
constexpr int exit_all_failed = 3;

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw Error(ErrorKind::ConfigError, "cannot open " + path + " for writing");
    os = &file;
  }
  std::ostream& operator*() { return *os; }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// --input file wins; otherwise a named graph or cubic:N drawn from seed.
Graph load_graph(const std::string& input, const std::string& pattern, std::uint64_t seed) {
  if (!input.empty()) return read_graph_file_contents(slurp(input));
  if (pattern.empty()) throw Error(ErrorKind::ConfigError, "give --input or --pattern");
  return parse_pattern(pattern).sample(derive_seed(seed, {tag::pattern}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sizeramsey: block decompositions, sparse embeddings and Ramsey experiments"};
  app.require_subcommand(1);

  std::string out_path, input, pattern, mode, p_text, p_exp, config_path, occupancy_path;
  std::string dec_mode, emb_mode;
  std::string n_text;
  std::size_t n = 0, trials = 0, budget = 0, emb_budget = 0, arr_budget = 0, threads = 0;
  double p = 0.0;
  std::uint64_t seed = 1;
  bool graph6 = false, timing = false;

  auto* gen = app.add_subcommand("gen", "write a graph (G(n,p), random cubic or named)");
  gen->add_option("--n", n, "vertex count for G(n,p)");
  gen->add_option("--p", p, "edge probability for G(n,p)");
  gen->add_option("--pattern", pattern, "named graph or cubic:N instead of G(n,p)");
  gen->add_option("--seed", seed, "root seed");
  gen->add_flag("--graph6", graph6, "graph6 instead of an edge list");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* dec = app.add_subcommand("decompose", "block decomposition of a graph with maximum degree 3");
  dec->add_option("--input", input, "edge list or graph6 file");
  dec->add_option("--pattern", pattern, "named graph or cubic:N");
  dec->add_option("--seed", seed, "seed for cubic:N");
  dec->add_option("--mode", dec_mode, "cubic | triangle-free | bipartite")->default_val("cubic");
  dec->add_option("--out", out_path, "output file (default stdout)");

  auto* emb = app.add_subcommand("embed", "one embedding run into G(n,p)");
  emb->add_option("--input", input, "pattern file");
  emb->add_option("--pattern", pattern, "named graph or cubic:N");
  emb->add_option("--n", n, "host order")->required();
  emb->add_option("--p", p, "host edge probability")->required();
  emb->add_option("--seed", seed, "root seed");
  emb->add_option("--mode", emb_mode, "embed-only | colored-pipeline")->default_val("embed-only");
  emb->add_option("--budget", emb_budget, "backtracking node budget")->default_val(1000000);
  emb->add_option("--occupancy", occupancy_path, "write the bucket occupancy CSV here");
  emb->add_option("--out", out_path, "embedding output (default stdout)");

  auto* arr = app.add_subcommand("arrow", "decide G -> H (exhaustive up to 26 edges, else local search)");
  std::string host_name;
  arr->add_option("--host", host_name, "host as a named graph");
  arr->add_option("--input", input, "host file");
  arr->add_option("--pattern", pattern, "pattern H (named graph)")->required();
  arr->add_option("--budget", arr_budget, "flip budget for the local search")->default_val(100000);
  arr->add_option("--seed", seed, "seed for the local search");
  arr->add_option("--out", out_path, "certificate output (default stdout)");

  auto* scan = app.add_subcommand("scan", "threshold scan over n and p, CSV output");
  scan->add_option("--config", config_path, "key=value file; flags override it");
  scan->add_option("--n", n_text, "comma-separated host orders");
  scan->add_option("--p", p_text, "p values: a,b,c or lo:hi:count[:log]");
  scan->add_option("--p-exp", p_exp, "K-list,e for p = K n^e");
  scan->add_option("--pattern", pattern, "named graph or cubic:N");
  scan->add_option("--trials", trials, "trials per (n,p) cell");
  scan->add_option("--seed", seed, "root seed");
  scan->add_option("--mode", mode, "embed-only | colored-pipeline | arrowing-exhaustive");
  scan->add_option("--budget", budget, "backtracking node budget");
  scan->add_option("--threads", threads, "worker threads");
  scan->add_flag("--timing", timing, "record wall time (rows are then not byte-reproducible)");
  scan->add_option("--out", out_path, "CSV output (default stdout)");

  auto* plot = app.add_subcommand("plotdata", "success rates with Wilson intervals from a scan CSV");
  plot->add_option("--input", input, "scan CSV")->required();
  plot->add_option("--out", out_path, "output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*gen) {
      Graph g;
      if (!pattern.empty()) {
        g = load_graph("", pattern, seed);
      } else {
        if (n == 0) throw Error(ErrorKind::ConfigError, "gen needs --n and --p, or --pattern");
        g = gnp_sample({n, p, seed});
      }
      Output out(out_path);
      if (graph6) {
        *out << to_graph6(g) << '\n';
      } else {
        write_edge_list(*out, g);
      }
      return 0;
    }

    if (*dec) {
      const Graph h = load_graph(input, pattern, seed);
      BlockDecomposition d;
      std::size_t min_cycle = 4;
      if (dec_mode == "cubic") {
        const auto cd = decompose_components(h);
        if (!cd.k4_components.empty()) throw Error(ErrorKind::IsK4, "graph has a K4 component");
        d = cd.decomposition;
      } else if (dec_mode == "triangle-free" || dec_mode == "bipartite") {
        min_cycle = dec_mode == "bipartite" ? 6 : 5;
        d = decompose_triangle_free(h, dec_mode == "bipartite");
      } else {
        throw Error(ErrorKind::ConfigError, "unknown decompose mode '" + dec_mode + "'");
      }
      const auto violations = validate_decomposition(h, d, min_cycle);
      if (!violations.empty()) throw Error(ErrorKind::Internal, "decomposition failed validation");
      Output out(out_path);
      write_decomposition(*out, d);
      return 0;
    }

    if (*emb) {
      const Graph h = load_graph(input, pattern, seed);
      const Graph host = gnp_sample({n, p, derive_seed(seed, {tag::host})});
      if (host.size() == 0) throw Error(ErrorKind::PartitionDegenerate, "host has no edges");
      PipelineOptions opts;
      opts.k4_budget = emb_budget;
      opts.cycle.node_budget = emb_budget;
      PipelineResult res;
      if (emb_mode == "embed-only") {
        res = embed_into_host(host, h, edge_density(host), seed, opts);
      } else if (emb_mode == "colored-pipeline") {
        res = ramsey_pipeline(host, random_coloring(host, seed), h, seed, opts);
      } else {
        throw Error(ErrorKind::ConfigError, "unknown embed mode '" + emb_mode + "'");
      }
      if (!res.embedding) {
        std::cerr << "no embedding found\n";
        return exit_all_failed;
      }
      Output out(out_path);
      write_embedding(*out, *res.embedding);
      if (!occupancy_path.empty()) {
        Output occ(occupancy_path);
        write_occupancy_csv(*occ, std::to_string(seed),
                            occupancy_report(*res.embedding, host.order(), edge_density(host), {0.01}));
      }
      return 0;
    }

    if (*arr) {
      Graph g;
      if (!input.empty()) {
        g = read_graph_file_contents(slurp(input));
      } else if (!host_name.empty()) {
        g = named_graph(parse_named_graph(host_name));
      } else {
        throw Error(ErrorKind::ConfigError, "give --host or --input");
      }
      const Graph h = named_graph(parse_named_graph(pattern));
      Output out(out_path);
      if (g.size() <= max_exhaustive_edges) {
        const ArrowingResult r = is_ramsey_exhaustive(g, h);
        std::cerr << (r.arrows ? "arrows" : "does not arrow") << " (" << r.colorings_checked << " colourings)\n";
        if (r.certificate) write_coloring(*out, g, *r.certificate);
      } else {
        const auto c = adversarial_coloring_search(g, h, arr_budget, seed);
        if (!c) {
          std::cerr << "no colouring without a monochromatic copy found (inconclusive)\n";
          return exit_all_failed;
        }
        std::cerr << "does not arrow\n";
        write_coloring(*out, g, *c);
      }
      return 0;
    }

    if (*scan) {
      ExperimentConfig cfg;
      cfg.threads = std::max(1U, std::thread::hardware_concurrency());
      if (!config_path.empty()) {
        std::istringstream cs(slurp(config_path));
        for (const auto& [k, v] : read_config_file(cs)) apply_setting(cfg, k, v);
      }
      if (!n_text.empty()) apply_setting(cfg, "n", n_text);
      if (!p_text.empty() && !p_exp.empty()) throw Error(ErrorKind::ConfigError, "give --p or --p-exp, not both");
      if (!p_text.empty()) apply_setting(cfg, "p", p_text);
      if (!p_exp.empty()) apply_setting(cfg, "p-exp", p_exp);
      if (!pattern.empty()) apply_setting(cfg, "pattern", pattern);
      if (scan->count("--trials")) cfg.trials = trials;
      if (scan->count("--seed")) cfg.seed = seed;
      if (!mode.empty()) apply_setting(cfg, "mode", mode);
      if (scan->count("--budget")) cfg.budget = budget;
      if (scan->count("--threads")) cfg.threads = threads;
      if (timing) cfg.timing = true;
      cfg.validate();
      const auto records = threshold_scan(cfg);
      Output out(out_path);
      write_scan_csv(*out, records);
      const bool any = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.success; });
      return any ? 0 : exit_all_failed;
    }

    if (*plot) {
      std::ifstream in(input);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + input);
      Output out(out_path);
      emit_plot_data(in, *out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? exit_usage : exit_runtime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_usage;
}
