#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"
#include "generators.hpp"
#include "pipeline.hpp"
#include "ramsey.hpp"
#include "seed.hpp"

namespace sizeramsey {

enum class ScanMode { EmbedOnly, ColoredPipeline, ArrowingExhaustive };

inline const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::EmbedOnly: return "embed-only";
    case ScanMode::ColoredPipeline: return "colored-pipeline";
    case ScanMode::ArrowingExhaustive: return "arrowing-exhaustive";
  }
  return "unknown";
}

inline ScanMode parse_mode(const std::string& s) {
  if (s == "embed-only") return ScanMode::EmbedOnly;
  if (s == "colored-pipeline") return ScanMode::ColoredPipeline;
  if (s == "arrowing-exhaustive") return ScanMode::ArrowingExhaustive;
  throw Error(ErrorKind::ConfigError, "unknown mode '" + s + "'");
}

/// p values, either absolute or K * n^e (evaluated per n).
struct PGrid {
  std::vector<double> values;           // absolute p, or the K values
  std::optional<double> exponent;       // set for K * n^e grids

  std::vector<double> for_n(std::size_t n) const {
    std::vector<double> out;
    for (const double v : values) out.push_back(exponent ? v * std::pow(static_cast<double>(n), *exponent) : v);
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(trim(s), &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, std::string("bad ") + what + " '" + s + "'");
  }
  if (used != trim(s).size() || !std::isfinite(v)) throw Error(ErrorKind::ConfigError, std::string("bad ") + what + " '" + s + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& s, const char* what) {
  const std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorKind::ConfigError, std::string("bad ") + what + " '" + s + "'");
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, std::string("bad ") + what + " '" + s + "'");
  }
}

}  // namespace detail

/// "a,b,c" or "lo:hi:count" (linear) or "lo:hi:count:log" (geometric).
inline std::vector<double> parse_value_list(const std::string& text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw Error(ErrorKind::ConfigError, "empty value list");
  if (s.find(':') != std::string::npos) {
    const auto parts = detail::split(s, ':');
    if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log"))
      throw Error(ErrorKind::ConfigError, "range must be lo:hi:count[:log]");
    const double lo = detail::parse_double(parts[0], "range bound");
    const double hi = detail::parse_double(parts[1], "range bound");
    const auto count = detail::parse_uint(parts[2], "range count");
    const bool geometric = parts.size() == 4;
    if (count == 0) throw Error(ErrorKind::ConfigError, "range count must be positive");
    if (geometric && (lo <= 0 || hi <= 0)) throw Error(ErrorKind::ConfigError, "log range needs positive bounds");
    std::vector<double> out;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_double(part, "value"));
  return out;
}

/// "K-list,e", e.g. "0.5:4:8:log,-0.4" or "1,2,3,-0.4" (last item is e).
inline PGrid parse_p_exponent(const std::string& text) {
  const auto comma = text.rfind(',');
  if (comma == std::string::npos) throw Error(ErrorKind::ConfigError, "--p-exp expects K,e");
  PGrid g;
  g.values = parse_value_list(text.substr(0, comma));
  g.exponent = detail::parse_double(text.substr(comma + 1), "exponent");
  return g;
}

/// Named graph, or "cubic:N" for a random cubic graph drawn per trial.
struct PatternSpec {
  std::string text;
  std::optional<NamedGraph> named;
  std::size_t cubic_order = 0;

  Graph sample(std::uint64_t seed) const { return named ? named_graph(*named) : random_cubic(cubic_order, seed); }
};

inline PatternSpec parse_pattern(const std::string& text) {
  PatternSpec spec;
  spec.text = detail::trim(text);
  for (const std::string prefix : {"cubic:", "random-cubic:"})
    if (spec.text.rfind(prefix, 0) == 0) {
      spec.cubic_order = static_cast<std::size_t>(detail::parse_uint(spec.text.substr(prefix.size()), "cubic order"));
      if (spec.cubic_order < 4 || spec.cubic_order % 2 != 0)
        throw Error(ErrorKind::ConfigError, "random cubic order must be even and at least 4");
      return spec;
    }
  try {
    spec.named = parse_named_graph(spec.text);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad pattern: ") + e.what());
  }
  return spec;
}

struct ExperimentConfig {
  std::vector<std::size_t> n_list;
  PGrid p_grid;
  PatternSpec pattern;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  ScanMode mode = ScanMode::EmbedOnly;
  std::size_t budget = 1000000;  // node budget for backtracking searches
  std::size_t threads = 1;
  bool timing = false;  // wall time in the CSV (breaks byte-identical replay)
  PipelineOptions pipeline{};

  void validate() const {
    if (n_list.empty()) throw Error(ErrorKind::ConfigError, "n list is empty");
    if (p_grid.values.empty()) throw Error(ErrorKind::ConfigError, "p grid is empty");
    if (trials == 0) throw Error(ErrorKind::ConfigError, "trials must be at least 1");
    if (pattern.text.empty()) throw Error(ErrorKind::ConfigError, "pattern missing");
    if (threads == 0) throw Error(ErrorKind::ConfigError, "threads must be at least 1");
    for (const std::size_t n : n_list) {
      if (n == 0 || n > Graph::max_order) throw Error(ErrorKind::ConfigError, "n out of range");
      for (const double p : p_grid.for_n(n))
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::ConfigError, "p outside [0,1] for n=" + std::to_string(n));
    }
  }
};

/// Applies one key=value setting (keys match the long CLI flags).
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "n") {
    c.n_list.clear();
    for (const auto& part : detail::split(value, ','))
      c.n_list.push_back(static_cast<std::size_t>(detail::parse_uint(part, "n")));
  } else if (key == "p") {
    c.p_grid = PGrid{parse_value_list(value), std::nullopt};
  } else if (key == "p-exp") {
    c.p_grid = parse_p_exponent(value);
  } else if (key == "pattern") {
    c.pattern = parse_pattern(value);
  } else if (key == "trials") {
    c.trials = static_cast<std::size_t>(detail::parse_uint(value, "trials"));
  } else if (key == "seed") {
    c.seed = detail::parse_uint(value, "seed");
  } else if (key == "mode") {
    c.mode = parse_mode(detail::trim(value));
  } else if (key == "budget") {
    c.budget = static_cast<std::size_t>(detail::parse_uint(value, "budget"));
  } else if (key == "threads") {
    c.threads = static_cast<std::size_t>(detail::parse_uint(value, "threads"));
  } else if (key == "timing") {
    const std::string v = detail::trim(value);
    if (v != "0" && v != "1" && v != "true" && v != "false") throw Error(ErrorKind::ConfigError, "timing must be a boolean");
    c.timing = v == "1" || v == "true";
  } else if (key == "kappa") {
    c.pipeline.kappa = detail::parse_double(value, "kappa");
  } else if (key == "buckets") {
    c.pipeline.bucket_count = static_cast<std::size_t>(detail::parse_uint(value, "buckets"));
  } else {
    throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
  }
}

/// Plain key=value lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config_file(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return out;
}

struct ExperimentRecord {
  std::size_t run_id = 0;
  std::size_t n = 0;
  std::size_t p_index = 0;
  double p = 0;
  std::string pattern_id;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  ScanMode mode = ScanMode::EmbedOnly;
  bool success = false;
  std::string failure_kind;
  std::optional<double> wall_time_ms;
  std::vector<std::size_t> bucket_trace;  // X_j peaks
  std::optional<double> regularity_pass_fraction;
};

inline std::uint64_t trial_seed(std::uint64_t root, std::size_t n, std::size_t p_index, std::size_t trial) {
  return derive_seed(root, {tag::trial, n, p_index, trial});
}

/// One trial of the configured mode. Library errors become failure kinds.
inline ExperimentRecord run_trial(const ExperimentConfig& c, std::size_t n, std::size_t p_index, double p,
                                  std::size_t trial) {
  ExperimentRecord r;
  r.n = n;
  r.p_index = p_index;
  r.p = p;
  r.pattern_id = c.pattern.text;
  r.trial = trial;
  r.seed = trial_seed(c.seed, n, p_index, trial);
  r.mode = c.mode;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Graph host = gnp_sample({n, p, derive_seed(r.seed, {tag::host})});
    const Graph h = c.pattern.sample(derive_seed(r.seed, {tag::pattern}));
    PipelineOptions opts = c.pipeline;
    opts.k4_budget = c.budget;
    opts.cycle.node_budget = c.budget;
    std::optional<PipelineResult> res;
    switch (c.mode) {
      case ScanMode::EmbedOnly:
        if (host.size() == 0) throw Error(ErrorKind::PartitionDegenerate, "host has no edges");
        res = embed_into_host(host, h, edge_density(host), r.seed, opts);
        break;
      case ScanMode::ColoredPipeline:
        if (host.size() == 0) throw Error(ErrorKind::PartitionDegenerate, "host has no edges");
        res = ramsey_pipeline(host, random_coloring(host, r.seed), h, r.seed, opts);
        break;
      case ScanMode::ArrowingExhaustive: {
        const ArrowingResult a = is_ramsey_exhaustive(host, h);
        r.success = a.arrows;
        if (!a.arrows) r.failure_kind = "NoArrowing";
        break;
      }
    }
    if (res) {
      r.regularity_pass_fraction = res->regularity_pass_fraction;
      if (res->embedding) {
        r.success = true;
        r.bucket_trace = res->embedding->occupancy_peak;
      } else {
        r.failure_kind = "NotFound";
      }
    }
  } catch (const Error& e) {
    r.success = false;
    r.failure_kind = to_string(e.kind());
  }
  if (c.timing)
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline constexpr const char* csv_schema_line = "# schema=1";
inline constexpr const char* csv_header =
    "run_id,n,p_index,p,pattern,trial,seed,mode,outcome,failure_kind,wall_time_ms,bucket_trace,regularity_pass_fraction";

namespace detail {
inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}
}  // namespace detail

inline void write_record(std::ostream& os, const ExperimentRecord& r) {
  os << r.run_id << ',' << r.n << ',' << r.p_index << ',' << detail::format_double(r.p) << ',' << r.pattern_id << ','
     << r.trial << ',' << r.seed << ',' << to_string(r.mode) << ',' << (r.success ? "success" : "failure") << ','
     << r.failure_kind << ',';
  if (r.wall_time_ms) os << detail::format_double(std::round(*r.wall_time_ms * 1000.0) / 1000.0);
  os << ',';
  for (std::size_t j = 0; j < r.bucket_trace.size(); ++j) os << (j ? ";" : "") << r.bucket_trace[j];
  os << ',';
  if (r.regularity_pass_fraction) os << detail::format_double(*r.regularity_pass_fraction);
  os << '\n';
}

/// Every (n, p, trial) cell on a worker pool; rows come back in
/// (n, p_index, trial) order whatever the completion order.
inline std::vector<ExperimentRecord> threshold_scan(const ExperimentConfig& c) {
  c.validate();
  struct Job {
    std::size_t n, p_index, trial;
    double p;
  };
  std::vector<Job> jobs;
  for (const std::size_t n : c.n_list) {
    const auto ps = c.p_grid.for_n(n);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t t = 0; t < c.trials; ++t) jobs.push_back({n, i, t, ps[i]});
  }
  std::vector<ExperimentRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      records[k] = run_trial(c, jobs[k].n, jobs[k].p_index, jobs[k].p, jobs[k].trial);
      records[k].run_id = k;
    }
  };
  const std::size_t workers = std::min(c.threads, std::max<std::size_t>(jobs.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << csv_schema_line << '\n' << csv_header << '\n';
  for (const auto& r : records) write_record(os, r);
}

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};

inline constexpr double wilson_z95 = 1.959963984540054;

inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = wilson_z95) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == trials) w.hi = 1.0;
  if (successes == 0) w.lo = 0.0;
  return w;
}

struct PlotRow {
  std::size_t n = 0;
  double p = 0;
  std::size_t trials = 0, successes = 0;
  double rate = 0;
  WilsonInterval ci;
};

/// Success rate per (n, p) from a scan CSV, sorted by n then p.
inline std::vector<PlotRow> aggregate_scan(std::istream& is) {
  std::string line;
  std::vector<std::string> header;
  std::map<std::pair<std::size_t, double>, PlotRow> cells;
  std::size_t lineno = 0, col_n = 0, col_p = 0, col_outcome = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split(line, ',');
    if (header.empty()) {
      header = fields;
      const auto find = [&](const char* name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::MalformedCSV, std::string("missing column ") + name);
        return static_cast<std::size_t>(it - header.begin());
      };
      col_n = find("n");
      col_p = find("p");
      col_outcome = find("outcome");
      continue;
    }
    if (fields.size() != header.size())
      throw Error(ErrorKind::MalformedCSV, "line " + std::to_string(lineno) + ": wrong field count");
    std::size_t n;
    double p;
    try {
      n = static_cast<std::size_t>(detail::parse_uint(fields[col_n], "n"));
      p = detail::parse_double(fields[col_p], "p");
    } catch (const Error&) {
      throw Error(ErrorKind::MalformedCSV, "line " + std::to_string(lineno) + ": bad number");
    }
    const std::string& outcome = fields[col_outcome];
    if (outcome != "success" && outcome != "failure")
      throw Error(ErrorKind::MalformedCSV, "line " + std::to_string(lineno) + ": bad outcome");
    PlotRow& row = cells[{n, p}];
    row.n = n;
    row.p = p;
    ++row.trials;
    if (outcome == "success") ++row.successes;
  }
  std::vector<PlotRow> rows;
  for (auto& [key, row] : cells) {
    row.rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    row.ci = wilson_interval(row.successes, row.trials);
    rows.push_back(row);
  }
  return rows;
}

/// Whitespace-separated columns for gnuplot, one block per n, followed by
/// comment lines for each upward crossing of rate 1/2 (linear in p).
inline void emit_plot_data(std::istream& csv, std::ostream& out) {
  const auto rows = aggregate_scan(csv);
  out << "# n p trials successes rate wilson_lo wilson_hi\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].n != rows[i - 1].n) out << '\n';
    const auto& r = rows[i];
    out << r.n << ' ' << detail::format_double(r.p) << ' ' << r.trials << ' ' << r.successes << ' '
        << detail::format_double(r.rate) << ' ' << detail::format_double(r.ci.lo) << ' '
        << detail::format_double(r.ci.hi) << '\n';
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.n != b.n || !(a.rate < 0.5 && b.rate >= 0.5)) continue;
    const double t = (0.5 - a.rate) / (b.rate - a.rate);
    out << "# crossing n=" << a.n << " p=" << detail::format_double(a.p + t * (b.p - a.p)) << '\n';
  }
}

}  // namespace sizeramsey
