#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "error.hpp"
#include "graph.hpp"

namespace sizeramsey {

// Edge-list text: first line "n m", then m lines "u v", 0-indexed.

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.order() << ' ' << g.size() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  long long n = -1, m = -1;
  if (!(is >> n >> m) || n < 0 || m < 0) throw Error(ErrorKind::ParseError, "missing 'n m' header");
  if (static_cast<unsigned long long>(n) > Graph::max_order)
    throw Error(ErrorKind::TooLarge, "graph order exceeds Graph::max_order");
  Graph g(static_cast<std::size_t>(n));
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    if (!(is >> u >> v)) throw Error(ErrorKind::ParseError, "expected " + std::to_string(m) + " edges");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorKind::ParseError, "edge endpoint out of range at edge " + std::to_string(i));
    if (u == v) throw Error(ErrorKind::ParseError, "self-loop at edge " + std::to_string(i));
    if (!g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
      throw Error(ErrorKind::ParseError, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
  }
  std::string rest;
  if (is >> rest) throw Error(ErrorKind::ParseError, "trailing data after edge list");
  return g;
}

// graph6: N(n) followed by the upper triangle in column order
// (x(0,1), x(0,2), x(1,2), x(0,3), ...), six bits per printable byte
// (value + 63), zero-padded.

inline std::string to_graph6(const Graph& g) {
  const std::size_t n = g.order();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift = 30; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  }
  int acc = 0, bits = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = bits = 0;
      }
    }
  if (bits > 0) out.push_back(static_cast<char>((acc << (6 - bits)) + 63));
  return out;
}

inline Graph from_graph6(std::string_view s) {
  if (s.rfind(">>graph6<<", 0) == 0) s.remove_prefix(10);
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  for (const char c : s)
    if (c < 63 || c > 126) throw Error(ErrorKind::ParseError, "graph6 byte out of range");
  std::size_t pos = 0, n = 0;
  const auto take = [&](int count) {
    std::size_t v = 0;
    for (int i = 0; i < count; ++i) {
      if (pos >= s.size()) throw Error(ErrorKind::ParseError, "truncated graph6 order");
      v = (v << 6) | static_cast<std::size_t>(s[pos++] - 63);
    }
    return v;
  };
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty graph6 string");
  if (s[0] != 126) {
    n = take(1);
  } else if (s.size() > 1 && s[1] != 126) {
    pos = 1;
    n = take(3);
  } else {
    pos = 2;
    n = take(6);
  }
  if (n > Graph::max_order) throw Error(ErrorKind::TooLarge, "graph6 order exceeds Graph::max_order");
  const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::size_t expected = (pairs + 5) / 6;
  if (s.size() - pos != expected)
    throw Error(ErrorKind::ParseError, "graph6 body has " + std::to_string(s.size() - pos) +
                                           " bytes, expected " + std::to_string(expected));
  Graph g(n);
  std::size_t bit = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i, ++bit) {
      const int byte = s[pos + bit / 6] - 63;
      if ((byte >> (5 - bit % 6)) & 1) g.add_edge(i, j);
    }
  return g;
}

inline Graph read_graph_file_contents(const std::string& text) {
  std::string_view sv = text;
  while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\n')) sv.remove_prefix(1);
  // graph6 bytes live in 63..126, so a leading digit means edge-list text.
  if (!sv.empty() && sv.front() >= '0' && sv.front() <= '9') {
    std::istringstream is(text);
    return read_edge_list(is);
  }
  return from_graph6(sv.substr(0, sv.find('\n')));
}

}  // namespace sizeramsey
