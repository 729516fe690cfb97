#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"

namespace incidence_energy {

// graph6, short form only: one size byte n + 63 (n <= 62), then the upper
// triangle x(0,1), x(0,2), x(1,2), x(0,3), ... packed big-endian six bits
// per byte, each byte offset by 63, final group zero padded.

inline constexpr int kMaxGraph6Order = 62;

inline std::size_t graph6_length(int n) {
  const std::size_t bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  return 1 + (bits + 5) / 6;
}

inline std::string to_graph6(const Graph& g) {
  const int n = g.order();
  if (n > kMaxGraph6Order) {
    throw UnsupportedSize("graph6 short form supports at most 62 vertices, got " +
                          std::to_string(n));
  }
  std::string out;
  out.reserve(graph6_length(n));
  out.push_back(static_cast<char>(n + 63));
  int group = 0;
  int filled = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      group = (group << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(group + 63));
        group = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((group << (6 - filled)) + 63));
  return out;
}

inline Graph parse_graph6(std::string_view text) {
  if (text.empty()) throw ParseError(0, "empty graph6 string");
  for (std::size_t k = 0; k < text.size(); ++k) {
    const auto b = static_cast<unsigned char>(text[k]);
    if (b < 63 || b > 126) {
      throw ParseError(k, "byte value " + std::to_string(b) + " outside [63, 126]");
    }
  }
  const int n = static_cast<unsigned char>(text[0]) - 63;
  if (n > kMaxGraph6Order) {
    throw ParseError(0, "long-form graph6 (n > 62) is not supported");
  }
  const std::size_t expected = graph6_length(n);
  if (text.size() < expected) {
    throw ParseError(text.size(), "truncated: expected " + std::to_string(expected) +
                                      " bytes for n=" + std::to_string(n));
  }
  if (text.size() > expected) {
    throw ParseError(expected, "trailing bytes: expected " + std::to_string(expected) +
                                   " bytes for n=" + std::to_string(n));
  }

  Graph g(n);
  std::size_t bit_index = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++bit_index) {
      const int byte = static_cast<unsigned char>(text[1 + bit_index / 6]) - 63;
      if ((byte >> (5 - bit_index % 6)) & 1) g.add_edge(i, j);
    }
  }
  if (bit_index % 6 != 0) {
    const std::size_t last = expected - 1;
    const int byte = static_cast<unsigned char>(text[last]) - 63;
    const int pad_mask = (1 << (6 - bit_index % 6)) - 1;
    if ((byte & pad_mask) != 0) throw ParseError(last, "nonzero padding bits");
  }
  return g;
}

struct Graph6ReadError : ParseError {
  Graph6ReadError(std::size_t line, const ParseError& e)
      : ParseError(e.position(), "line " + std::to_string(line) + ", " + e.what()),
        line(line) {}
  std::size_t line;
};

/// Reads a newline-separated graph6 stream. Blank lines and a leading
/// ">>graph6<<" header are skipped; a trailing '\r' is tolerated.
inline std::vector<Graph> read_graph6_stream(std::istream& in) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (view.starts_with(">>graph6<<")) view.remove_prefix(10);
    if (view.empty()) continue;
    try {
      graphs.push_back(parse_graph6(view));
    } catch (const ParseError& e) {
      throw Graph6ReadError(line_no, e);
    }
  }
  return graphs;
}

inline void write_graph6_stream(std::ostream& out, const std::vector<Graph>& graphs) {
  for (const auto& g : graphs) out << to_graph6(g) << '\n';
}

}  // namespace incidence_energy
