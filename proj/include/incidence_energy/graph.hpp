#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "incidence_energy/errors.hpp"

namespace incidence_energy {

/// Largest vertex count a Graph can hold (one 64-bit adjacency row per vertex).
inline constexpr int kMaxVertices = 64;

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices 0..n-1, stored as adjacency bit rows.
///
/// Symmetry and the empty diagonal are maintained by every mutator, so a
/// Graph value always satisfies the simple-graph invariants.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n), rows_(static_cast<std::size_t>(n), 0) {
    if (n < 0 || n > kMaxVertices) {
      throw UnsupportedSize("vertex count " + std::to_string(n) +
                            " outside [0, 64]");
    }
  }

  static Graph from_edges(int n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  int order() const noexcept { return n_; }

  bool has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return (rows_[u] >> v) & 1u;
  }

  void add_edge(int u, int v) { set_edge(u, v, true); }
  void remove_edge(int u, int v) { set_edge(u, v, false); }
  void toggle_edge(int u, int v) { set_edge(u, v, !has_edge(u, v)); }

  void set_edge(int u, int v, bool present) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw ContractViolation("self-loops are not allowed");
    if (present) {
      rows_[u] |= bit(v);
      rows_[v] |= bit(u);
    } else {
      rows_[u] &= ~bit(v);
      rows_[v] &= ~bit(u);
    }
  }

  /// Neighbourhood of v as a bit mask.
  std::uint64_t neighbors(int v) const {
    check_vertex(v);
    return rows_[v];
  }

  int degree(int v) const {
    check_vertex(v);
    return std::popcount(rows_[v]);
  }

  int edge_count() const noexcept {
    int twice = 0;
    for (auto r : rows_) twice += std::popcount(r);
    return twice / 2;
  }

  /// Edges as (min, max) pairs in lexicographic order. This order fixes the
  /// column layout of both incidence matrices.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        if ((rows_[i] >> j) & 1u) out.emplace_back(i, j);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

  void check_vertex(int v) const {
    if (v < 0 || v >= n_) {
      throw ContractViolation("vertex " + std::to_string(v) +
                              " out of range for graph of order " +
                              std::to_string(n_));
    }
  }

  int n_ = 0;
  std::vector<std::uint64_t> rows_;
};

inline int degree(const Graph& g, int v) { return g.degree(v); }

/// Relabels g so that vertex v of g becomes vertex perm[v] of the result.
inline Graph permute(const Graph& g, std::span<const int> perm) {
  const int n = g.order();
  if (static_cast<int>(perm.size()) != n) {
    throw ContractViolation("permutation length does not match graph order");
  }
  Graph out(n);
  for (auto [u, v] : g.edges()) out.add_edge(perm[u], perm[v]);
  return out;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  if (n >= 3) g.add_edge(0, n - 1);
  return g;
}

/// A direction for every edge of one specific graph. forward[e] means the
/// e-th edge (in Graph::edges() order) {i, j}, i < j, points i -> j.
class Orientation {
 public:
  Orientation(std::vector<Edge> edges, std::vector<bool> forward)
      : edges_(std::move(edges)), forward_(std::move(forward)) {
    if (edges_.size() != forward_.size()) {
      throw ContractViolation("orientation needs one direction per edge");
    }
  }

  static Orientation all_forward(const Graph& g) {
    auto e = g.edges();
    std::vector<bool> f(e.size(), true);
    return Orientation(std::move(e), std::move(f));
  }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool forward(std::size_t e) const { return forward_.at(e); }
  void flip(std::size_t e) { forward_.at(e) = !forward_.at(e); }
  std::size_t size() const noexcept { return edges_.size(); }

  /// (tail, head) of edge e.
  Edge arc(std::size_t e) const {
    auto [i, j] = edges_.at(e);
    return forward_[e] ? Edge{i, j} : Edge{j, i};
  }

 private:
  std::vector<Edge> edges_;
  std::vector<bool> forward_;
};

/// Square symmetric matrix. The only writer, set(), stores both triangles
/// from one value, so symmetry holds bit-for-bit.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(int order)
      : order_(order),
        entries_(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), 0.0) {}

  int order() const noexcept { return order_; }

  double operator()(int i, int j) const { return entries_[index(i, j)]; }

  void set(int i, int j, double value) {
    entries_[index(i, j)] = value;
    entries_[index(j, i)] = value;
  }

  double frobenius_norm() const;

  std::span<const double> data() const noexcept { return entries_; }

  friend bool operator==(const DenseSymMatrix&, const DenseSymMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(order_) +
           static_cast<std::size_t>(j);
  }

  int order_ = 0;
  std::vector<double> entries_;
};

/// Row-major rectangular matrix, used for the incidence matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int i, int j) { return entries_[index(i, j)]; }
  double operator()(int i, int j) const { return entries_[index(i, j)]; }

  /// Column j negated in place.
  void negate_column(int j) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> entries_;
};

inline double DenseSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : entries_) s += x * x;
  return std::sqrt(s);
}

/// M * M^T. Exact when M has small integer entries.
inline DenseSymMatrix gram(const Matrix& m) {
  DenseSymMatrix out(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i; j < m.rows(); ++j) {
      double s = 0.0;
      for (int k = 0; k < m.cols(); ++k) s += m(i, k) * m(j, k);
      out.set(i, j, s);
    }
  }
  return out;
}

inline DenseSymMatrix adjacency_matrix(const Graph& g) {
  DenseSymMatrix a(g.order());
  for (auto [u, v] : g.edges()) a.set(u, v, 1.0);
  return a;
}

// Delta + sign * A.
inline DenseSymMatrix degree_plus_signed_adjacency(const Graph& g, double sign) {
  DenseSymMatrix out(g.order());
  for (int v = 0; v < g.order(); ++v) out.set(v, v, g.degree(v));
  for (auto [u, v] : g.edges()) out.set(u, v, sign);
  return out;
}

/// Delta - A.
inline DenseSymMatrix laplacian(const Graph& g) {
  return degree_plus_signed_adjacency(g, -1.0);
}

/// Delta + A.
inline DenseSymMatrix signless_laplacian(const Graph& g) {
  return degree_plus_signed_adjacency(g, 1.0);
}

/// n x m (0,1) incidence matrix, columns in Graph::edges() order.
inline Matrix incidence_matrix(const Graph& g) {
  const auto edges = g.edges();
  Matrix x(g.order(), static_cast<int>(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    x(edges[e].first, static_cast<int>(e)) = 1.0;
    x(edges[e].second, static_cast<int>(e)) = 1.0;
  }
  return x;
}

/// n x m (-1,0,1) incidence matrix of an orientation: -1 at the tail,
/// +1 at the head of each arc.
inline Matrix directed_incidence_matrix(const Graph& g, const Orientation& o) {
  const auto edges = g.edges();
  if (edges != o.edges()) {
    throw ContractViolation("orientation was not built for this graph's edge set");
  }
  Matrix d(g.order(), static_cast<int>(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [tail, head] = o.arc(e);
    d(tail, static_cast<int>(e)) = -1.0;
    d(head, static_cast<int>(e)) = 1.0;
  }
  return d;
}

/// Proper 2-colouring (colours 0/1) if one exists, found by BFS per component.
inline std::optional<std::vector<int>> two_coloring(const Graph& g) {
  const int n = g.order();
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (std::uint64_t nb = g.neighbors(u); nb != 0; nb &= nb - 1) {
        const int v = std::countr_zero(nb);
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

inline bool is_bipartite(const Graph& g) { return two_coloring(g).has_value(); }

/// Common degree k if g is k-regular. The graph on zero vertices counts as
/// 0-regular.
inline std::optional<int> is_regular(const Graph& g) {
  if (g.order() == 0) return 0;
  const int k = g.degree(0);
  for (int v = 1; v < g.order(); ++v) {
    if (g.degree(v) != k) return std::nullopt;
  }
  return k;
}

struct Components {
  int count = 0;
  std::vector<int> label;  // component index per vertex, numbered by first vertex
};

inline Components connected_components(const Graph& g) {
  Components c;
  c.label.assign(static_cast<std::size_t>(g.order()), -1);
  for (int s = 0; s < g.order(); ++s) {
    if (c.label[s] != -1) continue;
    std::uint64_t frontier = std::uint64_t{1} << s;
    std::uint64_t seen = frontier;
    while (frontier != 0) {
      std::uint64_t next = 0;
      for (std::uint64_t f = frontier; f != 0; f &= f - 1) {
        next |= g.neighbors(std::countr_zero(f));
      }
      frontier = next & ~seen;
      seen |= next;
    }
    for (std::uint64_t m = seen; m != 0; m &= m - 1) {
      c.label[std::countr_zero(m)] = c.count;
    }
    ++c.count;
  }
  return c;
}

inline bool is_connected(const Graph& g) {
  return connected_components(g).count <= 1;
}

}  // namespace incidence_energy
