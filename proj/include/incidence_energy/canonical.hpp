#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"

namespace incidence_energy {

/// Largest order accepted by canonical_form.
inline constexpr int kMaxCanonicalOrder = 12;

/// Upper-triangle bit string of the lexicographically greatest relabeling.
///
/// Bits follow graph6 column order x(0,1), x(0,2), x(1,2), x(0,3), ... and
/// are packed most-significant first into two words, so comparing `bits`
/// lexicographically compares the bit strings. 12 vertices need 66 bits.
struct CanonicalForm {
  int n = 0;
  std::array<std::uint64_t, 2> bits{};

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

struct CanonicalFormHash {
  std::size_t operator()(const CanonicalForm& f) const noexcept {
    std::uint64_t h = f.bits[0] * 0x9E3779B97F4A7C15ULL;
    h ^= (f.bits[1] + static_cast<std::uint64_t>(f.n)) * 0xC2B2AE3D27D4EB4FULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

namespace detail {

using SmallRows = std::array<std::uint16_t, kMaxCanonicalOrder>;

// Lexicographic maximisation over vertex orderings. Position k of the
// ordering contributes the column x(0,k) .. x(k-1,k), which depends only on
// the vertices already placed, so each position keeps just the candidates
// with the largest column. Candidates that are twins (N(u)\{v} == N(v)\{u})
// are interchangeable by an automorphism fixing everything placed so far, so
// one per class is explored. Prefixes that fall below the incumbent are cut.
class LexMaxSearch {
 public:
  LexMaxSearch(int n, const SmallRows& rows) : n_(n), rows_(rows) {
    for (int v = 0; v < n_; ++v) {
      twin_class_[v] = v;
      for (int u = 0; u < v; ++u) {
        const auto nu = static_cast<std::uint16_t>(rows_[u] & ~(1u << v));
        const auto nv = static_cast<std::uint16_t>(rows_[v] & ~(1u << u));
        if (nu == nv) {
          twin_class_[v] = twin_class_[u];
          break;
        }
      }
    }
  }

  void run() {
    if (n_ == 0) return;
    std::array<std::uint16_t, kMaxCanonicalOrder> columns{};
    search(0, 0, columns, static_cast<std::uint16_t>((1u << n_) - 1), false);
  }

  const std::array<int, kMaxCanonicalOrder>& best_order() const { return best_order_; }
  const std::array<std::uint16_t, kMaxCanonicalOrder>& best_columns() const { return best_; }

 private:
  void search(int pos, std::uint16_t placed,
              const std::array<std::uint16_t, kMaxCanonicalOrder>& column,
              std::uint16_t allowed, bool greater) {
    if (pos == n_) {
      if (!has_incumbent_ || greater) {
        best_ = current_;
        best_order_ = order_;
        has_incumbent_ = true;
        ++version_;
      }
      return;
    }
    std::uint16_t top = 0;
    for (std::uint16_t m = allowed; m != 0; m &= static_cast<std::uint16_t>(m - 1)) {
      top = std::max(top, column[std::countr_zero(m)]);
    }
    if (has_incumbent_ && !greater) {
      if (top < best_[pos]) return;
      if (top > best_[pos]) greater = true;
    }
    current_[pos] = top;
    std::uint16_t classes_seen = 0;
    for (std::uint16_t m = allowed; m != 0; m &= static_cast<std::uint16_t>(m - 1)) {
      const int c = std::countr_zero(m);
      if (column[c] != top) continue;
      const auto cls = static_cast<std::uint16_t>(1u << twin_class_[c]);
      if (classes_seen & cls) continue;
      classes_seen |= cls;

      order_[pos] = c;
      const auto now_placed = static_cast<std::uint16_t>(placed | (1u << c));
      const auto rest = static_cast<std::uint16_t>(~now_placed & ((1u << n_) - 1));
      std::array<std::uint16_t, kMaxCanonicalOrder> next{};
      for (std::uint16_t r = rest; r != 0; r &= static_cast<std::uint16_t>(r - 1)) {
        const int v = std::countr_zero(r);
        next[v] = static_cast<std::uint16_t>((column[v] << 1) | ((rows_[c] >> v) & 1u));
      }
      const auto before = version_;
      search(pos + 1, now_placed, next, rest, greater);
      // A new incumbent found below shares this prefix.
      if (version_ != before) greater = false;
    }
  }

  int n_;
  SmallRows rows_;
  std::array<int, kMaxCanonicalOrder> twin_class_{};
  std::array<int, kMaxCanonicalOrder> order_{};
  std::array<int, kMaxCanonicalOrder> best_order_{};
  std::array<std::uint16_t, kMaxCanonicalOrder> current_{};
  std::array<std::uint16_t, kMaxCanonicalOrder> best_{};
  bool has_incumbent_ = false;
  std::uint64_t version_ = 0;
};

inline CanonicalForm pack_columns(int n, const std::array<std::uint16_t, kMaxCanonicalOrder>& columns) {
  CanonicalForm f;
  f.n = n;
  int bit = 0;
  for (int k = 1; k < n; ++k) {
    for (int i = 0; i < k; ++i, ++bit) {
      if ((columns[k] >> (k - 1 - i)) & 1u) f.bits[bit / 64] |= std::uint64_t{1} << (63 - bit % 64);
    }
  }
  return f;
}

inline CanonicalForm canonical_form_of_rows(int n, const SmallRows& rows) {
  LexMaxSearch search(n, rows);
  search.run();
  return pack_columns(n, search.best_columns());
}

inline SmallRows small_rows(const Graph& g) {
  SmallRows rows{};
  for (int v = 0; v < g.order(); ++v) rows[v] = static_cast<std::uint16_t>(g.neighbors(v));
  return rows;
}

inline void check_canonical_order(int n) {
  if (n > kMaxCanonicalOrder) {
    throw UnsupportedSize("canonical form supports at most " +
                          std::to_string(kMaxCanonicalOrder) + " vertices, got " +
                          std::to_string(n));
  }
}

}  // namespace detail

/// Canonical form: equal for two graphs iff they are isomorphic.
inline CanonicalForm canonical_form(const Graph& g) {
  detail::check_canonical_order(g.order());
  return detail::canonical_form_of_rows(g.order(), detail::small_rows(g));
}

/// Ordering achieving the canonical form: position k holds the original
/// vertex that becomes vertex k of the canonical graph.
inline std::vector<int> canonical_order(const Graph& g) {
  detail::check_canonical_order(g.order());
  detail::LexMaxSearch search(g.order(), detail::small_rows(g));
  search.run();
  const auto& o = search.best_order();
  return {o.begin(), o.begin() + g.order()};
}

inline bool bit_at(const CanonicalForm& f, int index) {
  return (f.bits[index / 64] >> (63 - index % 64)) & 1u;
}

/// The canonically labelled graph a form encodes.
inline Graph graph_from_canonical(const CanonicalForm& f) {
  Graph g(f.n);
  int bit = 0;
  for (int j = 1; j < f.n; ++j) {
    for (int i = 0; i < j; ++i, ++bit) {
      if (bit_at(f, bit)) g.add_edge(i, j);
    }
  }
  return g;
}

inline bool are_isomorphic(const Graph& a, const Graph& b) {
  return a.order() == b.order() && a.edge_count() == b.edge_count() &&
         canonical_form(a) == canonical_form(b);
}

}  // namespace incidence_energy
