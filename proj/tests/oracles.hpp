#pragma once

// Reference implementations used only by the tests. None of them shares code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "incidence_energy/graph.hpp"

namespace oracle {

using incidence_energy::Graph;

/// Upper-triangle bits of g under `order` (position -> vertex), graph6
/// column order, first bit most significant. n <= 11.
inline std::uint64_t labelled_bits(const Graph& g, const std::vector<int>& order) {
  std::uint64_t bits = 0;
  const int n = g.order();
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) bits = (bits << 1) | (g.has_edge(order[i], order[j]) ? 1u : 0u);
  return bits;
}

/// Maximum labelled bit string over all n! orderings.
inline std::uint64_t brute_force_lexmax(const Graph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.order()));
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t best = 0;
  do {
    best = std::max(best, labelled_bits(g, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

/// Isomorphism by trying every bijection.
inline bool brute_force_isomorphic(const Graph& a, const Graph& b) {
  if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> perm(static_cast<std::size_t>(a.order()));
  std::iota(perm.begin(), perm.end(), 0);
  const std::vector<int> identity = perm;
  const auto target = labelled_bits(b, identity);
  do {
    if (labelled_bits(a, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Isomorphism classes among all labelled graphs on n vertices, by pairwise
/// brute-force rejection. Feasible for n <= 5.
inline std::vector<Graph> classes_by_pairwise_rejection(int n) {
  std::vector<Graph> reps;
  const int pairs = n * (n - 1) / 2;
  for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
    Graph g(n);
    int e = 0;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i, ++e)
        if ((mask >> e) & 1u) g.add_edge(i, j);
    bool fresh = true;
    for (const auto& r : reps) {
      if (brute_force_isomorphic(g, r)) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(g);
  }
  return reps;
}

using Dense = std::vector<std::vector<double>>;

/// Householder reduction of a symmetric matrix to tridiagonal form; returns
/// (diagonal, off-diagonal).
inline std::pair<std::vector<double>, std::vector<double>> tridiagonalize(Dense a) {
  const int n = static_cast<int>(a.size());
  for (int k = 0; k + 2 < n; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += a[i][k] * a[i][k];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a[k + 1][k] > 0 ? -norm : norm;
    for (int i = k + 1; i < n; ++i) v[i] = a[i][k];
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (double x : v) vnorm += x * x;
    if (vnorm == 0.0) continue;
    // H = I - 2 v v^T / (v^T v); A <- H A H.
    Dense h(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h[i][j] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vnorm;
    Dense t(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) t[i][j] += h[i][l] * a[l][j];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += t[i][l] * h[l][j];
        a[i][j] = s;
      }
  }
  std::vector<double> d(static_cast<std::size_t>(n)), e;
  for (int i = 0; i < n; ++i) d[i] = a[i][i];
  for (int i = 0; i + 1 < n; ++i) e.push_back(a[i + 1][i]);
  return {d, e};
}

/// Number of eigenvalues of the tridiagonal (d, e) strictly below x, from
/// the signs of the Sturm sequence of leading principal minors.
inline int sturm_count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off2 = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = (d[i] - x) - (i == 0 ? 0.0 : off2 / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Ascending eigenvalues by bisection on the Sturm count.
inline std::vector<double> sturm_eigenvalues(const Dense& a) {
  const int n = static_cast<int>(a.size());
  auto [d, e] = tridiagonalize(a);
  double bound = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = std::abs(d[i]);
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    bound = std::max(bound, r);  // Gershgorin
  }
  bound += 1.0;
  std::vector<double> values;
  for (int k = 0; k < n; ++k) {
    double lo = -bound, hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * bound; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count_below(d, e, mid) > k) hi = mid; else lo = mid;
    }
    values.push_back(0.5 * (lo + hi));
  }
  return values;
}

/// Eigenvalues of a symmetric 3x3 by the trigonometric solution of its
/// characteristic polynomial, ascending.
inline std::vector<double> closed_form_3x3(const Dense& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  if (p1 == 0.0) {
    std::vector<double> v{a[0][0], a[1][1], a[2][2]};
    std::sort(v.begin(), v.end());
    return v;
  }
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Dense b = a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                     b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double pi = std::acos(-1.0);
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::vector<double> v{e1, e2, e3};
  std::sort(v.begin(), v.end());
  return v;
}

/// Energies summed from an oracle spectrum.
inline double sqrt_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double x : values) s += std::sqrt(std::max(x, 0.0));
  return s;
}

inline Dense to_dense(const incidence_energy::DenseSymMatrix& m) {
  Dense d(static_cast<std::size_t>(m.order()), std::vector<double>(static_cast<std::size_t>(m.order())));
  for (int i = 0; i < m.order(); ++i)
    for (int j = 0; j < m.order(); ++j) d[i][j] = m(i, j);
  return d;
}

inline Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Random symmetric matrix with entries uniform in [-1, 1].
inline Dense random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dense a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a[i][j] = a[j][i] = u(rng);
  return a;
}

}  // namespace oracle
