#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "incidence_energy/canonical.hpp"
#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"
#include "incidence_energy/parallel.hpp"

namespace incidence_energy {

/// Beyond this order enumeration still works but the level sizes explode
/// (n = 10 has about 12 million classes).
inline constexpr int kEnumerationSoftCeiling = 9;

using GraphFilter = std::function<bool(const Graph&)>;

namespace detail {

// All (k+1)-vertex classes obtained by attaching a new vertex to every
// neighbourhood subset of every k-vertex representative, deduplicated.
inline std::vector<CanonicalForm> extend_level(const std::vector<CanonicalForm>& parents,
                                               int workers) {
  if (parents.empty()) return {};
  const int k = parents.front().n;
  const int n = k + 1;
  check_canonical_order(n);
  workers = std::max(1, workers);
  std::vector<std::unordered_set<CanonicalForm, CanonicalFormHash>> found(
      static_cast<std::size_t>(workers));

  parallel_for(parents.size(), workers, [&](std::size_t p, int worker) {
    const Graph parent = graph_from_canonical(parents[p]);
    SmallRows base{};
    for (int v = 0; v < k; ++v) base[v] = static_cast<std::uint16_t>(parent.neighbors(v));
    auto& seen = found[static_cast<std::size_t>(worker)];
    for (std::uint32_t subset = 0; subset < (1u << k); ++subset) {
      SmallRows rows = base;
      rows[k] = static_cast<std::uint16_t>(subset);
      for (int v = 0; v < k; ++v) {
        if ((subset >> v) & 1u) rows[v] = static_cast<std::uint16_t>(rows[v] | (1u << k));
      }
      seen.insert(canonical_form_of_rows(n, rows));
    }
  }, 16);

  std::vector<CanonicalForm> level;
  for (auto& s : found) level.insert(level.end(), s.begin(), s.end());
  std::sort(level.begin(), level.end());
  level.erase(std::unique(level.begin(), level.end()), level.end());
  return level;
}

}  // namespace detail

/// One canonical form per isomorphism class of simple graphs on n vertices,
/// sorted ascending. Built level by level from the single 1-vertex graph.
inline std::vector<CanonicalForm> enumerate_canonical_forms(int n, int workers = 1) {
  if (n < 1) throw ContractViolation("enumeration needs n >= 1");
  detail::check_canonical_order(n);
  std::vector<CanonicalForm> level{CanonicalForm{1, {}}};
  for (int k = 1; k < n; ++k) level = detail::extend_level(level, workers);
  return level;
}

/// One representative (canonically labelled) per isomorphism class on n
/// vertices, in ascending canonical-form order. The filter, when given, is
/// applied after deduplication.
inline std::vector<Graph> enumerate_graphs(int n, const GraphFilter& filter = {},
                                           int workers = 1) {
  std::vector<Graph> out;
  for (const auto& f : enumerate_canonical_forms(n, workers)) {
    Graph g = graph_from_canonical(f);
    if (!filter || filter(g)) out.push_back(std::move(g));
  }
  return out;
}

/// Every labelled graph on n vertices, edge mask counting upward; bit i of
/// the mask is the i-th pair in graph6 column order.
inline std::vector<Graph> enumerate_labeled_graphs(int n) {
  if (n < 0 || n > 6) throw UnsupportedSize("labelled enumeration supports n <= 6");
  std::vector<Edge> pairs;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
  const std::uint32_t count = 1u << pairs.size();
  std::vector<Graph> out;
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    Graph g(n);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if ((mask >> e) & 1u) g.add_edge(pairs[e].first, pairs[e].second);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace incidence_energy
