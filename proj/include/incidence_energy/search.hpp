#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incidence_energy/canonical.hpp"
#include "incidence_energy/errors.hpp"
#include "incidence_energy/graph.hpp"
#include "incidence_energy/graph6.hpp"
#include "incidence_energy/parallel.hpp"
#include "incidence_energy/spectral.hpp"
#include "incidence_energy/verify.hpp"

namespace incidence_energy {

inline constexpr int kMaxSearchOrder = 30;

// Objective gaps closer than this are ties; descent only takes strict moves.
inline constexpr double kDescentTieTolerance = 1e-12;

struct SearchConfig {
  int n = 12;
  long iterations = 2000;  // objective evaluations per restart, initial state included
  int restarts = 1;
  double initial_temperature = 0.05;
  double decay = 0.999;
  std::uint64_t seed = 1;
  int top_k = 10;
  int workers = 1;
  // Restrict states to graphs bipartite across {0..n/2-1} | {n/2..n-1}.
  bool bipartite_moves = false;

  void validate() const {
    if (n < 1 || n > kMaxSearchOrder) throw ContractViolation("search order must be in [1, 30]");
    if (iterations < 1) throw ContractViolation("iterations must be >= 1");
    if (restarts < 1) throw ContractViolation("restarts must be >= 1");
    if (!(decay > 0.0 && decay < 1.0)) throw ContractViolation("decay must lie in (0, 1)");
    if (!(initial_temperature >= 0.0)) throw ContractViolation("temperature must be >= 0");
    if (top_k < 1) throw ContractViolation("top_k must be >= 1");
  }
};

struct SearchEntry {
  std::string graph6;  // canonical labelling when n <= 12
  double gap = 0.0;
  bool bipartite = false;
};

struct SearchResult {
  std::vector<SearchEntry> best;  // ascending gap, no two isomorphic (n <= 12)
  long moves_evaluated = 0;
  double min_gap = 0.0;
  std::vector<std::string> errors;  // restarts aborted by solver failures
  std::vector<ConjectureRecord> violation_candidates;
  double wall_time = 0.0;
};

inline double gap_objective(const Graph& g, const Tolerances& tols = {}) {
  return energy_pair(g, tols).gap;
}

/// splitmix64 finaliser; derives independent per-restart seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  return mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(restart) + 1));
}

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Isomorphism-invariant key for n <= 12, the labelled graph6 beyond that.
inline std::string dedup_key(const Graph& g) {
  if (g.order() <= kMaxCanonicalOrder) return to_graph6(graph_from_canonical(canonical_form(g)));
  return to_graph6(g);
}

namespace detail {

class BestList {
 public:
  explicit BestList(int capacity) : capacity_(static_cast<std::size_t>(capacity)) {}

  void offer(const Graph& g, double gap) {
    if (entries_.size() == capacity_ && !(gap < entries_.back().gap)) return;
    offer_entry({dedup_key(g), gap, is_bipartite(g)});
  }

  void offer_entry(const SearchEntry& e) {
    if (entries_.size() == capacity_ && !before(e, entries_.back())) return;
    for (const auto& x : entries_) {
      if (x.graph6 == e.graph6) return;
    }
    entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), e, before), e);
    if (entries_.size() > capacity_) entries_.pop_back();
  }

  const std::vector<SearchEntry>& entries() const { return entries_; }

  static bool before(const SearchEntry& a, const SearchEntry& b) {
    if (a.gap != b.gap) return a.gap < b.gap;
    return a.graph6 < b.graph6;
  }

 private:
  std::size_t capacity_;
  std::vector<SearchEntry> entries_;
};

struct RestartOutcome {
  std::vector<SearchEntry> best;
  long evaluations = 0;
  std::string error;
  std::vector<ConjectureRecord> violations;
};

inline RestartOutcome anneal_once(const SearchConfig& cfg, int restart, const Tolerances& tols) {
  RestartOutcome out;
  std::mt19937_64 rng(restart_seed(cfg.seed, restart));
  const int n = cfg.n;
  std::vector<Edge> pairs;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (!cfg.bipartite_moves || (i < n / 2) != (j < n / 2)) pairs.emplace_back(i, j);
    }
  }

  Graph g(n);
  for (auto [i, j] : pairs) {
    if (rng() >> 63) g.add_edge(i, j);
  }

  BestList best(cfg.top_k);
  auto evaluate = [&](const Graph& h) {
    ++out.evaluations;
    double gap = gap_objective(h, tols);
    if (gap < -tols.violation) {
      ConjectureRecord r = check_graph(h, tols);
      if (r.verdict == Verdict::kViolation) out.violations.push_back(r);
      if (r.verdict != Verdict::kSolverFailure) gap = r.gap;
    }
    return gap;
  };

  try {
    double current = evaluate(g);
    best.offer(g, current);
    double temperature = cfg.initial_temperature;
    for (long it = 1; it < cfg.iterations && !pairs.empty(); ++it) {
      const auto [u, v] = pairs[rng() % pairs.size()];
      g.toggle_edge(u, v);
      const double candidate = evaluate(g);
      const double delta = candidate - current;
      const double draw = unit_uniform(rng);
      const bool accept =
          delta <= 0.0 || (temperature > 0.0 && draw < std::exp(-delta / temperature));
      if (accept) {
        current = candidate;
        best.offer(g, current);
      } else {
        g.toggle_edge(u, v);
      }
      temperature *= cfg.decay;
    }
  } catch (const ConvergenceError& e) {
    out.error = "restart " + std::to_string(restart) + ": " + e.what();
  } catch (const NegativeEigenvalueError& e) {
    out.error = "restart " + std::to_string(restart) + ": " + e.what();
  }
  out.best = best.entries();
  return out;
}

}  // namespace detail

/// Simulated annealing on single edge toggles, minimising E(X) - E(D).
/// Each restart starts from a G(n, 1/2) sample drawn from its own seed, so
/// the result depends only on the config, not on the worker count.
inline SearchResult anneal(const SearchConfig& cfg, const Tolerances& tols = {}) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), cfg.workers, [&](std::size_t r, int) {
    outcomes[r] = detail::anneal_once(cfg, static_cast<int>(r), tols);
  }, 1);

  SearchResult result;
  detail::BestList merged(cfg.top_k);
  for (const auto& o : outcomes) {
    result.moves_evaluated += o.evaluations;
    for (const auto& e : o.best) merged.offer_entry(e);
    if (!o.error.empty()) result.errors.push_back(o.error);
    result.violation_candidates.insert(result.violation_candidates.end(), o.violations.begin(),
                                       o.violations.end());
  }
  result.best = merged.entries();
  if (!result.best.empty()) result.min_gap = result.best.front().gap;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct DescentResult {
  Graph graph;
  double gap = 0.0;
  int steps = 0;
  std::vector<double> visited_gaps;  // objective at every state, start included
};

/// Steepest descent over all single-toggle neighbours. Moves only when the
/// best neighbour improves by more than kDescentTieTolerance; among equal
/// best neighbours the lexicographically smallest pair wins.
inline DescentResult exhaustive_neighborhood_descent(const Graph& g0, const Tolerances& tols = {}) {
  if (g0.order() > kMaxSearchOrder) throw ContractViolation("descent supports n <= 30");
  DescentResult r{g0, gap_objective(g0, tols), 0, {}};
  r.visited_gaps.push_back(r.gap);
  const int n = g0.order();
  for (;;) {
    double best_gap = r.gap;
    Edge best_pair{-1, -1};
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        r.graph.toggle_edge(i, j);
        const double gap = gap_objective(r.graph, tols);
        r.graph.toggle_edge(i, j);
        if (gap < best_gap) {
          best_gap = gap;
          best_pair = {i, j};
        }
      }
    }
    if (best_pair.first < 0 || !(best_gap < r.gap - kDescentTieTolerance)) break;
    r.graph.toggle_edge(best_pair.first, best_pair.second);
    r.gap = best_gap;
    r.visited_gaps.push_back(r.gap);
    ++r.steps;
  }
  return r;
}

inline nlohmann::ordered_json search_entries_to_json(const std::vector<SearchEntry>& entries) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    a.push_back({{"graph6", e.graph6}, {"gap", round12(e.gap)}, {"bipartite", e.bipartite}});
  }
  return a;
}

inline nlohmann::ordered_json search_config_to_json(const SearchConfig& cfg) {
  return {{"n", cfg.n},
          {"iterations", cfg.iterations},
          {"restarts", cfg.restarts},
          {"initial_temperature", cfg.initial_temperature},
          {"decay", cfg.decay},
          {"seed", cfg.seed},
          {"top_k", cfg.top_k},
          {"bipartite_moves", cfg.bipartite_moves}};
}

}  // namespace incidence_energy
