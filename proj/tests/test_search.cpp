#include <cmath>

#include <gtest/gtest.h>

#include "incidence_energy/search.hpp"
#include "oracles.hpp"

namespace incidence_energy {
namespace {

TEST(SearchTest, GapObjective) {
  EXPECT_NEAR(gap_objective(complete_graph(3)), 4.0 - 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(gap_objective(cycle_graph(6)), 0.0, 1e-8);
  EXPECT_EQ(gap_objective(Graph(7)), 0.0);
}

TEST(SearchTest, ConfigValidation) {
  SearchConfig c;
  c.decay = 1.0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = {};
  c.iterations = 0;
  EXPECT_THROW(c.validate(), ContractViolation);
  c = {};
  c.n = 31;
  EXPECT_THROW(c.validate(), ContractViolation);
}

TEST(SearchTest, DegenerateBudgetEchoesInitialGraph) {
  SearchConfig c;
  c.n = 4;
  c.iterations = 1;
  c.restarts = 1;
  c.seed = 1;
  const auto r = anneal(c);
  EXPECT_EQ(r.moves_evaluated, 1);
  ASSERT_EQ(r.best.size(), 1u);
  EXPECT_EQ(r.min_gap, r.best[0].gap);
  EXPECT_NEAR(gap_objective(parse_graph6(r.best[0].graph6)), r.min_gap, 1e-12);
}

TEST(SearchTest, TenVerticesFindsNoViolation) {
  SearchConfig c;
  c.n = 10;
  c.iterations = 2000;
  c.seed = 99;
  const auto r = anneal(c);
  EXPECT_GE(r.min_gap, -1e-9);
  EXPECT_TRUE(r.violation_candidates.empty());
  EXPECT_TRUE(r.errors.empty());
  EXPECT_EQ(r.moves_evaluated, 2000);
}

TEST(SearchTest, BestListIsSortedDistinctAndReproducible) {
  SearchConfig c;
  c.n = 8;
  c.iterations = 400;
  c.restarts = 3;
  c.seed = 5;
  c.top_k = 6;
  const auto a = anneal(c);
  c.workers = 3;
  const auto b = anneal(c);
  ASSERT_EQ(a.best.size(), b.best.size());
  for (std::size_t i = 0; i < a.best.size(); ++i) {
    EXPECT_EQ(a.best[i].graph6, b.best[i].graph6);
    EXPECT_EQ(a.best[i].gap, b.best[i].gap);
  }
  EXPECT_LE(a.best.size(), 6u);
  std::set<std::string> keys;
  for (std::size_t i = 0; i < a.best.size(); ++i) {
    if (i > 0) {
      EXPECT_LE(a.best[i - 1].gap, a.best[i].gap);
    }
    EXPECT_TRUE(keys.insert(a.best[i].graph6).second);
    // Independent recheck of each reported gap.
    EXPECT_NEAR(check_graph(parse_graph6(a.best[i].graph6)).gap, a.best[i].gap, 1e-9);
    EXPECT_EQ(is_bipartite(parse_graph6(a.best[i].graph6)), a.best[i].bipartite);
  }
}

TEST(SearchTest, BipartiteMovesStayAtZero) {
  SearchConfig c;
  c.n = 10;
  c.iterations = 300;
  c.bipartite_moves = true;
  c.seed = 3;
  const auto r = anneal(c);
  for (const auto& e : r.best) {
    EXPECT_TRUE(e.bipartite);
    EXPECT_NEAR(e.gap, 0.0, 1e-8);
  }
  EXPECT_NEAR(r.min_gap, 0.0, 1e-8);
}

TEST(SearchTest, RestartSeedsDiffer) {
  EXPECT_NE(restart_seed(42, 0), restart_seed(42, 1));
  EXPECT_NE(restart_seed(42, 0), restart_seed(43, 0));
  EXPECT_EQ(restart_seed(42, 3), restart_seed(42, 3));
}

TEST(DescentTest, K3DropsToAPath) {
  const auto d = exhaustive_neighborhood_descent(complete_graph(3));
  EXPECT_NEAR(d.gap, 0.0, 1e-12);
  EXPECT_EQ(d.steps, 1);
  // First toggle in lexicographic order removes {0,1}.
  EXPECT_FALSE(d.graph.has_edge(0, 1));
  EXPECT_EQ(d.graph.edge_count(), 2);
}

TEST(DescentTest, EmptyGraphIsALocalMinimum) {
  const auto d = exhaustive_neighborhood_descent(Graph(6));
  EXPECT_EQ(d.steps, 0);
  EXPECT_EQ(d.gap, 0.0);
}

TEST(DescentTest, BipartiteStartStaysNonNegative) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    Graph g(8);
    for (int i = 0; i < 4; ++i)
      for (int j = 4; j < 8; ++j) {
        if (rng() & 1u) g.add_edge(i, j);
      }
    const auto d = exhaustive_neighborhood_descent(g);
    for (double gap : d.visited_gaps) EXPECT_GE(gap, -1e-9);
    for (std::size_t i = 1; i < d.visited_gaps.size(); ++i) {
      EXPECT_LT(d.visited_gaps[i], d.visited_gaps[i - 1]);
    }
  }
}

}  // namespace
}  // namespace incidence_energy
