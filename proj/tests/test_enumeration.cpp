#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "incidence_energy/canonical.hpp"
#include "incidence_energy/enumeration.hpp"
#include "incidence_energy/graph6.hpp"
#include "oracles.hpp"

namespace incidence_energy {
namespace {

// The first n(n-1)/2 bits of a form as an integer, for n <= 11.
std::uint64_t leading_bits(const CanonicalForm& f) {
  const int bits = f.n * (f.n - 1) / 2;
  return bits == 0 ? 0 : f.bits[0] >> (64 - bits);
}

TEST(CanonicalFormTest, RelabeledPathsAgree) {
  const Graph a = path_graph(3);
  const std::vector<int> perm{1, 0, 2};
  EXPECT_EQ(canonical_form(a), canonical_form(permute(a, perm)));
  EXPECT_NE(canonical_form(complete_graph(3)), canonical_form(path_graph(3)));
}

TEST(CanonicalFormTest, MatchesBruteForceLexMaxOnAllSmallGraphs) {
  for (int n = 0; n <= 5; ++n) {
    for (const auto& g : enumerate_labeled_graphs(n)) {
      ASSERT_EQ(leading_bits(canonical_form(g)), oracle::brute_force_lexmax(g)) << to_graph6(g);
    }
  }
}

TEST(CanonicalFormTest, MatchesBruteForceLexMaxOnRandomGraphs) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 6 + trial % 3;
    const Graph g = oracle::random_graph(n, trial % 2 ? 0.3 : 0.6, rng);
    ASSERT_EQ(leading_bits(canonical_form(g)), oracle::brute_force_lexmax(g)) << to_graph6(g);
  }
}

TEST(CanonicalFormTest, InvariantUnderRandomPermutations) {
  std::mt19937_64 rng(43);
  for (int n = 1; n <= 5; ++n) {
    for (const auto& g : enumerate_graphs(n)) {
      const auto f = canonical_form(g);
      for (int k = 0; k < 20; ++k) {
        ASSERT_EQ(canonical_form(permute(g, oracle::random_permutation(n, rng))), f);
      }
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 9 + trial % 4;
    const Graph g = oracle::random_graph(n, 0.5, rng);
    ASSERT_EQ(canonical_form(permute(g, oracle::random_permutation(n, rng))), canonical_form(g));
  }
}

TEST(CanonicalFormTest, SymmetricGraphsAtTheSizeLimit) {
  Graph bipartite(12);
  for (int i = 0; i < 6; ++i)
    for (int j = 6; j < 12; ++j) bipartite.add_edge(i, j);
  Graph prism(12);  // C6 x K2
  for (int i = 0; i < 6; ++i) {
    prism.add_edge(i, (i + 1) % 6);
    prism.add_edge(6 + i, 6 + (i + 1) % 6);
    prism.add_edge(i, 6 + i);
  }
  std::mt19937_64 rng(47);
  for (const Graph& g : {Graph(12), complete_graph(12), cycle_graph(12), bipartite, prism}) {
    const auto f = canonical_form(g);
    EXPECT_EQ(canonical_form(permute(g, oracle::random_permutation(12, rng))), f);
    EXPECT_EQ(graph_from_canonical(f).edge_count(), g.edge_count());
  }
}

TEST(CanonicalFormTest, CanonicalOrderReproducesForm) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = oracle::random_graph(7, 0.5, rng);
    const auto order = canonical_order(g);
    std::vector<int> inverse(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = static_cast<int>(k);
    EXPECT_EQ(permute(g, inverse), graph_from_canonical(canonical_form(g)));
  }
}

TEST(CanonicalFormTest, RejectsLargeGraphs) {
  EXPECT_THROW(canonical_form(Graph(13)), UnsupportedSize);
}

TEST(EnumerationTest, LabeledCounts) {
  EXPECT_EQ(enumerate_labeled_graphs(2).size(), 2u);
  EXPECT_EQ(enumerate_labeled_graphs(3).size(), 8u);
  const auto four = enumerate_labeled_graphs(4);
  EXPECT_EQ(four.size(), 64u);
  std::set<CanonicalForm> forms;
  for (const auto& g : four) forms.insert(canonical_form(g));
  EXPECT_EQ(forms.size(), 11u);
}

TEST(EnumerationTest, LabeledMaskOrder) {
  const auto three = enumerate_labeled_graphs(3);
  EXPECT_EQ(three[1], Graph::from_edges(3, std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(three[2], Graph::from_edges(3, std::vector<Edge>{{0, 2}}));
  EXPECT_EQ(three[7], complete_graph(3));
}

TEST(EnumerationTest, PairwiseRejectionOracleCounts) {
  EXPECT_EQ(oracle::classes_by_pairwise_rejection(4).size(), 11u);
  EXPECT_EQ(oracle::classes_by_pairwise_rejection(5).size(), 34u);
}

TEST(EnumerationTest, AugmentationMatchesLabeledDedup) {
  for (int n = 1; n <= 6; ++n) {
    std::set<CanonicalForm> labeled;
    for (const auto& g : enumerate_labeled_graphs(n)) labeled.insert(canonical_form(g));
    const auto forms = enumerate_canonical_forms(n);
    EXPECT_EQ(std::set<CanonicalForm>(forms.begin(), forms.end()), labeled) << "n=" << n;
  }
}

TEST(EnumerationTest, ClassCountsThroughSeven) {
  const std::vector<std::size_t> expected{1, 2, 4, 11, 34, 156, 1044};
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(enumerate_graphs(n).size(), expected[n - 1]) << n;
}

TEST(EnumerationTest, OutputIsSortedDistinctAndCanonical) {
  const auto forms = enumerate_canonical_forms(6);
  EXPECT_TRUE(std::is_sorted(forms.begin(), forms.end()));
  EXPECT_EQ(std::adjacent_find(forms.begin(), forms.end()), forms.end());
  for (const auto& f : forms) {
    const Graph g = graph_from_canonical(f);
    EXPECT_EQ(g.order(), 6);
    EXPECT_EQ(canonical_form(g), f);
  }
}

TEST(EnumerationTest, DeterministicAcrossRunsAndWorkers) {
  auto stream = [](int workers) {
    std::ostringstream out;
    write_graph6_stream(out, enumerate_graphs(7, {}, workers));
    return out.str();
  };
  const std::string one = stream(1);
  EXPECT_EQ(one, stream(1));
  EXPECT_EQ(one, stream(3));
}

TEST(EnumerationTest, FilterAppliesAfterDedup) {
  const auto connected = enumerate_graphs(5, [](const Graph& g) { return is_connected(g); });
  EXPECT_EQ(connected.size(), 21u);  // connected graphs on 5 vertices
  const auto regular = enumerate_graphs(4, [](const Graph& g) { return is_regular(g).has_value(); });
  EXPECT_EQ(regular.size(), 4u);  // empty, 2K2, C4, K4
}

TEST(EnumerationTest, RejectsZeroOrder) {
  EXPECT_THROW(enumerate_graphs(0), ContractViolation);
}

}  // namespace
}  // namespace incidence_energy
