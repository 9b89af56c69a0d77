#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "alphavit/search.hpp"
#include "test_support.hpp"

using namespace alphavit;

namespace {

EdgeStats edge(int n, double q, float p) {
  EdgeStats e;
  e.visits = n;
  e.value_sum = q * n;
  e.mean_value = q;
  e.prior = p;
  return e;
}

SearchParams no_noise(int sims) {
  SearchParams p;
  p.simulations = sims;
  p.dirichlet_epsilon = 0.0;
  return p;
}

// Independent evaluation of the selection score.
double oracle_score(const EdgeStats& e, int total, double c) {
  return e.mean_value + c * e.prior * std::sqrt(static_cast<double>(total)) / (1.0 + e.visits);
}

}  // namespace

TEST(PuctSelect, AllUnvisitedPicksLowestIndex) {
  const std::vector<EdgeStats> edges{edge(0, 0, 0.2f), edge(0, 0, 0.5f), edge(0, 0, 0.3f)};
  EXPECT_EQ(puct_select(edges, 1.25), 0u);
}

TEST(PuctSelect, HandEvaluatedScores) {
  const std::vector<EdgeStats> edges{edge(9, 0.5, 0.1f), edge(0, 0.0, 0.9f)};
  const int total = 9;
  EXPECT_NEAR(oracle_score(edges[0], total, 1.25), 0.5375, 1e-3);
  EXPECT_NEAR(oracle_score(edges[1], total, 1.25), 3.375, 1e-3);
  EXPECT_EQ(puct_select(edges, 1.25), 1u);
}

TEST(PuctSelect, SingleEdge) {
  const std::vector<EdgeStats> edges{edge(3, -0.9, 1.0f)};
  EXPECT_EQ(puct_select(edges, 1.25), 0u);
}

TEST(PuctSelect, EmptyIsContractViolation) {
  EXPECT_THROW(puct_select(std::span<const EdgeStats>{}, 1.25), ContractViolation);
}

TEST(PuctSelect, MatchesArgmaxOfOracleScore) {
  Rng rng(17);
  std::uniform_int_distribution<int> visits(0, 30);
  std::uniform_real_distribution<double> q(-1.0, 1.0);
  std::uniform_real_distribution<float> p(0.0f, 1.0f);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<EdgeStats> edges;
    for (int i = 0; i < 7; ++i) edges.push_back(edge(visits(rng), q(rng), p(rng)));
    const int total = std::accumulate(edges.begin(), edges.end(), 0,
                                      [](int s, const EdgeStats& e) { return s + e.visits; });
    std::size_t best = 0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (oracle_score(edges[i], total, 1.25) > oracle_score(edges[best], total, 1.25)) best = i;
    }
    EXPECT_EQ(puct_select(edges, 1.25), best);
  }
}

TEST(PuctSelect, ArgmaxStableUnderCommonShiftOfQ) {
  Rng rng(5);
  std::uniform_real_distribution<double> q(-0.5, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EdgeStats> edges;
    for (int i = 0; i < 5; ++i) edges.push_back(edge(trial % 7 + i, q(rng), 0.2f));
    std::vector<EdgeStats> shifted = edges;
    for (auto& e : shifted) e.mean_value += 0.25;
    EXPECT_EQ(puct_select(edges, 1.25), puct_select(shifted, 1.25));
  }
}

TEST(MctsSearch, OneSimulationVisitsOneRootEdge) {
  Rng rng(1);
  const UniformEvaluator eval;
  const SearchResult r = mcts_search(GameState::initial(parse_variant("gomoku_6x6")), eval, no_noise(1), rng);
  EXPECT_EQ(std::count(r.visits.begin(), r.visits.end(), 1), 1);
  EXPECT_EQ(std::accumulate(r.visits.begin(), r.visits.end(), 0), 1);
}

TEST(MctsSearch, VisitConservationAndQTimesNEqualsW) {
  const test_support::HashEvaluator eval;
  for (const GameId& id : builtin_variants()) {
    for (int seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      const GameState root = test_support::random_position(id, seed, rng);
      const int sims = 50 + 7 * seed;
      PuctSearch search(root, eval, no_noise(sims), rng);
      std::map<int, double> w;
      std::map<int, int> n;
      search.set_backup_observer([&](std::span<const int> edges, double leaf) {
        int node = 0;
        for (int e : edges) {
          const double sign = search.tree().node(node).state.to_move();
          w[e] += sign * leaf;
          n[e] += 1;
          node = search.tree().links(search.tree().node(node))[e - search.tree().node(node).first_edge].child;
        }
      });
      search.run(sims);
      const auto& tree = search.tree();
      int total = 0;
      for (const auto& s : tree.stats(tree.root())) total += s.visits;
      EXPECT_EQ(total, sims);
      for (int i = 0; i < tree.size(); ++i) {
        const SearchNode& node = tree.node(i);
        const auto stats = tree.stats(node);
        for (int k = 0; k < node.edge_count; ++k) {
          const int e = node.first_edge + k;
          EXPECT_EQ(stats[k].visits, n[e]);
          EXPECT_DOUBLE_EQ(stats[k].value_sum, w[e]);
          if (stats[k].visits > 0) {
            EXPECT_DOUBLE_EQ(stats[k].mean_value * stats[k].visits, stats[k].value_sum);
          } else {
            EXPECT_EQ(stats[k].mean_value, 0.0);
          }
        }
      }
    }
  }
}

TEST(MctsSearch, ChildVisitsMatchParentEdge) {
  const test_support::HashEvaluator eval;
  Rng rng(2);
  PuctSearch search(GameState::initial(parse_variant("connect4_5x4")), eval, no_noise(300), rng);
  search.run(300);
  const auto& tree = search.tree();
  for (int i = 0; i < tree.size(); ++i) {
    const SearchNode& node = tree.node(i);
    const auto links = tree.links(node);
    const auto stats = tree.stats(node);
    for (int k = 0; k < node.edge_count; ++k) {
      if (links[k].child < 0) continue;
      const SearchNode& child = tree.node(links[k].child);
      if (!child.expanded || is_terminal(child.state.outcome())) continue;
      int below = 0;
      for (const auto& s : tree.stats(child)) below += s.visits;
      // The visit that expanded the child does not pass through its edges.
      EXPECT_EQ(below, stats[k].visits - 1);
    }
  }
}

TEST(MctsSearch, GomokuFindsImmediateFive) {
  const GameState s = test_support::board(
      "gomoku 9 9 1\n"
      ".........\n"
      ".........\n"
      "..XXXX...\n"
      ".........\n"
      "...O.....\n"
      "....O....\n"
      ".....O...\n"
      "......O..\n"
      ".........\n");
  const std::vector<int> wins = test_support::immediate_wins(s);
  ASSERT_EQ(wins, (std::vector<int>{19, 24}));
  Rng rng(3);
  const UniformEvaluator eval;
  const SearchResult r = mcts_search(s, eval, no_noise(400), rng);
  const int best = static_cast<int>(std::max_element(r.visits.begin(), r.visits.end()) - r.visits.begin());
  EXPECT_TRUE(best == 19 || best == 24) << best;
}

TEST(MctsSearch, TerminalRootThrows) {
  const GameState s = test_support::board("gomoku 6 6 -1\nXXXXX.\nOOOO..\n......\n......\n......\n......\n");
  ASSERT_TRUE(is_terminal(s.outcome()));
  Rng rng(0);
  EXPECT_THROW(mcts_search(s, UniformEvaluator{}, no_noise(10), rng), ContractViolation);
}

TEST(MctsSearch, DirichletNoiseKeepsPriorsNormalised) {
  Rng rng(4);
  SearchParams p = no_noise(10);
  p.dirichlet_epsilon = 0.2;
  PuctSearch search(GameState::initial(parse_variant("othello")), UniformEvaluator{}, p, rng);
  double total = 0.0;
  for (const auto& s : search.tree().stats(search.tree().root())) {
    EXPECT_GE(s.prior, 0.0f);
    EXPECT_LE(s.prior, 1.0f);
    total += s.prior;
  }
  EXPECT_NEAR(total, 1.0, 1e-5);
}

TEST(MctsSearch, SeededSearchIsReproducible) {
  const test_support::HashEvaluator eval;
  SearchParams p = no_noise(100);
  p.dirichlet_epsilon = 0.25;
  Rng a(9), b(9);
  const GameState root = GameState::initial(parse_variant("gomoku_6x6"));
  EXPECT_EQ(mcts_search(root, eval, p, a).visits, mcts_search(root, eval, p, b).visits);
}

TEST(SearchParams, Validation) {
  SearchParams p;
  EXPECT_NO_THROW(p.validate());
  p.simulations = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SearchParams{};
  p.c_puct = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SearchParams{};
  p.dirichlet_epsilon = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(PlayFromVisits, SoftmaxExamples) {
  const std::vector<int> legal{0, 1, 2};
  const std::vector<int> v1{1, 1, 0};
  const std::vector<int> l2{0, 1};
  const auto half = softmax_visit_probabilities(v1, l2, 3.0);
  EXPECT_NEAR(half[0], 0.5, 1e-12);
  EXPECT_NEAR(half[1], 0.5, 1e-12);

  const std::vector<int> v{30, 20, 10};
  const auto p = softmax_visit_probabilities(v, legal, 100.0);
  // exp(0.3), exp(0.2), exp(0.1) normalised.
  const double z = std::exp(0.3) + std::exp(0.2) + std::exp(0.1);
  EXPECT_NEAR(p[0], std::exp(0.3) / z, 1e-12);
  EXPECT_NEAR(p[0], 0.3672, 5e-5);
  EXPECT_NEAR(p[1], 0.3322, 5e-5);
  EXPECT_NEAR(p[2], 0.3006, 5e-5);
}

TEST(PlayFromVisits, GreedyPicksArgmax) {
  const std::vector<int> v{5, 9, 2};
  const std::vector<int> legal{0, 1, 2};
  Rng rng(0);
  EXPECT_EQ(play_from_visits(v, legal, PlayPolicy{}, rng), 1);
  const std::vector<int> tie{4, 4, 1};
  EXPECT_EQ(play_from_visits(tie, legal, PlayPolicy{}, rng), 0);
}

TEST(PlayFromVisits, SoftmaxSamplingFrequencies) {
  const std::vector<int> v{30, 20, 10};
  const std::vector<int> legal{0, 1, 2};
  Rng rng(11);
  std::vector<int> counts(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++counts[play_from_visits(v, legal, PlayPolicy{PlayMode::Softmax, 100.0}, rng)];
  EXPECT_NEAR(counts[0] / double(n), 0.3672, 0.015);
  EXPECT_NEAR(counts[2] / double(n), 0.3006, 0.015);
}

TEST(LegalPriors, RenormalisesAndFallsBack) {
  const std::vector<float> policy{0.2f, 0.6f, 0.2f, 0.0f};
  const std::vector<int> legal{0, 2};
  const auto p = legal_priors(policy, legal);
  EXPECT_FLOAT_EQ(p[0], 0.5f);
  EXPECT_FLOAT_EQ(p[1], 0.5f);
  const std::vector<int> zero{3};
  EXPECT_FLOAT_EQ(legal_priors(policy, zero)[0], 1.0f);
}
