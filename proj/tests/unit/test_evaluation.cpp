#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "alphavit/evaluation.hpp"
#include "test_support.hpp"

using namespace alphavit;

namespace {

// Always plays the lowest legal action index.
class FirstMoveAgent final : public Agent {
 public:
  explicit FirstMoveAgent(std::string name) : name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Action select_move(const GameState& state, Rng&) const override { return legal_moves(state).front(); }

 private:
  std::string name_;
};

class NoOthelloAgent final : public Agent {
 public:
  std::string name() const override { return "no-othello"; }
  bool supports(const GameId& id) const override { return id.game != Game::Othello; }
  Action select_move(const GameState& state, Rng& rng) const override { return random_move(state, rng); }
};

}  // namespace

TEST(Elo, ExpectedScore) {
  EXPECT_NEAR(elo_expected(1500, 1500), 0.5, 1e-12);
  EXPECT_NEAR(elo_expected(1900, 1500), 10.0 / 11.0, 1e-12);
  EXPECT_NEAR(elo_expected(1500, 1900), 1.0 / 11.0, 1e-12);
}

TEST(Elo, Update) {
  EXPECT_NEAR(elo_update(1500, 5, 10, 0.5), 1500.0, 1e-12);
  EXPECT_NEAR(elo_update(1500, 10, 10, 0.5), 1540.0, 1e-12);
  EXPECT_NEAR(elo_update(1600, 10 * elo_expected(1600, 1400), 10, elo_expected(1600, 1400)), 1600.0, 1e-9);
  EXPECT_THROW(elo_update(1500, 11, 10, 0.5), std::invalid_argument);
  EXPECT_THROW(elo_update(1500, -1, 10, 0.5), std::invalid_argument);
}

TEST(Elo, PairwiseUpdatesConserveTheSum) {
  Rng rng(5);
  std::uniform_real_distribution<double> rating(1000, 2000);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = rating(rng);
    const double b = rating(rng);
    const int n = 2 + 2 * static_cast<int>(rng() % 5);
    const double wins = static_cast<double>(rng() % (2 * n + 1)) / 2.0;
    const double a2 = elo_update(a, wins, n, elo_expected(a, b));
    const double b2 = elo_update(b, n - wins, n, elo_expected(b, a));
    EXPECT_NEAR(a2 + b2, a + b, 1e-9);
  }
}

TEST(PlayMatch, DeterministicReplay) {
  const RandomAgent a;
  const UctAgent b(UctParams{20});
  const GameId id = parse_variant("othello_6x6");
  const MatchOutcome x = play_match(a, b, id, 77);
  const MatchOutcome y = play_match(a, b, id, 77);
  EXPECT_EQ(x.result, y.result);
  EXPECT_EQ(x.record, y.record);
  ASSERT_FALSE(x.record.moves.empty());
  EXPECT_EQ(x.record.moves.front().player, kFirstPlayer);
}

TEST(PlayMatch, UnsupportedAgentIsSkipped) {
  const NoOthelloAgent a;
  const RandomAgent b;
  const MatchOutcome m = play_match(a, b, parse_variant("othello"), 1);
  EXPECT_EQ(m.result, MatchResult::Skipped);
  EXPECT_TRUE(m.record.moves.empty());
  EXPECT_EQ(to_string(MatchResult::Skipped), "skip");
}

TEST(PlayMatch, MinimaxBeatsRandomOnConnect4) {
  const MinimaxAgent minimax(3);
  const RandomAgent random;
  const GameId id = parse_variant("connect4");
  int wins = 0;
  for (int g = 0; g < 20; ++g) {
    const bool first = g % 2 == 0;
    const MatchOutcome m = first ? play_match(minimax, random, id, g) : play_match(random, minimax, id, g);
    if ((first && m.result == MatchResult::AWins) || (!first && m.result == MatchResult::BWins)) ++wins;
  }
  EXPECT_GE(wins, 18);
}

TEST(PlayMatch, RandomFirstPlayerRateOnGomoku) {
  const RandomAgent random;
  const GameId id = parse_variant("gomoku");
  int first = 0;
  const int n = 300;
  for (int g = 0; g < n; ++g) {
    if (play_match(random, random, id, g).result == MatchResult::AWins) ++first;
  }
  EXPECT_GE(first, 0.4 * n);
  EXPECT_LE(first, 0.75 * n);
}

TEST(RoundRobin, IdenticalDeterministicAgentsStayAt1500) {
  std::vector<std::shared_ptr<Agent>> agents{std::make_shared<FirstMoveAgent>("a"),
                                             std::make_shared<FirstMoveAgent>("b")};
  TournamentOptions opt;
  opt.tournaments = 5;
  const RatingTable t = round_robin(agents, parse_variant("gomoku_6x6"), opt);
  EXPECT_NEAR(t.ratings[0], 1500.0, 1e-9);
  EXPECT_NEAR(t.ratings[1], 1500.0, 1e-9);
  EXPECT_EQ(t.log.size(), 10u);
}

TEST(RoundRobin, ConservesRatingSumAndIsReproducible) {
  std::vector<std::shared_ptr<Agent>> agents{std::make_shared<RandomAgent>(), std::make_shared<MinimaxAgent>(1),
                                             std::make_shared<UctAgent>(UctParams{10})};
  TournamentOptions opt;
  opt.tournaments = 3;
  opt.seed = 4;
  const GameId id = parse_variant("connect4_5x4");
  const RatingTable a = round_robin(agents, id, opt);
  EXPECT_NEAR(std::accumulate(a.ratings.begin(), a.ratings.end(), 0.0), 3 * 1500.0, 1e-9);
  opt.threads = 3;
  const RatingTable b = round_robin(agents, id, opt);
  EXPECT_EQ(a.ratings, b.ratings);
  EXPECT_EQ(a.csv(), b.csv());
  EXPECT_EQ(a.log.size(), 3u * 3u * 2u);
}

TEST(RoundRobin, DominantAgentEndsOnTop) {
  std::vector<std::shared_ptr<Agent>> agents{std::make_shared<RandomAgent>(), std::make_shared<MinimaxAgent>(2),
                                             std::make_shared<RandomAgent>()};
  TournamentOptions opt;
  opt.tournaments = 4;
  const RatingTable t = round_robin(agents, parse_variant("connect4"), opt);
  EXPECT_GT(t.ratings[1], t.ratings[0]);
  EXPECT_GT(t.ratings[1], t.ratings[2]);
  const std::string text = t.format();
  const std::size_t rows = text.find('\n', text.find('\n') + 1) + 1;
  EXPECT_EQ(text.compare(rows, 9, "minimax:2"), 0) << text;
}

TEST(RoundRobin, OddGamesPerPairRejected) {
  std::vector<std::shared_ptr<Agent>> agents{std::make_shared<RandomAgent>(), std::make_shared<RandomAgent>()};
  TournamentOptions opt;
  opt.games_per_pair = 3;
  EXPECT_THROW(round_robin(agents, parse_variant("connect4"), opt), std::invalid_argument);
}

TEST(MakeAgent, Descriptors) {
  EXPECT_EQ(make_agent("random")->name(), "random");
  EXPECT_EQ(make_agent("mcts:100")->name(), "mcts:100");
  EXPECT_EQ(make_agent("minimax:3")->name(), "minimax:3");
  EXPECT_THROW(make_agent("mcts:zero"), std::invalid_argument);
  EXPECT_THROW(make_agent("alphabeta"), std::invalid_argument);
  EXPECT_THROW(make_agent("alphavit:/nonexistent/ckpt.bin"), std::exception);
}

TEST(MatchLine, Format) {
  MatchLog m;
  m.tournament = 2;
  m.id = parse_variant("connect4");
  m.a = "random";
  m.b = "mcts:100";
  m.result = MatchResult::BWins;
  m.moves = 17;
  m.seed = 5;
  EXPECT_EQ(format_match_line(m), "tournament=2 game=connect4 a=random b=mcts:100 winner=b moves=17 seed=5");
}
