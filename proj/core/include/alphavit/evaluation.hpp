#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "alphavit/agents.hpp"
#include "alphavit/board_text.hpp"

namespace alphavit {

inline constexpr double kInitialRating = 1500.0;
inline constexpr double kEloK = 8.0;

// Probability that a player rated `ea` beats one rated `eb`.
double elo_expected(double ea, double eb);

// ea + k * (n_win - n_games * p); draws count half a win in n_win.
double elo_update(double ea, double n_win, int n_games, double p, double k = kEloK);

enum class MatchResult { AWins, BWins, Draw, Skipped };

std::string to_string(MatchResult r);

struct MatchOutcome {
  MatchResult result = MatchResult::Draw;
  MatchRecord record;
};

// Plays one game with `a` moving first. Either agent being unable to play
// the variant yields Skipped with an empty record.
MatchOutcome play_match(const Agent& a, const Agent& b, const GameId& id, std::uint64_t seed);

struct MatchLog {
  int tournament = 0;
  GameId id;
  std::string a;
  std::string b;
  MatchResult result = MatchResult::Draw;
  int moves = 0;
  std::uint64_t seed = 0;
};

// "tournament=<t> game=<id> a=<desc> b=<desc> winner=<a|b|draw|skip> moves=<n> seed=<s>"
std::string format_match_line(const MatchLog& m);

struct TournamentOptions {
  int tournaments = 50;
  int games_per_pair = 2;  // first player alternates; must be even
  double k = kEloK;
  std::uint64_t seed = 0;
  int threads = 1;
  std::function<void(const MatchLog&)> on_match;
};

struct RatingTable {
  GameId id;
  std::vector<std::string> agents;
  std::vector<double> ratings;
  std::vector<MatchLog> log;

  // Aligned text table sorted by rating, best first.
  std::string format() const;
  // "agent,rating" rows in agent order.
  std::string csv() const;
};

// Every tournament plays each unordered pair games_per_pair times and then
// applies one Elo update per pairing, in a fixed pair order. Matches of one
// tournament may run in parallel; results do not depend on `threads`.
RatingTable round_robin(const std::vector<std::shared_ptr<Agent>>& agents, const GameId& id,
                        const TournamentOptions& options);

}  // namespace alphavit
