#include "alphavit/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "alphavit/rng.hpp"

namespace alphavit {

double elo_expected(double ea, double eb) { return 1.0 / (1.0 + std::pow(10.0, (eb - ea) / 400.0)); }

double elo_update(double ea, double n_win, int n_games, double p, double k) {
  if (n_games < 0 || n_win < 0.0 || n_win > n_games) throw std::invalid_argument("wins must lie in [0, games]");
  return ea + k * (n_win - n_games * p);
}

std::string to_string(MatchResult r) {
  switch (r) {
    case MatchResult::AWins: return "a";
    case MatchResult::BWins: return "b";
    case MatchResult::Draw: return "draw";
    case MatchResult::Skipped: return "skip";
  }
  return "?";
}

MatchOutcome play_match(const Agent& a, const Agent& b, const GameId& id, std::uint64_t seed) {
  MatchOutcome out;
  if (!a.supports(id) || !b.supports(id)) {
    out.result = MatchResult::Skipped;
    return out;
  }
  Rng rng(seed);
  GameState state = GameState::initial(id);
  while (!is_terminal(state.outcome())) {
    const Agent& mover = state.to_move() == kFirstPlayer ? a : b;
    const Action action = mover.select_move(state, rng);
    out.record.moves.push_back({static_cast<int>(out.record.moves.size()) + 1, state.to_move(), action_index(action, id)});
    state = apply_move(state, action);
  }
  out.record.result = winner_color(state.outcome());
  out.result = out.record.result == kFirstPlayer    ? MatchResult::AWins
               : out.record.result == kSecondPlayer ? MatchResult::BWins
                                                     : MatchResult::Draw;
  return out;
}

std::string format_match_line(const MatchLog& m) {
  std::ostringstream os;
  os << "tournament=" << m.tournament << " game=" << variant_name(m.id) << " a=" << m.a << " b=" << m.b
     << " winner=" << to_string(m.result) << " moves=" << m.moves << " seed=" << m.seed;
  return os.str();
}

std::string RatingTable::format() const {
  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ratings[x] > ratings[y]; });
  std::size_t width = 5;
  for (const auto& a : agents) width = std::max(width, a.size());
  std::ostringstream os;
  os << variant_name(id) << '\n';
  char line[64];
  os << "agent" << std::string(width - 5 + 2, ' ') << "rating\n";
  for (std::size_t i : order) {
    std::snprintf(line, sizeof line, "%8.1f", ratings[i]);
    os << agents[i] << std::string(width - agents[i].size() + 2, ' ') << line << '\n';
  }
  return os.str();
}

std::string RatingTable::csv() const {
  std::ostringstream os;
  char value[64];
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::snprintf(value, sizeof value, "%.6f", ratings[i]);
    os << agents[i] << ',' << value << '\n';
  }
  return os.str();
}

RatingTable round_robin(const std::vector<std::shared_ptr<Agent>>& agents, const GameId& id,
                        const TournamentOptions& options) {
  if (agents.size() < 2) throw std::invalid_argument("a tournament needs at least two agents");
  if (options.games_per_pair < 2 || options.games_per_pair % 2 != 0) {
    throw std::invalid_argument("games per pairing must be even and positive");
  }
  if (options.tournaments < 1) throw std::invalid_argument("need at least one tournament");

  RatingTable table;
  table.id = id;
  for (const auto& a : agents) table.agents.push_back(a->name());
  table.ratings.assign(agents.size(), kInitialRating);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) pairs.emplace_back(i, j);
  }
  const int per_pair = options.games_per_pair;
  const int n_matches = static_cast<int>(pairs.size()) * per_pair;

  for (int t = 1; t <= options.tournaments; ++t) {
    std::vector<MatchLog> logs(n_matches);
    auto run = [&](int m) {
      const auto [i, j] = pairs[m / per_pair];
      const int game = m % per_pair;
      const bool swap = game % 2 == 1;
      const Agent& first = swap ? *agents[j] : *agents[i];
      const Agent& second = swap ? *agents[i] : *agents[j];
      const std::uint64_t seed =
          derive_seed(options.seed, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m)});
      const MatchOutcome outcome = play_match(first, second, id, seed);
      logs[m] = MatchLog{t, id, first.name(), second.name(), outcome.result,
                         static_cast<int>(outcome.record.moves.size()), seed};
    };
    const int threads = std::max(1, std::min(options.threads, n_matches));
    if (threads == 1) {
      for (int m = 0; m < n_matches; ++m) run(m);
    } else {
      std::atomic<int> next{0};
      std::vector<std::exception_ptr> errors(threads);
      std::vector<std::thread> workers;
      for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (int m = next++; m < n_matches; m = next++) run(m);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      double wins_i = 0.0;
      int played = 0;
      for (int g = 0; g < per_pair; ++g) {
        const MatchLog& log = logs[p * per_pair + g];
        if (log.result == MatchResult::Skipped) continue;
        ++played;
        const bool i_first = g % 2 == 0;
        if (log.result == MatchResult::Draw) {
          wins_i += 0.5;
        } else if ((log.result == MatchResult::AWins) == i_first) {
          wins_i += 1.0;
        }
      }
      if (played > 0) {
        const double ri = table.ratings[i];
        const double rj = table.ratings[j];
        table.ratings[i] = elo_update(ri, wins_i, played, elo_expected(ri, rj), options.k);
        table.ratings[j] = elo_update(rj, played - wins_i, played, elo_expected(rj, ri), options.k);
      }
    }
    for (const MatchLog& log : logs) {
      if (options.on_match) options.on_match(log);
      table.log.push_back(log);
    }
  }
  return table;
}

}  // namespace alphavit
