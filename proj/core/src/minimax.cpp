#include "alphavit/minimax.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace alphavit {
namespace {

constexpr int kLineDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
constexpr int kOthelloEndgameEmpties = 6;

double run_score(int length, Game game) {
  const double r = kMinimaxBaseReward;
  switch (length) {
    case 2: return r;
    case 3: return r * r;
    case 4: return game == Game::Gomoku ? r * r * r : 0.0;
    default: return 0.0;
  }
}

double connection_eval(const GameState& s) {
  const GameId& id = s.id();
  double total = 0.0;
  for (int r = 0; r < id.height; ++r) {
    for (int c = 0; c < id.width; ++c) {
      const int color = s.at(r, c);
      if (color == 0) continue;
      for (const auto& d : kLineDirs) {
        const int pr = r - d[0];
        const int pc = c - d[1];
        if (pr >= 0 && pr < id.height && pc >= 0 && pc < id.width && s.at(pr, pc) == color) continue;
        int n = 1;
        int rr = r + d[0];
        int cc = c + d[1];
        while (rr >= 0 && rr < id.height && cc >= 0 && cc < id.width && s.at(rr, cc) == color) {
          ++n;
          rr += d[0];
          cc += d[1];
        }
        total += color * run_score(n, id.game);
      }
    }
  }
  return total;
}

double search(const GameState& s, int depth, int minimax_color, bool full_depth) {
  if (is_terminal(s.outcome()) || (!full_depth && depth == 0)) {
    return minimax_leaf_value(s, minimax_color);
  }
  const bool maximising = s.to_move() == minimax_color;
  double best = maximising ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
  for (const auto& m : legal_moves(s)) {
    const double v = search(apply_move(s, m), depth - 1, minimax_color, full_depth);
    best = maximising ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

const std::vector<int>& othello_cell_weights(int side) {
  static const std::vector<int> w6 = {
      30, -5,  2,  2, -5,  30,  //
      -5, -15, 3,  3, -15, -5,  //
      2,  3,   0,  0, 3,   2,   //
      2,  3,   0,  0, 3,   2,   //
      -5, -15, 3,  3, -15, -5,  //
      30, -5,  2,  2, -5,  30,
  };
  static const std::vector<int> w8 = {
      120, -20, 20, 5,  5,  20, -20, 120,  //
      -20, -40, -5, -5, -5, -5, -40, -20,  //
      20,  -5,  15, 3,  3,  15, -5,  20,   //
      5,   -5,  3,  3,  3,  3,  -5,  5,    //
      5,   -5,  3,  3,  3,  3,  -5,  5,    //
      20,  -5,  15, 3,  3,  15, -5,  20,   //
      -20, -40, -5, -5, -5, -5, -40, -20,  //
      120, -20, 20, 5,  5,  20, -20, 120,
  };
  if (side == 6) return w6;
  if (side == 8) return w8;
  throw std::invalid_argument("no othello evaluation table for side " + std::to_string(side));
}

double evaluate_leaf(const GameState& state, int minimax_color) {
  const GameId& id = state.id();
  if (id.game != Game::Othello) return connection_eval(state) * minimax_color;
  if (id.height != id.width) throw std::invalid_argument("othello evaluation needs a square board");
  const auto& weights = othello_cell_weights(id.height);
  double total = 0.0;
  const auto cells = state.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) total += weights[i] * cells[i];
  return total * minimax_color;
}

double terminal_value(const GameState& state, int minimax_color) {
  const int winner = winner_color(state.outcome());
  const double r = kMinimaxBaseReward;
  switch (state.id().game) {
    case Game::Connect4: return r * r * r * winner * minimax_color;
    case Game::Gomoku: return r * r * r * r * winner * minimax_color;
    case Game::Othello: return kOthelloTerminalValue * winner * minimax_color;
  }
  return 0.0;
}

double minimax_leaf_value(const GameState& state, int minimax_color) {
  return is_terminal(state.outcome()) ? terminal_value(state, minimax_color)
                                      : evaluate_leaf(state, minimax_color);
}

bool othello_endgame(const GameState& state) {
  return state.id().game == Game::Othello && state.empty_count() <= kOthelloEndgameEmpties;
}

MinimaxResult minimax_search(const GameState& state, int depth, Rng& rng) {
  if (is_terminal(state.outcome())) throw ContractViolation("minimax on a terminal state");
  if (depth < 1) throw std::invalid_argument("minimax depth must be >= 1");
  const int color = state.to_move();
  const bool full = othello_endgame(state);
  MinimaxResult result;
  result.value = -std::numeric_limits<double>::infinity();
  for (const auto& m : legal_moves(state)) {
    const double v = search(apply_move(state, m), depth - 1, color, full);
    if (v > result.value) {
      result.value = v;
      result.best_actions.clear();
    }
    if (v == result.value) result.best_actions.push_back(m);
  }
  std::uniform_int_distribution<std::size_t> pick(0, result.best_actions.size() - 1);
  result.action = result.best_actions[pick(rng)];
  return result;
}

Action minimax_move(const GameState& state, int depth, Rng& rng) {
  return minimax_search(state, depth, rng).action;
}

}  // namespace alphavit
