#pragma once

#include <vector>

#include "alphavit/game.hpp"
#include "alphavit/rng.hpp"

namespace alphavit {

// Heuristic tables for the Othello evaluation (row-major).
const std::vector<int>& othello_cell_weights(int side);

inline constexpr double kMinimaxBaseReward = 100.0;
inline constexpr double kOthelloTerminalValue = 1000.0;

// Static evaluation of a position for `minimax_color`, ignoring whether the
// game is over:
//  - Connect4: every maximal run of 2 or 3 same-coloured discs (any of the
//    four line directions) scores R or R^2 times disc colour times
//    minimax colour, with R = 100.
//  - Gomoku: as Connect4 plus runs of 4 scoring R^3.
//  - Othello: sum of cell weight * occupancy * minimax colour using the 6x6
//    or 8x8 table.
double evaluate_leaf(const GameState& state, int minimax_color);

// Value of a finished game: R^3 (Connect4), R^4 (Gomoku) or 1000 (Othello)
// times winner colour times minimax colour; draws are 0.
double terminal_value(const GameState& state, int minimax_color);

// terminal_value() for finished games, evaluate_leaf() otherwise.
double minimax_leaf_value(const GameState& state, int minimax_color);

struct MinimaxResult {
  Action action;
  double value = 0.0;
  std::vector<Action> best_actions;  // every root move attaining `value`
};

// Plain full-width minimax to `depth` plies. Othello positions with at most
// six empty cells are searched to the end of the game instead. Root ties
// are broken uniformly at random with `rng`.
MinimaxResult minimax_search(const GameState& state, int depth, Rng& rng);
Action minimax_move(const GameState& state, int depth, Rng& rng);

// True when Othello's endgame rule switches the search to full depth.
bool othello_endgame(const GameState& state);

}  // namespace alphavit
