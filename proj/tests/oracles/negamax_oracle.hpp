#pragma once

#include <vector>

#include "rules_oracle.hpp"

namespace oracle {

struct NegamaxResult {
  double value = 0.0;             // for the player to move at the root
  std::vector<int> best_actions;  // increasing action indices
};

// Independent depth-limited negamax with the same leaf scoring as the
// engine's heuristic player, written against oracle::Board.
NegamaxResult negamax_root(const Board& root, int depth);

// Heuristic value of a position for `color`; finished positions score the
// terminal reward.
double leaf_score(const Board& b, int color);

}  // namespace oracle
