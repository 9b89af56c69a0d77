#pragma once

#include <vector>

#include "alphavit/game.hpp"
#include "alphavit/rng.hpp"

namespace alphavit {

// Baseline MCTS with random rollouts (the MCTS100 / MCTS400 opponents).
// Selection is UCB1, Q + c * sqrt(ln N(s) / N(s, a)), with unvisited edges
// taken first in action order. The root is expanded up front; every other
// node creates its children on its fifth visit and until then is evaluated
// by a uniform-random rollout. Values are winner colours (draw 0), backed up
// from the perspective of the player to move at each edge's parent.
struct UctParams {
  int simulations = 100;
  double exploration = 1.4142135623730951;
  int expand_threshold = 5;
};

struct UctResult {
  Action action;
  std::vector<int> visits;  // per action index
};

// Throws ContractViolation on a terminal root.
UctResult uct_search(const GameState& root, const UctParams& params, Rng& rng);

// Plays uniformly random moves to the end and returns the winner colour.
int random_rollout(GameState state, Rng& rng);

// Uniform over legal_moves(); throws ContractViolation when terminal.
Action random_move(const GameState& state, Rng& rng);

}  // namespace alphavit
