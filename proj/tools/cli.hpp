#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "alphavit/game.hpp"
#include "alphavit/neural/config.hpp"
#include "alphavit/training.hpp"

namespace alphavit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDivergence = 3;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "AVIT_OUTPUT_DIR";

// Small networks and short-run training settings that fit a desktop CPU.
neural::NetworkConfig desk_network(neural::Family family, const GameId& board);
TrainConfig desk_training(const std::vector<GameId>& games);

// Full-size settings from the reference hyperparameter tables.
neural::NetworkConfig full_network(neural::Family family, const GameId& board);
TrainConfig full_training(const std::vector<GameId>& games);

// Parses a move typed by a human: a column for Connect4, "<row> <col>" or
// "pass" otherwise. Returns nullopt unless the move is legal in `state`.
std::optional<Action> parse_human_move(const std::string& text, const GameState& state);

// Entry point shared by the executable and the tests. Subcommands: train,
// tournament, play, info.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace alphavit::cli
