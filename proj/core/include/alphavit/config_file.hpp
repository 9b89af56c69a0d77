#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "alphavit/neural/config.hpp"
#include "alphavit/training.hpp"

namespace alphavit {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines; '#' starts a comment; blank lines are ignored. Throws
// std::invalid_argument naming the line for anything else.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::filesystem::path& path);

// Applies settings to a network and training configuration. Keys:
//
//   num_iterations n_queue n_epoch batch_size learning_rate momentum
//   weight_decay c_puct epsilon dirichlet_alpha t min_fill
//   bootstrap_simulations threads seed
//   patch_size stride num_encoder_layers num_decoder_layers embedding_size
//   forward_size num_heads action_token_size head_hidden pos_height
//   pos_width num_residual_blocks kernel_size num_filters value_hidden
//   num_simulations num_selfplay t_opening tau
//
// The last four apply to every game in cfg.games, or to one game when
// prefixed with its variant name ("gomoku_6x6.tau = 20"). Unknown keys and
// malformed values throw std::invalid_argument.
void apply_settings(const KeyValues& settings, neural::NetworkConfig& net, TrainConfig& cfg);

}  // namespace alphavit
