#pragma once

#include <string>
#include <string_view>

#include "alphavit/game.hpp"

namespace alphavit::neural {

enum class Family { AlphaViT, AlphaViD, AlphaVDA, AlphaZero };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

// Architecture hyperparameters. Defaults are the full-size settings
// (embedding 512, FFN 1024, 16 heads, patch 5, 4 encoder layers, one decoder
// layer, 256 action tokens; 3 residual blocks of 256 filters for the
// ResNet baseline).
struct NetworkConfig {
  Family family = Family::AlphaViT;
  int history = 1;  // T; the input has 2T + 1 planes

  // Transformer families.
  int patch_size = 5;  // odd; stride 1 and padding patch_size / 2
  int embed_dim = 512;
  int ffn_dim = 1024;
  int heads = 16;
  int encoder_layers = 4;
  int decoder_layers = 1;
  int head_hidden = 2048;  // hidden width of the value / policy MLPs
  int games = kNumGames;
  int pos_height = 9;  // base grid of the learnable position embeddings
  int pos_width = 9;
  int action_tokens = 256;  // AlphaVDA learnable decoder inputs

  // ResNet baseline, built for one board.
  int res_blocks = 3;
  int filters = 256;
  int kernel = 3;
  int value_hidden = 256;
  GameId board{Game::Othello, 8, 8};

  int in_planes() const { return 2 * history + 1; }
  bool is_transformer() const { return family != Family::AlphaZero; }

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

// Small settings used by tests and desk-scale runs.
NetworkConfig small_config(Family family);

// Game-family slot used for the one-hot game token. Board variants share
// the slot of their family.
inline int game_slot(const GameId& id) { return static_cast<int>(id.game); }

}  // namespace alphavit::neural
