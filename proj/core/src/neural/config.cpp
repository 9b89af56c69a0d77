#include "alphavit/neural/config.hpp"

#include <stdexcept>

namespace alphavit::neural {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::AlphaViT: return "alphavit";
    case Family::AlphaViD: return "alphavid";
    case Family::AlphaVDA: return "alphavda";
    case Family::AlphaZero: return "alphazero";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "alphavit") return Family::AlphaViT;
  if (name == "alphavid") return Family::AlphaViD;
  if (name == "alphavda") return Family::AlphaVDA;
  if (name == "alphazero") return Family::AlphaZero;
  throw std::invalid_argument("unknown network family: " + std::string(name));
}

void NetworkConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(history >= 1, "history must be >= 1");
  if (is_transformer()) {
    require(patch_size >= 1 && patch_size % 2 == 1, "patch size must be odd");
    require(embed_dim >= 1, "embedding size must be positive");
    require(heads >= 1 && embed_dim % heads == 0, "embedding size must be divisible by heads");
    require(ffn_dim >= 1, "ffn size must be positive");
    require(encoder_layers >= 1, "need at least one encoder layer");
    require(head_hidden >= 1, "head hidden width must be positive");
    require(games >= 1 && games <= embed_dim, "game one-hot must fit in the embedding");
    require(pos_height >= 1 && pos_width >= 1, "position grid must be non-empty");
    if (family != Family::AlphaViT) require(decoder_layers >= 1, "need at least one decoder layer");
    if (family == Family::AlphaVDA) require(action_tokens >= 1, "need at least one action token");
  } else {
    require(res_blocks >= 0, "residual block count must be >= 0");
    require(filters >= 1, "filter count must be positive");
    require(kernel >= 1 && kernel % 2 == 1, "kernel size must be odd");
    require(value_hidden >= 1, "value hidden width must be positive");
    make_game_id(board.game, board.height, board.width);
  }
}

NetworkConfig small_config(Family family) {
  NetworkConfig cfg;
  cfg.family = family;
  cfg.patch_size = 3;
  cfg.embed_dim = 16;
  cfg.ffn_dim = 32;
  cfg.heads = 4;
  cfg.encoder_layers = 2;
  cfg.decoder_layers = 1;
  cfg.head_hidden = 16;
  cfg.pos_height = 6;
  cfg.pos_width = 6;
  cfg.action_tokens = 12;
  cfg.res_blocks = 2;
  cfg.filters = 8;
  cfg.kernel = 3;
  cfg.value_hidden = 16;
  cfg.board = GameId{Game::Connect4, 4, 5};
  return cfg;
}

}  // namespace alphavit::neural
