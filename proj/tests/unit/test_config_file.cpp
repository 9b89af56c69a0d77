#include <gtest/gtest.h>

#include <sstream>

#include "alphavit/config_file.hpp"

using namespace alphavit;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

}  // namespace

TEST(KeyValueFile, ParsesCommentsAndBlanks) {
  const KeyValues kv = parse("# settings\n\nbatch_size = 64  # trailing\n  tau=20\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"batch_size", "64"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"tau", "20"}));
  EXPECT_THROW(parse("no equals sign\n"), std::invalid_argument);
  EXPECT_THROW(parse("= 3\n"), std::invalid_argument);
}

TEST(ApplySettings, NetworkAndTrainingKeys) {
  neural::NetworkConfig net;
  TrainConfig cfg;
  cfg.games = {default_settings(parse_variant("connect4_5x4")), default_settings(parse_variant("gomoku_6x6"))};
  apply_settings(parse("num_iterations = 12\nbatch_size = 64\nlearning_rate = 0.02\nembedding_size = 32\n"
                       "num_heads = 4\nforward_size = 64\nnum_encoder_layers = 2\npatch_size = 3\n"
                       "num_simulations = 50\ngomoku_6x6.tau = 15\nn_queue = 500\nstride = 1\n"),
                 net, cfg);
  EXPECT_EQ(cfg.iterations, 12);
  EXPECT_EQ(cfg.batch_size, 64);
  EXPECT_DOUBLE_EQ(cfg.learning_rate, 0.02);
  EXPECT_EQ(cfg.queue_capacity, 500u);
  EXPECT_EQ(net.embed_dim, 32);
  EXPECT_EQ(net.heads, 4);
  EXPECT_EQ(net.ffn_dim, 64);
  EXPECT_EQ(net.encoder_layers, 2);
  EXPECT_EQ(net.patch_size, 3);
  EXPECT_EQ(cfg.games[0].search.simulations, 50);
  EXPECT_EQ(cfg.games[1].search.simulations, 50);
  EXPECT_EQ(cfg.games[1].temperature, 15.0);
  EXPECT_EQ(cfg.games[0].temperature, 100.0);
}

TEST(ApplySettings, RejectsUnknownOrMalformed) {
  neural::NetworkConfig net;
  TrainConfig cfg;
  cfg.games = {default_settings(parse_variant("connect4"))};
  EXPECT_THROW(apply_settings(parse("warp_speed = 9\n"), net, cfg), std::invalid_argument);
  EXPECT_THROW(apply_settings(parse("batch_size = lots\n"), net, cfg), std::invalid_argument);
  EXPECT_THROW(apply_settings(parse("stride = 2\n"), net, cfg), std::invalid_argument);
  EXPECT_THROW(apply_settings(parse("othello.tau = 3\n"), net, cfg), std::invalid_argument);
}
