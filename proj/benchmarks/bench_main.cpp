#include <benchmark/benchmark.h>

#include "alphavit/agents.hpp"
#include "alphavit/features.hpp"
#include "alphavit/game.hpp"
#include "alphavit/minimax.hpp"
#include "alphavit/neural/network.hpp"
#include "alphavit/search.hpp"
#include "alphavit/uct.hpp"

namespace {

using namespace alphavit;

void BM_RandomPlayout(benchmark::State& state, const char* variant) {
  const GameId id = parse_variant(variant);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(random_rollout(GameState::initial(id), rng));
}
BENCHMARK_CAPTURE(BM_RandomPlayout, connect4, "connect4");
BENCHMARK_CAPTURE(BM_RandomPlayout, gomoku, "gomoku");
BENCHMARK_CAPTURE(BM_RandomPlayout, othello, "othello");

void BM_Uct(benchmark::State& state) {
  const GameId id = parse_variant("connect4");
  UctParams params;
  params.simulations = static_cast<int>(state.range(0));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(uct_search(GameState::initial(id), params, rng));
}
BENCHMARK(BM_Uct)->Arg(100)->Arg(400);

void BM_Minimax(benchmark::State& state, const char* variant) {
  const GameId id = parse_variant(variant);
  Rng rng(3);
  GameState s = GameState::initial(id);
  for (int i = 0; i < 6; ++i) s = apply_move(s, random_move(s, rng));
  for (auto _ : state) benchmark::DoNotOptimize(minimax_search(s, 3, rng));
}
BENCHMARK_CAPTURE(BM_Minimax, connect4, "connect4");
BENCHMARK_CAPTURE(BM_Minimax, othello_6x6, "othello_6x6");

void BM_Forward(benchmark::State& state, neural::Family family, const char* variant, int embed) {
  const GameId id = parse_variant(variant);
  neural::NetworkConfig cfg;
  cfg.family = family;
  cfg.embed_dim = embed;
  cfg.ffn_dim = 2 * embed;
  cfg.heads = 4;
  cfg.encoder_layers = 2;
  cfg.head_hidden = embed;
  cfg.patch_size = 3;
  cfg.action_tokens = 32;
  cfg.filters = embed;
  cfg.value_hidden = embed;
  cfg.board = id;
  const neural::Network<float> net(cfg, 4);
  const FeatureStack f = encode_planes(GameState::initial(id));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(f, id));
}
BENCHMARK_CAPTURE(BM_Forward, vit_c4_5x4_e64, neural::Family::AlphaViT, "connect4_5x4", 64);
BENCHMARK_CAPTURE(BM_Forward, vit_gomoku_e64, neural::Family::AlphaViT, "gomoku", 64);
BENCHMARK_CAPTURE(BM_Forward, vid_gomoku_6x6_e64, neural::Family::AlphaViD, "gomoku_6x6", 64);
BENCHMARK_CAPTURE(BM_Forward, vda_othello_e64, neural::Family::AlphaVDA, "othello", 64);
BENCHMARK_CAPTURE(BM_Forward, az_othello_f64, neural::Family::AlphaZero, "othello", 64);

void BM_PuctSearch(benchmark::State& state) {
  const GameId id = parse_variant("connect4_5x4");
  neural::NetworkConfig cfg;
  cfg.embed_dim = 64;
  cfg.ffn_dim = 128;
  cfg.heads = 4;
  cfg.encoder_layers = 2;
  cfg.head_hidden = 64;
  cfg.patch_size = 3;
  const NetworkEvaluator evaluator(std::make_shared<const neural::Network<float>>(cfg, 5));
  SearchParams params;
  params.simulations = 100;
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(mcts_search(GameState::initial(id), evaluator, params, rng));
}
BENCHMARK(BM_PuctSearch);

}  // namespace

BENCHMARK_MAIN();
