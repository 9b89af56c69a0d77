#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "alphavit/neural/checkpoint.hpp"
#include "cli.hpp"

using namespace alphavit;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "alphavit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("alphavit_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"fly"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"info"}).code, cli::kExitUsage);
  const CliResult missing = run_cli({"info", "/nonexistent/x.bin"});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  EXPECT_EQ(run_cli({"tournament", "--game", "chess", "--agents", "random,random"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"train", "--game", "connect4", "--family", "alphago"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, TrainWritesCheckpointsAndResumes) {
  const auto dir = fresh_dir("train");
  std::ofstream(dir / "tiny.cfg") << "min_fill = 24\nbootstrap_simulations = 4\nforward_size = 16\nhead_hidden = 8\n";
  const std::vector<std::string> base{"train",     "--game",       "connect4_5x4", "--family", "alphavit",
                                      "--layers",  "1",            "--embed",      "8",        "--heads",
                                      "2",         "--simulations", "4",           "--selfplay", "1",
                                      "--batch-size", "16",        "--seed",       "3",        "--output",
                                      dir.string(), "--config",    (dir / "tiny.cfg").string()};
  auto args = base;
  args.insert(args.end(), {"--iters", "2"});
  const CliResult first = run_cli(args);
  ASSERT_EQ(first.code, cli::kExitOk) << first.err;
  const auto run_dir = dir / "ckpt" / "alphavit_connect4_5x4";
  EXPECT_TRUE(std::filesystem::exists(run_dir / "1.bin"));
  EXPECT_TRUE(std::filesystem::exists(run_dir / "2.bin"));
  EXPECT_EQ(count_lines(slurp(run_dir / "metrics.log")), 2);

  args = base;
  args.insert(args.end(), {"--iters", "3"});
  ASSERT_EQ(run_cli(args).code, cli::kExitOk);
  EXPECT_TRUE(std::filesystem::exists(run_dir / "3.bin"));
  const std::string log = slurp(run_dir / "metrics.log");
  EXPECT_EQ(count_lines(log), 3);
  EXPECT_NE(log.find("iter=3 game=connect4_5x4"), std::string::npos);

  const CliResult info = run_cli({"info", (run_dir / "3.bin").string()});
  ASSERT_EQ(info.code, cli::kExitOk);
  EXPECT_NE(info.out.find("family: alphavit"), std::string::npos);
  EXPECT_NE(info.out.find("iteration: 3"), std::string::npos);

  const CliResult wrong = run_cli({"tournament", "--game", "connect4_5x4", "--agents",
                                   "alphavid:" + (run_dir / "3.bin").string() + ",random"});
  EXPECT_EQ(wrong.code, cli::kExitUsage);
  std::filesystem::remove_all(dir);
}

TEST(Cli, TournamentIsReproducible) {
  std::string first_results;
  for (int round = 0; round < 2; ++round) {
    const auto dir = fresh_dir("tour" + std::to_string(round));
    const CliResult r = run_cli({"tournament", "--game", "connect4_5x4", "--agents", "mcts:10,minimax:1,random",
                                 "--tournaments", "3", "--seed", "8", "--output", dir.string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const std::string results = slurp(dir / "tournament_connect4_5x4.txt");
    EXPECT_EQ(count_lines(results), 3 * 3 * 2);
    EXPECT_EQ(count_lines(slurp(dir / "ratings_connect4_5x4.csv")), 3);
    if (round == 0) {
      first_results = results;
    } else {
      EXPECT_EQ(results, first_results);
    }
    std::filesystem::remove_all(dir);
  }
}

TEST(Cli, TournamentReportsSkippedAgents) {
  const auto dir = fresh_dir("skip");
  const neural::Network<float> az(neural::small_config(neural::Family::AlphaZero), 1);
  neural::save_checkpoint(dir / "az.bin", az, neural::CheckpointInfo{});
  const CliResult r = run_cli({"tournament", "--game", "gomoku_6x6", "--agents",
                               "alphazero:" + (dir / "az.bin").string() + ",random,minimax:1", "--tournaments", "1",
                               "--output", dir.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("skip: "), std::string::npos);
  EXPECT_EQ(count_lines(slurp(dir / "ratings_gomoku_6x6.csv")), 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, PlayRepromptsOnOccupiedCell) {
  const auto dir = fresh_dir("play");
  const CliResult r = run_cli({"play", "--game", "gomoku_6x6", "--agent", "random", "--output", dir.string()},
                              "0 0\n0 0\n");
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.out.find("not a legal move: '0 0'"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, PlayOthelloSessionEndsWithARecordedResult) {
  const auto dir = fresh_dir("othello");
  std::string sweep;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) sweep += std::to_string(r) + " " + std::to_string(c) + "\n";
  }
  sweep += "pass\n";
  std::string input;
  for (int i = 0; i < 40; ++i) input += sweep;
  const CliResult r =
      run_cli({"play", "--game", "othello_6x6", "--agent", "minimax:3", "--output", dir.string()}, input);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(r.out.find("You win.") != std::string::npos || r.out.find("You lose.") != std::string::npos ||
              r.out.find("Draw.") != std::string::npos);
  const std::string log = slurp(dir / "play_log.txt");
  EXPECT_NE(log.find("agent=minimax:3"), std::string::npos);
  EXPECT_NE(log.find("result="), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ParseHumanMove) {
  const GameState c4 = GameState::initial(parse_variant("connect4"));
  EXPECT_EQ(cli::parse_human_move("3", c4), Action::drop(3));
  EXPECT_FALSE(cli::parse_human_move("7", c4));
  EXPECT_FALSE(cli::parse_human_move("3x", c4));
  const GameState gomoku = GameState::initial(parse_variant("gomoku_6x6"));
  EXPECT_EQ(cli::parse_human_move(" 2 5 ", gomoku), Action::place(2, 5));
  EXPECT_FALSE(cli::parse_human_move("2", gomoku));
  EXPECT_FALSE(cli::parse_human_move("2 5 1", gomoku));
  EXPECT_FALSE(cli::parse_human_move("pass", gomoku));
}

TEST(Cli, Presets) {
  const auto net = cli::desk_network(neural::Family::AlphaViT, parse_variant("connect4_5x4"));
  EXPECT_EQ(net.embed_dim, 64);
  EXPECT_EQ(net.encoder_layers, 2);
  EXPECT_EQ(net.heads, 4);
  const TrainConfig cfg = cli::desk_training({parse_variant("connect4_5x4")});
  EXPECT_EQ(cfg.iterations, 50);
  EXPECT_EQ(cfg.games[0].search.simulations, 200);
  EXPECT_EQ(cfg.games[0].selfplay_games, 30);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cli::full_training({parse_variant("othello")}).queue_capacity, 100000u);
}
