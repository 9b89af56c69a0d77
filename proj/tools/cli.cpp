#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "alphavit/agents.hpp"
#include "alphavit/board_text.hpp"
#include "alphavit/config_file.hpp"
#include "alphavit/evaluation.hpp"
#include "alphavit/neural/checkpoint.hpp"
#include "alphavit/neural/network.hpp"

namespace alphavit::cli {
namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<GameId> parse_games(const std::string& game, const std::string& games) {
  std::vector<GameId> out;
  if (!game.empty()) out.push_back(parse_variant(game));
  for (const std::string& g : split_list(games)) out.push_back(parse_variant(g));
  if (out.empty()) throw UsageError("no game given (use --game or --games)");
  return out;
}

std::filesystem::path default_output(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string config;
  std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--config", c.config, "key = value settings file")->check(CLI::ExistingFile);
  cmd->add_option("--output", c.output, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
}

struct TrainArgs {
  Common common;
  std::string game;
  std::string games;
  std::string family = "alphavit";
  std::string preset = "desk";
  std::string run;
  int layers = 0;
  int embed = 0;
  int heads = 0;
  int iterations = 0;
  int simulations = 0;
  int selfplay = 0;
  int batch = 0;
  bool fresh = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const std::vector<GameId> games = parse_games(a.game, a.games);
  const neural::Family family = neural::parse_family(a.family);
  if (family == neural::Family::AlphaZero && games.size() != 1) {
    throw UsageError("the alphazero network is built for a single board");
  }
  neural::NetworkConfig net;
  TrainConfig cfg;
  if (a.preset == "desk") {
    net = desk_network(family, games.front());
    cfg = desk_training(games);
  } else if (a.preset == "full") {
    net = full_network(family, games.front());
    cfg = full_training(games);
  } else {
    throw UsageError("unknown preset " + a.preset + " (desk or full)");
  }
  if (!a.common.config.empty()) apply_settings(read_key_value_file(a.common.config), net, cfg);
  if (a.layers > 0) net.encoder_layers = a.layers;
  if (a.embed > 0) net.embed_dim = a.embed;
  if (a.heads > 0) net.heads = a.heads;
  if (a.iterations > 0) cfg.iterations = a.iterations;
  if (a.batch > 0) cfg.batch_size = a.batch;
  for (GameSettings& g : cfg.games) {
    if (a.simulations > 0) g.search.simulations = a.simulations;
    if (a.selfplay > 0) g.selfplay_games = a.selfplay;
  }
  cfg.seed = a.common.seed;
  cfg.threads = a.common.threads;
  net.validate();
  cfg.validate();

  TrainLoopOptions options;
  options.output_root = default_output(a.common.output);
  options.run = a.run;
  if (options.run.empty()) {
    options.run = std::string(neural::family_name(family));
    for (const GameId& g : games) options.run += "_" + variant_name(g);
  }
  options.resume = !a.fresh;
  const std::filesystem::path log_path = options.output_root / "ckpt" / options.run / "metrics.log";
  std::filesystem::create_directories(log_path.parent_path());
  std::ofstream log(log_path, std::ios::app);
  options.on_metrics = [&](const IterationMetrics& m) {
    const std::string line = format_metrics(m);
    out << line << std::endl;
    log << line << std::endl;
  };
  out << "training " << neural::family_name(family) << " (" << neural::parameter_count(net) << " parameters) -> "
      << (options.output_root / "ckpt" / options.run).string() << std::endl;
  train_loop(net, cfg, options);
  return kExitOk;
}

struct TournamentArgs {
  Common common;
  std::string game;
  std::string games;
  std::string agents;
  int tournaments = 50;
  int games_per_pair = 2;
  int simulations = 200;
  std::string results;
};

int cmd_tournament(const TournamentArgs& a, std::ostream& out) {
  const std::vector<GameId> games = parse_games(a.game, a.games);
  const std::vector<std::string> descriptors = split_list(a.agents);
  if (descriptors.size() < 2) throw UsageError("a tournament needs at least two agents");
  SearchParams search;
  search.simulations = a.simulations;
  std::vector<std::shared_ptr<Agent>> agents;
  for (const std::string& d : descriptors) agents.push_back(make_agent(d, search));

  const std::filesystem::path root = default_output(a.common.output);
  std::filesystem::create_directories(root);
  for (const GameId& id : games) {
    std::vector<std::shared_ptr<Agent>> playing;
    for (const auto& agent : agents) {
      if (agent->supports(id)) {
        playing.push_back(agent);
      } else {
        out << "skip: " << agent->name() << " cannot play " << variant_name(id) << '\n';
      }
    }
    if (playing.size() < 2) {
      out << "skip: fewer than two agents can play " << variant_name(id) << '\n';
      continue;
    }
    const std::filesystem::path results =
        !a.results.empty() && games.size() == 1 ? std::filesystem::path(a.results)
                                                 : root / ("tournament_" + variant_name(id) + ".txt");
    std::ofstream file(results);
    if (!file) throw UsageError("cannot write " + results.string());
    TournamentOptions options;
    options.tournaments = a.tournaments;
    options.games_per_pair = a.games_per_pair;
    options.seed = a.common.seed;
    options.threads = a.common.threads;
    options.on_match = [&](const MatchLog& m) { file << format_match_line(m) << '\n'; };
    const RatingTable table = round_robin(playing, id, options);
    std::ofstream csv(root / ("ratings_" + variant_name(id) + ".csv"));
    csv << table.csv();
    out << table.format() << '\n' << table.csv();
  }
  return kExitOk;
}

struct PlayArgs {
  Common common;
  std::string game;
  std::string agent;
  bool human_first = true;
  int simulations = 200;
};

int cmd_play(const PlayArgs& a, std::istream& in, std::ostream& out) {
  const GameId id = parse_variant(a.game);
  SearchParams search;
  search.simulations = a.simulations;
  const std::shared_ptr<Agent> agent = make_agent(a.agent, search);
  if (!agent->supports(id)) throw UsageError(agent->name() + " cannot play " + variant_name(id));
  const int human = a.human_first ? kFirstPlayer : kSecondPlayer;
  Rng rng = make_rng(a.common.seed);
  GameState state = GameState::initial(id);
  MatchRecord record;
  out << "You are " << (human == kFirstPlayer ? 'X' : 'O') << ". Enter "
      << (id.game == Game::Connect4 ? "a column" : "<row> <col>") << (id.game == Game::Othello ? " or pass" : "")
      << ".\n";
  while (!is_terminal(state.outcome())) {
    out << '\n' << render_board(state);
    Action action;
    if (state.to_move() == human) {
      std::optional<Action> parsed;
      while (!parsed) {
        out << "your move> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
          out << "\ninput closed, game abandoned\n";
          return kExitUsage;
        }
        parsed = parse_human_move(line, state);
        if (!parsed) out << "not a legal move: '" << line << "'\n";
      }
      action = *parsed;
    } else {
      action = agent->select_move(state, rng);
      out << agent->name() << " plays " << to_string(action) << '\n';
    }
    record.moves.push_back({static_cast<int>(record.moves.size()) + 1, state.to_move(), action_index(action, id)});
    state = apply_move(state, action);
  }
  out << '\n' << render_board(state);
  record.result = winner_color(state.outcome());
  out << (record.result == 0 ? "Draw." : record.result == human ? "You win." : "You lose.") << '\n';

  const std::filesystem::path root = default_output(a.common.output);
  std::filesystem::create_directories(root);
  std::ofstream log(root / "play_log.txt", std::ios::app);
  log << "game=" << variant_name(id) << " agent=" << agent->name() << " human=" << human << '\n';
  write_match_record(log, record);
  return kExitOk;
}

int cmd_info(const std::string& path, std::ostream& out) {
  const neural::Checkpoint ckpt = neural::load_checkpoint(path);
  const neural::NetworkConfig& c = ckpt.network->config();
  out << "family: " << neural::family_name(c.family) << '\n'
      << "parameters: " << neural::parameter_count(c) << '\n'
      << "iteration: " << ckpt.info.iteration << '\n'
      << "games:";
  for (const auto& g : ckpt.info.games) out << ' ' << g;
  out << '\n' << "config: " << neural::config_to_json(c) << '\n';
  return kExitOk;
}

}  // namespace

neural::NetworkConfig desk_network(neural::Family family, const GameId& board) {
  neural::NetworkConfig c;
  c.family = family;
  c.patch_size = 3;
  c.embed_dim = 64;
  c.ffn_dim = 128;
  c.heads = 4;
  c.encoder_layers = 2;
  c.decoder_layers = 1;
  c.head_hidden = 64;
  c.action_tokens = 32;
  c.res_blocks = 2;
  c.filters = 32;
  c.value_hidden = 64;
  c.board = board;
  return c;
}

TrainConfig desk_training(const std::vector<GameId>& games) {
  TrainConfig cfg;
  cfg.iterations = 50;
  cfg.batch_size = 128;
  cfg.queue_capacity = 20000;
  cfg.min_fill = 512;
  for (const GameId& id : games) cfg.games.push_back(default_settings(id));
  return cfg;
}

neural::NetworkConfig full_network(neural::Family family, const GameId& board) {
  neural::NetworkConfig c;
  c.family = family;
  c.board = board;
  return c;
}

TrainConfig full_training(const std::vector<GameId>& games) {
  TrainConfig cfg;
  for (const GameId& id : games) cfg.games.push_back(default_settings(id));
  return cfg;
}

std::optional<Action> parse_human_move(const std::string& text, const GameState& state) {
  if (is_terminal(state.outcome())) return std::nullopt;
  std::istringstream ss(text);
  std::string first;
  if (!(ss >> first)) return std::nullopt;
  Action action;
  try {
    if (first == "pass") {
      action = Action::pass();
    } else if (state.id().game == Game::Connect4) {
      std::size_t used = 0;
      const int col = std::stoi(first, &used);
      if (used != first.size()) return std::nullopt;
      action = Action::drop(col);
    } else {
      std::string second;
      if (!(ss >> second)) return std::nullopt;
      std::size_t u1 = 0;
      std::size_t u2 = 0;
      const int row = std::stoi(first, &u1);
      const int col = std::stoi(second, &u2);
      if (u1 != first.size() || u2 != second.size()) return std::nullopt;
      action = Action::place(row, col);
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  std::string extra;
  if (ss >> extra) return std::nullopt;
  for (const Action& legal : legal_moves(state)) {
    if (legal == action) return action;
  }
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-play training and evaluation of transformer game agents"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Run or resume self-play training");
  add_common(train_cmd, train.common);
  train_cmd->add_option("--game", train.game, "Variant to train on");
  train_cmd->add_option("--games", train.games, "Comma-separated variants trained with one network");
  train_cmd->add_option("--family", train.family, "alphavit, alphavid, alphavda or alphazero");
  train_cmd->add_option("--preset", train.preset, "desk (small, default) or full (full size)");
  train_cmd->add_option("--run", train.run, "Run name under <output>/ckpt/");
  train_cmd->add_option("--layers", train.layers, "Encoder layers");
  train_cmd->add_option("--embed", train.embed, "Embedding size");
  train_cmd->add_option("--heads", train.heads, "Attention heads");
  train_cmd->add_option("--iters", train.iterations, "Total iterations");
  train_cmd->add_option("--simulations", train.simulations, "Search simulations per move");
  train_cmd->add_option("--selfplay", train.selfplay, "Self-play games per iteration and game");
  train_cmd->add_option("--batch-size", train.batch, "Mini-batch size");
  train_cmd->add_flag("--fresh", train.fresh, "Ignore existing checkpoints of the run");

  TournamentArgs tour;
  CLI::App* tour_cmd = app.add_subcommand("tournament", "Round-robin Elo tournament");
  add_common(tour_cmd, tour.common);
  tour_cmd->add_option("--game", tour.game, "Variant");
  tour_cmd->add_option("--games", tour.games, "Comma-separated variants, one table each");
  tour_cmd->add_option("--agents", tour.agents, "Comma-separated agent descriptors")->required();
  tour_cmd->add_option("--tournaments", tour.tournaments, "Number of round-robin tournaments")
      ->check(CLI::PositiveNumber);
  tour_cmd->add_option("--games-per-pair", tour.games_per_pair, "Games per pairing and tournament (even)");
  tour_cmd->add_option("--simulations", tour.simulations, "Search simulations for network agents")
      ->check(CLI::PositiveNumber);
  tour_cmd->add_option("--results", tour.results, "Results file (single game only)");

  PlayArgs play;
  CLI::App* play_cmd = app.add_subcommand("play", "Play against an agent in the terminal");
  add_common(play_cmd, play.common);
  play_cmd->add_option("--game", play.game, "Variant")->required();
  play_cmd->add_option("--agent", play.agent, "Agent descriptor")->required();
  play_cmd->add_option("--human-first", play.human_first, "Whether the human moves first (true/false)");
  play_cmd->add_option("--simulations", play.simulations, "Search simulations for network agents")
      ->check(CLI::PositiveNumber);

  std::string info_path;
  CLI::App* info_cmd = app.add_subcommand("info", "Describe a checkpoint");
  info_cmd->add_option("checkpoint", info_path, "Checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*tour_cmd) return cmd_tournament(tour, out);
    if (*play_cmd) return cmd_play(play, in, out);
    if (*info_cmd) return cmd_info(info_path, out);
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const neural::CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace alphavit::cli
