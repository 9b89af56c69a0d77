#include "alphavit/config_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace alphavit {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long to_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument(key + ": expected an integer, got '" + value + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw std::invalid_argument(key + ": expected a number, got '" + value + "'");
  return v;
}

bool apply_game_key(const std::string& key, const std::string& value, GameSettings& g) {
  if (key == "num_simulations") {
    g.search.simulations = static_cast<int>(to_int(key, value));
  } else if (key == "num_selfplay") {
    g.selfplay_games = static_cast<int>(to_int(key, value));
  } else if (key == "t_opening") {
    g.opening_moves = static_cast<int>(to_int(key, value));
  } else if (key == "tau") {
    g.temperature = to_double(key, value);
  } else if (key == "c_puct") {
    g.search.c_puct = to_double(key, value);
  } else if (key == "epsilon") {
    g.search.dirichlet_epsilon = to_double(key, value);
  } else if (key == "dirichlet_alpha") {
    g.search.dirichlet_alpha = to_double(key, value);
  } else {
    return false;
  }
  return true;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("line " + std::to_string(number) + ": empty key or value");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValues read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path.string());
  return parse_key_values(in);
}

void apply_settings(const KeyValues& settings, neural::NetworkConfig& net, TrainConfig& cfg) {
  for (const auto& [key, value] : settings) {
    auto as_int = [&] { return static_cast<int>(to_int(key, value)); };
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      const GameId id = parse_variant(key.substr(0, dot));
      const std::string sub = key.substr(dot + 1);
      bool found = false;
      for (GameSettings& g : cfg.games) {
        if (g.id == id) {
          if (!apply_game_key(sub, value, g)) throw std::invalid_argument("unknown per-game key " + key);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("key " + key + " names a game that is not being trained");
      continue;
    }
    bool game_key = false;
    for (GameSettings& g : cfg.games) game_key = apply_game_key(key, value, g) || game_key;
    if (game_key) continue;
    if (key == "num_simulations" || key == "num_selfplay" || key == "t_opening" || key == "tau" ||
        key == "c_puct" || key == "epsilon" || key == "dirichlet_alpha") {
      continue;  // no games configured yet
    }

    if (key == "num_iterations") cfg.iterations = as_int();
    else if (key == "n_queue") cfg.queue_capacity = static_cast<std::size_t>(to_int(key, value));
    else if (key == "n_epoch") cfg.epochs = as_int();
    else if (key == "batch_size") cfg.batch_size = as_int();
    else if (key == "learning_rate") cfg.learning_rate = to_double(key, value);
    else if (key == "momentum") cfg.momentum = to_double(key, value);
    else if (key == "weight_decay") cfg.weight_decay = to_double(key, value);
    else if (key == "min_fill") cfg.min_fill = static_cast<std::size_t>(to_int(key, value));
    else if (key == "bootstrap_simulations") cfg.bootstrap_simulations = as_int();
    else if (key == "threads") cfg.threads = as_int();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "t") net.history = as_int();
    else if (key == "patch_size") net.patch_size = as_int();
    else if (key == "stride") {
      if (as_int() != 1) throw std::invalid_argument("only stride 1 is supported");
    }
    else if (key == "num_encoder_layers") net.encoder_layers = as_int();
    else if (key == "num_decoder_layers") net.decoder_layers = as_int();
    else if (key == "embedding_size") net.embed_dim = as_int();
    else if (key == "forward_size") net.ffn_dim = as_int();
    else if (key == "num_heads") net.heads = as_int();
    else if (key == "action_token_size") net.action_tokens = as_int();
    else if (key == "head_hidden") net.head_hidden = as_int();
    else if (key == "pos_height") net.pos_height = as_int();
    else if (key == "pos_width") net.pos_width = as_int();
    else if (key == "num_residual_blocks") net.res_blocks = as_int();
    else if (key == "kernel_size") net.kernel = as_int();
    else if (key == "num_filters") net.filters = as_int();
    else if (key == "value_hidden") net.value_hidden = as_int();
    else throw std::invalid_argument("unknown config key " + key);
  }
}

}  // namespace alphavit
