#include "alphavit/game.hpp"

#include <algorithm>
#include <charconv>

namespace alphavit {
namespace {

constexpr int kLineDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
constexpr int kAllDirs[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                {0, 1},   {1, -1}, {1, 0},  {1, 1}};

bool in_bounds(const GameId& id, int r, int c) {
  return r >= 0 && r < id.height && c >= 0 && c < id.width;
}

// Run length of `color` through (r, c) along (dr, dc), counting both sides.
int run_through(const GameState& s, int r, int c, int dr, int dc, int color) {
  const GameId& id = s.id();
  int n = 1;
  for (int rr = r + dr, cc = c + dc; in_bounds(id, rr, cc) && s.at(rr, cc) == color;
       rr += dr, cc += dc) {
    ++n;
  }
  for (int rr = r - dr, cc = c - dc; in_bounds(id, rr, cc) && s.at(rr, cc) == color;
       rr -= dr, cc -= dc) {
    ++n;
  }
  return n;
}

bool has_placing_move(const GameState& s, int color) {
  const GameId& id = s.id();
  for (int r = 0; r < id.height; ++r) {
    for (int c = 0; c < id.width; ++c) {
      if (s.at(r, c) == 0 && othello_flip_count(s, r, c, color) > 0) return true;
    }
  }
  return false;
}

Outcome majority(const GameState& s) {
  const int first = s.count(kFirstPlayer);
  const int second = s.count(kSecondPlayer);
  if (first > second) return Outcome::FirstWins;
  if (second > first) return Outcome::SecondWins;
  return Outcome::Draw;
}

Outcome win_for(int color) { return color == kFirstPlayer ? Outcome::FirstWins : Outcome::SecondWins; }

Outcome othello_outcome(const GameState& s) {
  if (has_placing_move(s, s.to_move()) || has_placing_move(s, -s.to_move())) {
    return Outcome::Ongoing;
  }
  return majority(s);
}

Outcome connection_outcome_full_scan(const GameState& s) {
  const GameId& id = s.id();
  const int need = connect_length(id.game);
  bool first_line = false;
  bool second_line = false;
  for (int r = 0; r < id.height; ++r) {
    for (int c = 0; c < id.width; ++c) {
      const int color = s.at(r, c);
      if (color == 0) continue;
      for (const auto& d : kLineDirs) {
        // Count only from the start of a run.
        const int pr = r - d[0];
        const int pc = c - d[1];
        if (in_bounds(id, pr, pc) && s.at(pr, pc) == color) continue;
        int n = 0;
        for (int rr = r, cc = c; in_bounds(id, rr, cc) && s.at(rr, cc) == color;
             rr += d[0], cc += d[1]) {
          ++n;
        }
        if (n >= need) (color == kFirstPlayer ? first_line : second_line) = true;
      }
    }
  }
  if (first_line && second_line) {
    throw std::invalid_argument("position has winning lines for both players");
  }
  if (first_line) return Outcome::FirstWins;
  if (second_line) return Outcome::SecondWins;
  return s.empty_count() == 0 ? Outcome::Draw : Outcome::Ongoing;
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw std::invalid_argument("bad number in variant name: " + std::string(s));
  }
  return v;
}

}  // namespace

std::string_view game_name(Game game) {
  switch (game) {
    case Game::Connect4: return "connect4";
    case Game::Gomoku: return "gomoku";
    case Game::Othello: return "othello";
  }
  return "unknown";
}

int connect_length(Game game) { return game == Game::Connect4 ? 4 : 5; }

GameId make_game_id(Game game, int height, int width) {
  if (height < 1 || width < 1 || height > kMaxSide || width > kMaxSide) {
    throw std::invalid_argument("board dimensions out of range");
  }
  if (game == Game::Othello && (height % 2 != 0 || width % 2 != 0 || height < 4 || width < 4)) {
    throw std::invalid_argument("othello boards need even sides >= 4");
  }
  return GameId{game, height, width};
}

const std::array<GameId, 6>& builtin_variants() {
  static const std::array<GameId, 6> variants = {
      GameId{Game::Connect4, 6, 7}, GameId{Game::Connect4, 4, 5}, GameId{Game::Gomoku, 9, 9},
      GameId{Game::Gomoku, 6, 6},   GameId{Game::Othello, 8, 8},  GameId{Game::Othello, 6, 6},
  };
  return variants;
}

GameId parse_variant(std::string_view name) {
  const auto underscore = name.find('_');
  const std::string_view family = name.substr(0, underscore);
  Game game;
  if (family == "connect4") {
    game = Game::Connect4;
  } else if (family == "gomoku") {
    game = Game::Gomoku;
  } else if (family == "othello") {
    game = Game::Othello;
  } else {
    throw std::invalid_argument("unknown game: " + std::string(name));
  }
  if (underscore == std::string_view::npos) {
    switch (game) {
      case Game::Connect4: return make_game_id(game, 6, 7);
      case Game::Gomoku: return make_game_id(game, 9, 9);
      case Game::Othello: return make_game_id(game, 8, 8);
    }
  }
  const std::string_view dims = name.substr(underscore + 1);
  const auto x = dims.find('x');
  if (x == std::string_view::npos) {
    throw std::invalid_argument("expected <W>x<H> in variant name: " + std::string(name));
  }
  const int width = parse_int(dims.substr(0, x));
  const int height = parse_int(dims.substr(x + 1));
  return make_game_id(game, height, width);
}

std::string variant_name(const GameId& id) {
  const std::string base(game_name(id.game));
  const GameId def = parse_variant(base);
  if (def == id) return base;
  return base + "_" + std::to_string(id.width) + "x" + std::to_string(id.height);
}

int action_space_size(const GameId& id) {
  switch (id.game) {
    case Game::Connect4: return id.width;
    case Game::Gomoku: return id.cells();
    case Game::Othello: return id.cells() + 1;
  }
  return 0;
}

std::string to_string(const Action& action) {
  switch (action.kind) {
    case Action::Kind::Place:
      return "place(" + std::to_string(action.row) + "," + std::to_string(action.col) + ")";
    case Action::Kind::Drop: return "drop(" + std::to_string(action.col) + ")";
    case Action::Kind::Pass: return "pass";
  }
  return "?";
}

int action_index(const Action& action, const GameId& id) {
  switch (id.game) {
    case Game::Connect4:
      if (action.kind != Action::Kind::Drop || action.col < 0 || action.col >= id.width) break;
      return action.col;
    case Game::Gomoku:
      if (action.kind != Action::Kind::Place || !in_bounds(id, action.row, action.col)) break;
      return action.row * id.width + action.col;
    case Game::Othello:
      if (action.kind == Action::Kind::Pass) return id.cells();
      if (action.kind != Action::Kind::Place || !in_bounds(id, action.row, action.col)) break;
      return action.row * id.width + action.col;
  }
  throw std::out_of_range("action " + to_string(action) + " has no index in " + variant_name(id));
}

Action action_from_index(int index, const GameId& id) {
  if (index < 0 || index >= action_space_size(id)) {
    throw std::out_of_range("action index " + std::to_string(index) + " out of range for " +
                            variant_name(id));
  }
  switch (id.game) {
    case Game::Connect4: return Action::drop(index);
    case Game::Othello:
      if (index == id.cells()) return Action::pass();
      [[fallthrough]];
    case Game::Gomoku: return Action::place(index / id.width, index % id.width);
  }
  return Action::pass();
}

int winner_color(Outcome o) {
  switch (o) {
    case Outcome::FirstWins: return kFirstPlayer;
    case Outcome::SecondWins: return kSecondPlayer;
    default: return 0;
  }
}

GameState GameState::initial(const GameId& id) {
  GameState s;
  s.id_ = make_game_id(id.game, id.height, id.width);
  if (id.game == Game::Othello) {
    const int r = id.height / 2 - 1;
    const int c = id.width / 2 - 1;
    s.cells_[r * id.width + c] = kSecondPlayer;
    s.cells_[r * id.width + c + 1] = kFirstPlayer;
    s.cells_[(r + 1) * id.width + c] = kFirstPlayer;
    s.cells_[(r + 1) * id.width + c + 1] = kSecondPlayer;
    s.outcome_ = othello_outcome(s);
  }
  return s;
}

GameState GameState::from_cells(const GameId& id, std::span<const std::int8_t> cells, int to_move,
                                int move_count) {
  GameState s;
  s.id_ = make_game_id(id.game, id.height, id.width);
  if (static_cast<int>(cells.size()) != id.cells()) {
    throw std::invalid_argument("cell count does not match board dimensions");
  }
  if (to_move != kFirstPlayer && to_move != kSecondPlayer) {
    throw std::invalid_argument("to_move must be +1 or -1");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < -1 || cells[i] > 1) throw std::invalid_argument("cell value must be -1, 0 or 1");
    s.cells_[i] = cells[i];
  }
  s.to_move_ = static_cast<std::int8_t>(to_move);

  const int first = s.count(kFirstPlayer);
  const int second = s.count(kSecondPlayer);
  if (id.game != Game::Othello) {
    const int diff = first - second;
    if (diff != 0 && diff != 1) throw std::invalid_argument("inconsistent disc counts");
    if ((diff == 0) != (to_move == kFirstPlayer)) {
      throw std::invalid_argument("player to move inconsistent with disc counts");
    }
    if (id.game == Game::Connect4) {
      for (int r = 0; r + 1 < id.height; ++r) {
        for (int c = 0; c < id.width; ++c) {
          if (s.at(r, c) != 0 && s.at(r + 1, c) == 0) {
            throw std::invalid_argument("floating disc in connect4 position");
          }
        }
      }
    }
    s.outcome_ = connection_outcome_full_scan(s);
  } else {
    s.outcome_ = othello_outcome(s);
  }
  s.move_count_ = static_cast<std::int16_t>(
      move_count >= 0 ? move_count
                      : first + second - (id.game == Game::Othello ? 4 : 0));
  return s;
}

int GameState::count(int color) const {
  return static_cast<int>(std::count(cells_.begin(), cells_.begin() + id_.cells(), color));
}

bool GameState::operator==(const GameState& other) const {
  return id_ == other.id_ && to_move_ == other.to_move_ && move_count_ == other.move_count_ &&
         std::equal(cells_.begin(), cells_.begin() + id_.cells(), other.cells_.begin());
}

int othello_flip_count(const GameState& s, int row, int col, int color) {
  const GameId& id = s.id();
  if (!in_bounds(id, row, col) || s.at(row, col) != 0) return 0;
  int total = 0;
  for (const auto& d : kAllDirs) {
    int n = 0;
    int r = row + d[0];
    int c = col + d[1];
    while (in_bounds(id, r, c) && s.at(r, c) == -color) {
      ++n;
      r += d[0];
      c += d[1];
    }
    if (n > 0 && in_bounds(id, r, c) && s.at(r, c) == color) total += n;
  }
  return total;
}

std::vector<Action> legal_moves(const GameState& state) {
  if (is_terminal(state.outcome())) {
    throw ContractViolation("legal_moves called on a terminal state");
  }
  const GameId& id = state.id();
  std::vector<Action> moves;
  switch (id.game) {
    case Game::Connect4:
      for (int c = 0; c < id.width; ++c) {
        if (state.at(0, c) == 0) moves.push_back(Action::drop(c));
      }
      break;
    case Game::Gomoku:
      moves.reserve(id.cells());
      for (int r = 0; r < id.height; ++r) {
        for (int c = 0; c < id.width; ++c) {
          if (state.at(r, c) == 0) moves.push_back(Action::place(r, c));
        }
      }
      break;
    case Game::Othello:
      for (int r = 0; r < id.height; ++r) {
        for (int c = 0; c < id.width; ++c) {
          if (othello_flip_count(state, r, c, state.to_move()) > 0) {
            moves.push_back(Action::place(r, c));
          }
        }
      }
      if (moves.empty()) moves.push_back(Action::pass());
      break;
  }
  return moves;
}

std::vector<int> legal_action_indices(const GameState& state) {
  const auto moves = legal_moves(state);
  std::vector<int> out;
  out.reserve(moves.size());
  for (const auto& m : moves) out.push_back(action_index(m, state.id()));
  return out;
}

GameState apply_move(const GameState& state, const Action& action) {
  if (is_terminal(state.outcome())) throw IllegalMove("game is already over");
  const GameId& id = state.id();
  const int color = state.to_move();
  GameState next = state;
  next.to_move_ = static_cast<std::int8_t>(-color);
  next.move_count_ = static_cast<std::int16_t>(state.move_count_ + 1);

  switch (id.game) {
    case Game::Connect4: {
      if (action.kind != Action::Kind::Drop) throw IllegalMove("connect4 only accepts drop moves");
      if (action.col < 0 || action.col >= id.width) throw IllegalMove("column out of range");
      int row = -1;
      for (int r = id.height - 1; r >= 0; --r) {
        if (state.at(r, action.col) == 0) {
          row = r;
          break;
        }
      }
      if (row < 0) throw IllegalMove("column " + std::to_string(action.col) + " is full");
      next.cells_[row * id.width + action.col] = static_cast<std::int8_t>(color);
      bool won = false;
      for (const auto& d : kLineDirs) {
        if (run_through(next, row, action.col, d[0], d[1], color) >= 4) won = true;
      }
      next.outcome_ = won ? win_for(color) : (next.empty_count() == 0 ? Outcome::Draw : Outcome::Ongoing);
      break;
    }
    case Game::Gomoku: {
      if (action.kind != Action::Kind::Place) throw IllegalMove("gomoku only accepts place moves");
      if (!in_bounds(id, action.row, action.col)) throw IllegalMove("cell out of range");
      if (state.at(action.row, action.col) != 0) {
        throw IllegalMove("cell " + to_string(action) + " is occupied");
      }
      next.cells_[action.row * id.width + action.col] = static_cast<std::int8_t>(color);
      bool won = false;
      for (const auto& d : kLineDirs) {
        if (run_through(next, action.row, action.col, d[0], d[1], color) >= 5) won = true;
      }
      next.outcome_ = won ? win_for(color) : (next.empty_count() == 0 ? Outcome::Draw : Outcome::Ongoing);
      break;
    }
    case Game::Othello: {
      if (action.kind == Action::Kind::Pass) {
        if (has_placing_move(state, color)) throw IllegalMove("pass is only legal without a placing move");
        next.outcome_ = othello_outcome(next);
        break;
      }
      if (action.kind != Action::Kind::Place) throw IllegalMove("othello only accepts place or pass");
      if (!in_bounds(id, action.row, action.col)) throw IllegalMove("cell out of range");
      if (state.at(action.row, action.col) != 0) {
        throw IllegalMove("cell " + to_string(action) + " is occupied");
      }
      int flipped = 0;
      for (const auto& d : kAllDirs) {
        int n = 0;
        int r = action.row + d[0];
        int c = action.col + d[1];
        while (in_bounds(id, r, c) && state.at(r, c) == -color) {
          ++n;
          r += d[0];
          c += d[1];
        }
        if (n == 0 || !in_bounds(id, r, c) || state.at(r, c) != color) continue;
        for (int k = 1; k <= n; ++k) {
          next.cells_[(action.row + k * d[0]) * id.width + action.col + k * d[1]] =
              static_cast<std::int8_t>(color);
        }
        flipped += n;
      }
      if (flipped == 0) throw IllegalMove("placement at " + to_string(action) + " flips no discs");
      next.cells_[action.row * id.width + action.col] = static_cast<std::int8_t>(color);
      next.outcome_ = othello_outcome(next);
      break;
    }
  }
  return next;
}

Outcome terminal_status(const GameState& state) { return state.outcome(); }

}  // namespace alphavit
