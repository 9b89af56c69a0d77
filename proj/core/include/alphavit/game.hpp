#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alphavit {

enum class Game : std::uint8_t { Connect4 = 0, Gomoku = 1, Othello = 2 };

inline constexpr int kNumGames = 3;
inline constexpr int kMaxSide = 16;
inline constexpr int kMaxCells = kMaxSide * kMaxSide;

inline constexpr int kFirstPlayer = 1;
inline constexpr int kSecondPlayer = -1;

std::string_view game_name(Game game);

// A game family plus board dimensions. Built-in variants are listed by
// builtin_variants(); any other size within kMaxSide is accepted as long as
// the family's own constraints hold (Othello needs even sides >= 4).
struct GameId {
  Game game = Game::Gomoku;
  int height = 0;
  int width = 0;

  int cells() const { return height * width; }
  bool operator==(const GameId&) const = default;
};

// Throws std::invalid_argument when the dimensions are not playable.
GameId make_game_id(Game game, int height, int width);

// Names: connect4, connect4_5x4, gomoku, gomoku_6x6, othello, othello_6x6, and
// the generic form <game>_<W>x<H>.
GameId parse_variant(std::string_view name);
std::string variant_name(const GameId& id);
const std::array<GameId, 6>& builtin_variants();

// Connect4: W columns. Gomoku: H*W cells. Othello: H*W cells plus pass.
int action_space_size(const GameId& id);

struct Action {
  enum class Kind : std::uint8_t { Place, Drop, Pass };

  Kind kind = Kind::Pass;
  int row = -1;
  int col = -1;

  static Action place(int row, int col) { return {Kind::Place, row, col}; }
  static Action drop(int col) { return {Kind::Drop, -1, col}; }
  static Action pass() { return {Kind::Pass, -1, -1}; }

  bool operator==(const Action&) const = default;
};

std::string to_string(const Action& action);

int action_index(const Action& action, const GameId& id);
Action action_from_index(int index, const GameId& id);

enum class Outcome : std::uint8_t { Ongoing, FirstWins, SecondWins, Draw };

inline bool is_terminal(Outcome o) { return o != Outcome::Ongoing; }

// +1 / -1 for a win, 0 for a draw or an ongoing game.
int winner_color(Outcome o);

class IllegalMove : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation's precondition on the state does not hold (for
// example asking a terminal state for its moves).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Immutable board position. Cells hold +1 (first player), -1 (second player)
// or 0, row-major with row 0 at the top. For Connect4 row H-1 is the floor.
class GameState {
 public:
  GameState() = default;

  static GameState initial(const GameId& id);

  // Builds a state from raw cells and recomputes the outcome with a full
  // scan. Connect4 and Gomoku are checked for consistent disc counts and
  // (Connect4) gravity; Othello positions are taken as given.
  static GameState from_cells(const GameId& id, std::span<const std::int8_t> cells, int to_move,
                              int move_count = -1);

  const GameId& id() const { return id_; }
  int to_move() const { return to_move_; }
  int move_count() const { return move_count_; }
  Outcome outcome() const { return outcome_; }

  std::int8_t at(int row, int col) const { return cells_[row * id_.width + col]; }
  std::span<const std::int8_t> cells() const {
    return {cells_.data(), static_cast<std::size_t>(id_.cells())};
  }
  int count(int color) const;
  int empty_count() const { return id_.cells() - count(kFirstPlayer) - count(kSecondPlayer); }

  bool operator==(const GameState& other) const;

 private:
  friend GameState apply_move(const GameState& state, const Action& action);

  GameId id_{};
  std::array<std::int8_t, kMaxCells> cells_{};
  std::int8_t to_move_ = kFirstPlayer;
  std::int16_t move_count_ = 0;
  Outcome outcome_ = Outcome::Ongoing;
};

// Deterministic order: row-major (column order for Connect4), pass last.
// Throws ContractViolation on a terminal state.
std::vector<Action> legal_moves(const GameState& state);

// Legal moves as action indices, same order as legal_moves().
std::vector<int> legal_action_indices(const GameState& state);

// Returns the successor; throws IllegalMove with the reason when the action
// is not legal in this state.
GameState apply_move(const GameState& state, const Action& action);

Outcome terminal_status(const GameState& state);

// Number of discs an Othello placement at (row, col) would flip for `color`.
int othello_flip_count(const GameState& state, int row, int col, int color);

// Length of the longest run needed to win (4 for Connect4, 5 for Gomoku).
int connect_length(Game game);

}  // namespace alphavit
