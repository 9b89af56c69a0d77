#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alphavit/game.hpp"

namespace alphavit {

// Text fixture format:
//
//   <game> <H> <W> <to_move>
//   one line per row, 'X' first player, 'O' second player, '.' empty
//
// <game> is the family name (connect4, gomoku, othello); <to_move> is 1 or -1.
std::string format_board(const GameState& state);
GameState parse_board(std::string_view text);

// Human-oriented rendering with row/column labels, used by the play command.
std::string render_board(const GameState& state);

struct MoveRecord {
  int turn = 0;
  int player = kFirstPlayer;
  int action = 0;

  bool operator==(const MoveRecord&) const = default;
};

struct MatchRecord {
  std::vector<MoveRecord> moves;
  int result = 0;  // winner color, 0 for a draw

  bool operator==(const MatchRecord&) const = default;
};

// One `turn=<n> player=<+-1> action=<index>` line per move, then `result=<+-1|0>`.
void write_match_record(std::ostream& out, const MatchRecord& record);
MatchRecord read_match_record(std::istream& in);

}  // namespace alphavit
