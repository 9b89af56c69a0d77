#include "alphavit/board_text.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace alphavit {

std::string format_board(const GameState& state) {
  const GameId& id = state.id();
  std::ostringstream out;
  out << game_name(id.game) << ' ' << id.height << ' ' << id.width << ' ' << state.to_move() << '\n';
  for (int r = 0; r < id.height; ++r) {
    for (int c = 0; c < id.width; ++c) {
      const int v = state.at(r, c);
      out << (v == kFirstPlayer ? 'X' : v == kSecondPlayer ? 'O' : '.');
    }
    out << '\n';
  }
  return out.str();
}

GameState parse_board(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string game;
  int height = 0;
  int width = 0;
  int to_move = 0;
  if (!(in >> game >> height >> width >> to_move)) {
    throw std::invalid_argument("board header must be '<game> <H> <W> <to_move>'");
  }
  const GameId base = parse_variant(game);
  const GameId id = make_game_id(base.game, height, width);
  std::vector<std::int8_t> cells;
  cells.reserve(id.cells());
  std::string row;
  for (int r = 0; r < height; ++r) {
    if (!(in >> row) || static_cast<int>(row.size()) != width) {
      throw std::invalid_argument("board row " + std::to_string(r) + " has the wrong width");
    }
    for (char ch : row) {
      switch (ch) {
        case 'X': cells.push_back(kFirstPlayer); break;
        case 'O': cells.push_back(kSecondPlayer); break;
        case '.': cells.push_back(0); break;
        default: throw std::invalid_argument(std::string("unexpected board character '") + ch + "'");
      }
    }
  }
  return GameState::from_cells(id, cells, to_move);
}

std::string render_board(const GameState& state) {
  const GameId& id = state.id();
  std::ostringstream out;
  out << "   ";
  for (int c = 0; c < id.width; ++c) out << (c < 10 ? " " : "") << c;
  out << '\n';
  for (int r = 0; r < id.height; ++r) {
    out << (r < 10 ? " " : "") << r << ' ';
    for (int c = 0; c < id.width; ++c) {
      const int v = state.at(r, c);
      out << ' ' << (v == kFirstPlayer ? 'X' : v == kSecondPlayer ? 'O' : '.');
    }
    out << '\n';
  }
  return out.str();
}

void write_match_record(std::ostream& out, const MatchRecord& record) {
  for (const auto& m : record.moves) {
    out << "turn=" << m.turn << " player=" << m.player << " action=" << m.action << '\n';
  }
  out << "result=" << record.result << '\n';
}

MatchRecord read_match_record(std::istream& in) {
  MatchRecord record;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("result=", 0) == 0) {
      record.result = std::stoi(line.substr(7));
      return record;
    }
    MoveRecord m;
    if (std::sscanf(line.c_str(), "turn=%d player=%d action=%d", &m.turn, &m.player, &m.action) != 3) {
      throw std::invalid_argument("malformed match record line: " + line);
    }
    record.moves.push_back(m);
  }
  throw std::invalid_argument("match record has no result line");
}

}  // namespace alphavit
