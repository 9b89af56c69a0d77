#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "alphavit/board_text.hpp"
#include "alphavit/game.hpp"
#include "rules_oracle.hpp"
#include "test_support.hpp"

using namespace alphavit;

TEST(GameId, BuiltinVariantsHaveExpectedShapes) {
  EXPECT_EQ(parse_variant("connect4"), (GameId{Game::Connect4, 6, 7}));
  EXPECT_EQ(parse_variant("connect4_5x4"), (GameId{Game::Connect4, 4, 5}));
  EXPECT_EQ(parse_variant("gomoku"), (GameId{Game::Gomoku, 9, 9}));
  EXPECT_EQ(parse_variant("gomoku_6x6"), (GameId{Game::Gomoku, 6, 6}));
  EXPECT_EQ(parse_variant("othello"), (GameId{Game::Othello, 8, 8}));
  EXPECT_EQ(parse_variant("othello_6x6"), (GameId{Game::Othello, 6, 6}));
  for (const GameId& id : builtin_variants()) EXPECT_EQ(parse_variant(variant_name(id)), id);
}

TEST(GameId, RejectsUnplayableBoards) {
  EXPECT_THROW(make_game_id(Game::Othello, 5, 5), std::invalid_argument);
  EXPECT_THROW(make_game_id(Game::Othello, 2, 2), std::invalid_argument);
  EXPECT_THROW(make_game_id(Game::Gomoku, 0, 4), std::invalid_argument);
  EXPECT_THROW(parse_variant("chess"), std::invalid_argument);
}

TEST(ActionIndex, SpecExamples) {
  EXPECT_EQ(action_index(Action::pass(), parse_variant("othello")), 64);
  EXPECT_EQ(action_index(Action::place(2, 5), parse_variant("gomoku")), 23);
  EXPECT_EQ(action_index(Action::drop(6), parse_variant("connect4")), 6);
  EXPECT_EQ(action_space_size(parse_variant("othello_6x6")), 37);
  EXPECT_EQ(action_space_size(parse_variant("connect4_5x4")), 5);
}

TEST(ActionIndex, OutOfRangeThrows) {
  EXPECT_THROW(action_from_index(7, parse_variant("connect4")), std::out_of_range);
  EXPECT_THROW(action_from_index(-1, parse_variant("gomoku")), std::out_of_range);
  EXPECT_THROW(action_index(Action::pass(), parse_variant("gomoku")), std::out_of_range);
}

TEST(ActionIndex, RoundTripsEveryLegalActionInPlayouts) {
  Rng rng(11);
  for (const GameId& id : builtin_variants()) {
    for (int g = 0; g < 20; ++g) {
      GameState s = GameState::initial(id);
      while (!is_terminal(s.outcome())) {
        for (const Action& a : legal_moves(s)) EXPECT_EQ(action_from_index(action_index(a, id), id), a);
        s = apply_move(s, random_move(s, rng));
      }
    }
  }
}

TEST(LegalMoves, OthelloInitialHasFourPlacements) {
  const GameState s = GameState::initial(parse_variant("othello"));
  EXPECT_EQ(legal_moves(s).size(), 4u);
  // Brute-force recount straight from the flip rule.
  const oracle::Board b = oracle::Board::from(s);
  EXPECT_EQ(b.legal().size(), 4u);
}

TEST(LegalMoves, FullConnect4ColumnIsExcluded) {
  const GameState s = test_support::board(
      "connect4 6 7 1\n"
      "...X...\n"
      "...O...\n"
      "...X...\n"
      "...O...\n"
      "...X...\n"
      "...O...\n");
  const auto moves = legal_moves(s);
  EXPECT_EQ(moves.size(), 6u);
  EXPECT_EQ(std::count(moves.begin(), moves.end(), Action::drop(3)), 0);
}

TEST(LegalMoves, EmptyGomoku6x6HasAllCells) {
  EXPECT_EQ(legal_moves(GameState::initial(parse_variant("gomoku_6x6"))).size(), 36u);
}

TEST(LegalMoves, TerminalStateIsAContractViolation) {
  const GameState s = test_support::board(
      "connect4 4 5 -1\n"
      ".....\n"
      "X....\n"
      "XO...\n"
      "XOO.X\n");
  // Column 0 holds three X discs; the fourth arrives after O's reply.
  const GameState won = apply_move(apply_move(s, Action::drop(4)), Action::drop(0));
  ASSERT_EQ(won.outcome(), Outcome::FirstWins);
  EXPECT_THROW(legal_moves(won), ContractViolation);
  EXPECT_THROW(apply_move(won, Action::drop(1)), IllegalMove);
}

TEST(ApplyMove, OthelloFlipsExactlyOneDisc) {
  const GameId id = parse_variant("othello");
  const GameState s = GameState::initial(id);
  // Upper-left centre disc is white at (3,3); the cell above it is (2,3).
  ASSERT_EQ(s.at(3, 3), kSecondPlayer);
  const GameState next = apply_move(s, Action::place(2, 3));
  EXPECT_EQ(next.count(kFirstPlayer), 4);
  EXPECT_EQ(next.count(kSecondPlayer), 1);
  EXPECT_EQ(next.at(3, 3), kFirstPlayer);
  EXPECT_EQ(othello_flip_count(s, 2, 3, kFirstPlayer), 1);
}

TEST(ApplyMove, Connect4DiscFallsToFloor) {
  const GameId id = parse_variant("connect4");
  const GameState s = apply_move(GameState::initial(id), Action::drop(2));
  EXPECT_EQ(s.at(id.height - 1, 2), kFirstPlayer);
  EXPECT_EQ(s.count(kFirstPlayer), 1);
  EXPECT_EQ(s.to_move(), kSecondPlayer);
}

TEST(ApplyMove, OccupiedGomokuCellIsIllegal) {
  const GameState s = apply_move(GameState::initial(parse_variant("gomoku")), Action::place(0, 0));
  EXPECT_THROW(apply_move(s, Action::place(0, 0)), IllegalMove);
}

TEST(ApplyMove, WrongActionKindIsIllegal) {
  const GameState c4 = GameState::initial(parse_variant("connect4"));
  EXPECT_THROW(apply_move(c4, Action::place(5, 0)), IllegalMove);
  EXPECT_THROW(apply_move(c4, Action::pass()), IllegalMove);
  const GameState oth = GameState::initial(parse_variant("othello"));
  EXPECT_THROW(apply_move(oth, Action::pass()), IllegalMove);
  EXPECT_THROW(apply_move(oth, Action::place(0, 0)), IllegalMove);
}

TEST(TerminalStatus, Connect4VerticalFour) {
  const GameState s = test_support::board(
      "connect4 6 7 -1\n"
      ".......\n"
      ".......\n"
      "X......\n"
      "XO.....\n"
      "XO.....\n"
      "XO.....\n");
  EXPECT_EQ(terminal_status(s), Outcome::FirstWins);
}

TEST(TerminalStatus, OthelloMajorityWins) {
  // 20 black and 16 white discs filling a 6x6 board.
  std::vector<std::int8_t> cells(36, kSecondPlayer);
  for (int i = 0; i < 20; ++i) cells[i] = kFirstPlayer;
  const GameState s = GameState::from_cells(parse_variant("othello_6x6"), cells, kFirstPlayer);
  EXPECT_EQ(terminal_status(s), Outcome::FirstWins);
}

TEST(TerminalStatus, OthelloEqualCountIsDraw) {
  std::vector<std::int8_t> cells(36, kSecondPlayer);
  for (int i = 0; i < 18; ++i) cells[i] = kFirstPlayer;
  const GameState s = GameState::from_cells(parse_variant("othello_6x6"), cells, kFirstPlayer);
  EXPECT_EQ(terminal_status(s), Outcome::Draw);
}

TEST(TerminalStatus, EmptyBoardsAreOngoing) {
  for (const GameId& id : builtin_variants()) EXPECT_EQ(terminal_status(GameState::initial(id)), Outcome::Ongoing);
}

TEST(TerminalStatus, GomokuNeedsFiveAndAcceptsLonger) {
  const GameState four = test_support::board(
      "gomoku 6 6 1\n"
      "XXXX..\n"
      "OOOO..\n"
      "......\n"
      "......\n"
      "......\n"
      "......\n");
  EXPECT_EQ(terminal_status(four), Outcome::Ongoing);
  // Closing a gap that joins 3 + 1 + 2 gives an overline of six, still a win.
  const GameState gap = test_support::board(
      "gomoku 6 6 1\n"
      "XXX.XX\n"
      "OOOO..\n"
      "O.....\n"
      "......\n"
      "......\n"
      "......\n");
  EXPECT_EQ(apply_move(gap, Action::place(0, 3)).outcome(), Outcome::FirstWins);
}

TEST(GameState, FromCellsRejectsFloatingConnect4Disc) {
  std::vector<std::int8_t> cells(20, 0);
  cells[0] = kFirstPlayer;
  EXPECT_THROW(GameState::from_cells(parse_variant("connect4_5x4"), cells, kSecondPlayer), std::invalid_argument);
}

TEST(GameState, FromCellsRejectsImpossibleCounts) {
  std::vector<std::int8_t> cells(36, 0);
  cells[0] = cells[1] = kFirstPlayer;
  EXPECT_THROW(GameState::from_cells(parse_variant("gomoku_6x6"), cells, kSecondPlayer), std::invalid_argument);
}

TEST(GameState, OthelloInitialSetup) {
  for (const char* name : {"othello", "othello_6x6"}) {
    const GameId id = parse_variant(name);
    const GameState s = GameState::initial(id);
    const int h = id.height / 2;
    const int w = id.width / 2;
    EXPECT_EQ(s.count(kFirstPlayer), 2);
    EXPECT_EQ(s.count(kSecondPlayer), 2);
    EXPECT_EQ(s.at(h - 1, w - 1), kSecondPlayer);
    EXPECT_EQ(s.at(h, w), kSecondPlayer);
    EXPECT_EQ(s.at(h - 1, w), kFirstPlayer);
    EXPECT_EQ(s.at(h, w - 1), kFirstPlayer);
  }
}

TEST(GameState, OthelloPassWhenNoPlacement) {
  // White has no placement; black does, so white must pass.
  const GameState s = test_support::board(
      "othello 4 4 -1\n"
      "XXXX\n"
      "XXXX\n"
      "XXXO\n"
      "X...\n");
  ASSERT_EQ(s.outcome(), Outcome::Ongoing);
  const auto moves = legal_moves(s);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves.front(), Action::pass());
  const GameState after = apply_move(s, Action::pass());
  EXPECT_EQ(after.to_move(), kFirstPlayer);
}

TEST(GameState, OthelloDoublePassEndsGame) {
  // Neither colour can place anything: the game is over with black ahead.
  const GameState s = test_support::board(
      "othello 4 4 1\n"
      "XXXX\n"
      "XXXX\n"
      "XXXX\n"
      "XX..\n");
  EXPECT_EQ(s.outcome(), Outcome::FirstWins);
}

// Property: disc counts, move bookkeeping and outcomes agree with the
// brute-force oracle along random playouts of every variant.
TEST(GameProperties, RandomPlayoutsMatchOracle) {
  Rng rng(2024);
  for (const GameId& id : builtin_variants()) {
    for (int g = 0; g < 100; ++g) {
      GameState s = GameState::initial(id);
      oracle::Board b(id);
      while (true) {
        ASSERT_EQ(is_terminal(s.outcome()), b.finished()) << variant_name(id);
        if (b.finished()) {
          EXPECT_EQ(winner_color(s.outcome()), b.winner());
          break;
        }
        const std::vector<int> legal = legal_action_indices(s);
        ASSERT_EQ(legal, b.legal());
        const int before = s.count(kFirstPlayer) + s.count(kSecondPlayer);
        const int a = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
        const GameState next = apply_move(s, action_from_index(a, id));
        b.play(a);
        const int after = next.count(kFirstPlayer) + next.count(kSecondPlayer);
        const bool pass = id.game == Game::Othello && a == id.cells();
        EXPECT_EQ(after, before + (pass ? 0 : 1));
        EXPECT_EQ(next.move_count(), s.move_count() + 1);
        s = next;
      }
    }
  }
}

TEST(GameProperties, DeterministicApply) {
  Rng a(5);
  Rng b(5);
  for (const GameId& id : builtin_variants()) {
    const GameState x = test_support::random_position(id, 12, a);
    const GameState y = test_support::random_position(id, 12, b);
    EXPECT_EQ(x, y);
  }
}
