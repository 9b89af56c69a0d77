#pragma once

#include <span>
#include <vector>

#include "alphavit/game.hpp"

namespace alphavit {

// (2T+1) x H x W input planes. Planes [0, T) hold first-player occupancy for
// the current and previous T-1 positions, planes [T, 2T) the same for the
// second player, and the last plane is constant +1 / -1 for the side to move.
struct FeatureStack {
  int planes = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  FeatureStack() = default;
  FeatureStack(int planes, int height, int width)
      : planes(planes), height(height), width(width),
        data(static_cast<std::size_t>(planes) * height * width, 0.0f) {}

  float& at(int p, int r, int c) { return data[(static_cast<std::size_t>(p) * height + r) * width + c]; }
  float at(int p, int r, int c) const {
    return data[(static_cast<std::size_t>(p) * height + r) * width + c];
  }
  int history() const { return (planes - 1) / 2; }

  bool operator==(const FeatureStack&) const = default;
};

// `history` holds earlier positions, most recent first; missing entries are
// zero-filled.
FeatureStack encode_planes(const GameState& state, std::span<const GameState> history = {},
                           int history_length = 1);

// One symmetry of a (features, policy) training pair.
struct SymmetricSample {
  FeatureStack features;
  std::vector<float> policy;
};

// Number of board symmetries used for augmentation: 2 for Connect4
// (identity, horizontal mirror), 8 for Gomoku and Othello (dihedral group).
int symmetry_count(Game game);

// Maps (row, col) through dihedral element k in [0, 8) of an n x n square.
// Elements 0-3 rotate clockwise by k quarter turns; 4-7 mirror columns first.
std::pair<int, int> dihedral_map(int k, int row, int col, int n);
int dihedral_inverse(int k);

// Element 0 is always the identity. Policy layout follows action_index():
// Connect4 policies are per column; Othello's pass entry is carried
// unchanged. Throws std::invalid_argument for non-square Gomoku/Othello.
std::vector<SymmetricSample> symmetries(const FeatureStack& features, std::span<const float> policy,
                                        const GameId& id);

// A single transform, used by symmetries() and by the round-trip tests.
SymmetricSample apply_symmetry(int k, const FeatureStack& features, std::span<const float> policy,
                               const GameId& id);

}  // namespace alphavit
