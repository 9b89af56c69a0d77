#include "alphavit/features.hpp"

#include <stdexcept>

namespace alphavit {

FeatureStack encode_planes(const GameState& state, std::span<const GameState> history,
                           int history_length) {
  if (history_length < 1) throw std::invalid_argument("history length must be >= 1");
  const GameId& id = state.id();
  FeatureStack out(2 * history_length + 1, id.height, id.width);
  for (int t = 0; t < history_length; ++t) {
    const GameState* s = nullptr;
    if (t == 0) {
      s = &state;
    } else if (static_cast<std::size_t>(t - 1) < history.size()) {
      s = &history[t - 1];
    }
    if (s == nullptr) continue;
    for (int r = 0; r < id.height; ++r) {
      for (int c = 0; c < id.width; ++c) {
        const int v = s->at(r, c);
        if (v == kFirstPlayer) out.at(t, r, c) = 1.0f;
        if (v == kSecondPlayer) out.at(history_length + t, r, c) = 1.0f;
      }
    }
  }
  const float color = state.to_move() == kFirstPlayer ? 1.0f : -1.0f;
  for (int r = 0; r < id.height; ++r) {
    for (int c = 0; c < id.width; ++c) out.at(2 * history_length, r, c) = color;
  }
  return out;
}

int symmetry_count(Game game) { return game == Game::Connect4 ? 2 : 8; }

std::pair<int, int> dihedral_map(int k, int row, int col, int n) {
  if (k >= 4) col = n - 1 - col;
  for (int i = 0; i < k % 4; ++i) {
    const int r = col;
    const int c = n - 1 - row;
    row = r;
    col = c;
  }
  return {row, col};
}

int dihedral_inverse(int k) {
  if (k >= 4) return k;  // reflections are involutions
  return (4 - k) % 4;
}

SymmetricSample apply_symmetry(int k, const FeatureStack& features, std::span<const float> policy,
                               const GameId& id) {
  const int h = features.height;
  const int w = features.width;
  if (h != id.height || w != id.width) throw std::invalid_argument("features do not match board");
  if (static_cast<int>(policy.size()) != action_space_size(id)) {
    throw std::invalid_argument("policy length does not match the action space");
  }
  SymmetricSample out{FeatureStack(features.planes, h, w), std::vector<float>(policy.size())};
  const int color_plane = features.planes - 1;

  if (id.game == Game::Connect4) {
    if (k < 0 || k >= 2) throw std::invalid_argument("connect4 has two symmetries");
    for (int p = 0; p < features.planes; ++p) {
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
          const int dc = (k == 1 && p != color_plane) ? w - 1 - c : c;
          out.features.at(p, r, dc) = features.at(p, r, c);
        }
      }
    }
    for (int c = 0; c < w; ++c) out.policy[k == 1 ? w - 1 - c : c] = policy[c];
    return out;
  }

  if (h != w) throw std::invalid_argument("dihedral symmetries need a square board");
  if (k < 0 || k >= 8) throw std::invalid_argument("dihedral element out of range");
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto [tr, tc] = dihedral_map(k, r, c, h);
      for (int p = 0; p < color_plane; ++p) out.features.at(p, tr, tc) = features.at(p, r, c);
      out.features.at(color_plane, r, c) = features.at(color_plane, r, c);
      out.policy[tr * w + tc] = policy[r * w + c];
    }
  }
  if (id.game == Game::Othello) out.policy[h * w] = policy[h * w];
  return out;
}

std::vector<SymmetricSample> symmetries(const FeatureStack& features, std::span<const float> policy,
                                        const GameId& id) {
  const int n = symmetry_count(id.game);
  if (n == 8 && id.height != id.width) {
    throw std::invalid_argument("dihedral symmetries need a square board");
  }
  std::vector<SymmetricSample> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(apply_symmetry(k, features, policy, id));
  return out;
}

}  // namespace alphavit
