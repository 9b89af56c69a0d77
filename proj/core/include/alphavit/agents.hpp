#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "alphavit/game.hpp"
#include "alphavit/neural/network.hpp"
#include "alphavit/rng.hpp"
#include "alphavit/search.hpp"
#include "alphavit/uct.hpp"

namespace alphavit {

// A move selector. select_move() is const so one agent can serve several
// concurrent games; all randomness comes from the caller's generator.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual bool supports(const GameId& id) const { return id.cells() > 0; }
  virtual Action select_move(const GameState& state, Rng& rng) const = 0;
};

class RandomAgent final : public Agent {
 public:
  std::string name() const override { return "random"; }
  Action select_move(const GameState& state, Rng& rng) const override;
};

class MinimaxAgent final : public Agent {
 public:
  explicit MinimaxAgent(int depth);
  std::string name() const override;
  Action select_move(const GameState& state, Rng& rng) const override;

 private:
  int depth_;
};

class UctAgent final : public Agent {
 public:
  explicit UctAgent(UctParams params);
  std::string name() const override;
  Action select_move(const GameState& state, Rng& rng) const override;

 private:
  UctParams params_;
};

// Adapts a float network to the search's Evaluator interface.
class NetworkEvaluator final : public Evaluator {
 public:
  explicit NetworkEvaluator(std::shared_ptr<const neural::Network<float>> network);
  Evaluation evaluate(const GameState& state) const override;
  const neural::Network<float>& network() const { return *network_; }

 private:
  std::shared_ptr<const neural::Network<float>> network_;
};

// PUCT search guided by a network; plays the most visited move.
class NetworkAgent final : public Agent {
 public:
  NetworkAgent(std::shared_ptr<const neural::Network<float>> network, SearchParams params,
               std::string label = {});
  std::string name() const override;
  bool supports(const GameId& id) const override;
  Action select_move(const GameState& state, Rng& rng) const override;

 private:
  NetworkEvaluator evaluator_;
  SearchParams params_;
  std::string label_;
};

// Descriptors: "random", "mcts:N", "minimax:D", and "<family>:<checkpoint>"
// with family one of alphavit, alphavid, alphavda, alphazero. Network agents
// search with `search.simulations` playouts and no root noise. Throws
// std::invalid_argument for malformed descriptors and when the checkpoint's
// family differs from the descriptor.
std::shared_ptr<Agent> make_agent(std::string_view descriptor, const SearchParams& search = {});

}  // namespace alphavit
