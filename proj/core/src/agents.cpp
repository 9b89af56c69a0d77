#include "alphavit/agents.hpp"

#include <charconv>
#include <stdexcept>

#include "alphavit/features.hpp"
#include "alphavit/minimax.hpp"
#include "alphavit/neural/checkpoint.hpp"

namespace alphavit {
namespace {

int parse_positive(std::string_view text, std::string_view descriptor) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw std::invalid_argument("bad agent descriptor: " + std::string(descriptor));
  }
  return value;
}

}  // namespace

Action RandomAgent::select_move(const GameState& state, Rng& rng) const { return random_move(state, rng); }

MinimaxAgent::MinimaxAgent(int depth) : depth_(depth) {
  if (depth < 1) throw std::invalid_argument("minimax depth must be >= 1");
}

std::string MinimaxAgent::name() const { return "minimax:" + std::to_string(depth_); }

Action MinimaxAgent::select_move(const GameState& state, Rng& rng) const { return minimax_move(state, depth_, rng); }

UctAgent::UctAgent(UctParams params) : params_(params) {
  if (params.simulations < 1) throw std::invalid_argument("mcts simulations must be >= 1");
}

std::string UctAgent::name() const { return "mcts:" + std::to_string(params_.simulations); }

Action UctAgent::select_move(const GameState& state, Rng& rng) const { return uct_search(state, params_, rng).action; }

NetworkEvaluator::NetworkEvaluator(std::shared_ptr<const neural::Network<float>> network)
    : network_(std::move(network)) {
  if (!network_) throw std::invalid_argument("null network");
}

Evaluation NetworkEvaluator::evaluate(const GameState& state) const {
  const FeatureStack features = encode_planes(state, {}, network_->config().history);
  neural::NetworkOutput<float> out = network_->forward(features, state.id());
  return {out.value, std::move(out.policy)};
}

NetworkAgent::NetworkAgent(std::shared_ptr<const neural::Network<float>> network, SearchParams params,
                           std::string label)
    : evaluator_(std::move(network)), params_(params), label_(std::move(label)) {
  params_.dirichlet_epsilon = 0.0;
  params_.validate();
}

std::string NetworkAgent::name() const {
  if (!label_.empty()) return label_;
  return std::string(neural::family_name(evaluator_.network().config().family));
}

bool NetworkAgent::supports(const GameId& id) const { return evaluator_.network().supports(id); }

Action NetworkAgent::select_move(const GameState& state, Rng& rng) const {
  const SearchResult result = mcts_search(state, evaluator_, params_, rng);
  const std::vector<int> legal = legal_action_indices(state);
  const int index = play_from_visits(result.visits, legal, PlayPolicy{PlayMode::Greedy, 1.0}, rng);
  return action_from_index(index, state.id());
}

std::shared_ptr<Agent> make_agent(std::string_view descriptor, const SearchParams& search) {
  if (descriptor == "random") return std::make_shared<RandomAgent>();
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos || colon + 1 == descriptor.size()) {
    throw std::invalid_argument("bad agent descriptor: " + std::string(descriptor));
  }
  const std::string_view kind = descriptor.substr(0, colon);
  const std::string_view arg = descriptor.substr(colon + 1);
  if (kind == "mcts") {
    UctParams params;
    params.simulations = parse_positive(arg, descriptor);
    return std::make_shared<UctAgent>(params);
  }
  if (kind == "minimax") return std::make_shared<MinimaxAgent>(parse_positive(arg, descriptor));
  const neural::Family family = neural::parse_family(kind);
  neural::Checkpoint ckpt = neural::load_checkpoint(std::string(arg));
  if (ckpt.network->config().family != family) {
    throw std::invalid_argument("checkpoint " + std::string(arg) + " holds a " +
                                std::string(neural::family_name(ckpt.network->config().family)) + " network");
  }
  return std::make_shared<NetworkAgent>(std::move(ckpt.network), search, std::string(descriptor));
}

}  // namespace alphavit
