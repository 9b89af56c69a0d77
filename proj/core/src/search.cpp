#include "alphavit/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace alphavit {

void SearchParams::validate() const {
  if (simulations < 1) throw std::invalid_argument("simulations must be >= 1");
  if (!(c_puct > 0.0)) throw std::invalid_argument("c_puct must be > 0");
  if (!(dirichlet_epsilon >= 0.0 && dirichlet_epsilon <= 1.0)) {
    throw std::invalid_argument("dirichlet epsilon must lie in [0, 1]");
  }
  if (dirichlet_epsilon > 0.0 && !(dirichlet_alpha > 0.0)) {
    throw std::invalid_argument("dirichlet alpha must be > 0");
  }
}

Evaluation UniformEvaluator::evaluate(const GameState& state) const {
  const int n = action_space_size(state.id());
  return {0.0f, std::vector<float>(n, 1.0f / static_cast<float>(n))};
}

std::size_t puct_select(std::span<const EdgeStats> edges, double c_puct) {
  if (edges.empty()) throw ContractViolation("puct_select on a node without edges");
  int parent_visits = 0;
  for (const auto& e : edges) parent_visits += e.visits;
  const double sqrt_parent = std::sqrt(static_cast<double>(parent_visits));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const double score = e.mean_value + c_puct * e.prior * sqrt_parent / (1.0 + e.visits);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

Action puct_select(const SearchTree& tree, const SearchNode& node, double c_puct) {
  if (!node.expanded) throw ContractViolation("puct_select on an unexpanded node");
  return tree.links(node)[puct_select(tree.stats(node), c_puct)].action;
}

std::vector<float> legal_priors(std::span<const float> policy, std::span<const int> legal) {
  std::vector<float> out(legal.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    const float p = policy[legal[i]];
    out[i] = (std::isfinite(p) && p > 0.0f) ? p : 0.0f;
    sum += out[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    std::fill(out.begin(), out.end(), 1.0f / static_cast<float>(legal.size()));
    return out;
  }
  for (auto& p : out) p = static_cast<float>(p / sum);
  return out;
}

PuctSearch::PuctSearch(const GameState& root, const Evaluator& evaluator, const SearchParams& params,
                       Rng& rng)
    : evaluator_(evaluator), params_(params) {
  params_.validate();
  if (is_terminal(root.outcome())) throw ContractViolation("search root is terminal");
  add_node(root);
  root_value_ = static_cast<float>(expand(0));

  const SearchNode& r = tree_.nodes_[0];
  if (params_.dirichlet_epsilon > 0.0 && r.edge_count > 0) {
    std::gamma_distribution<double> gamma(params_.dirichlet_alpha, 1.0);
    std::vector<double> noise(r.edge_count);
    double total = 0.0;
    for (auto& n : noise) {
      n = gamma(rng);
      total += n;
    }
    const double eps = params_.dirichlet_epsilon;
    for (int i = 0; i < r.edge_count; ++i) {
      const double eta = total > 0.0 ? noise[i] / total : 1.0 / r.edge_count;
      auto& p = tree_.stats_[r.first_edge + i].prior;
      p = static_cast<float>((1.0 - eps) * p + eps * eta);
    }
  }
}

int PuctSearch::add_node(const GameState& state) {
  tree_.nodes_.push_back(SearchNode{state, false, 0, 0});
  return static_cast<int>(tree_.nodes_.size()) - 1;
}

double PuctSearch::expand(int node) {
  const GameState state = tree_.nodes_[node].state;
  const Evaluation eval = evaluator_.evaluate(state);
  const std::vector<Action> moves = legal_moves(state);
  std::vector<int> legal(moves.size());
  for (std::size_t i = 0; i < moves.size(); ++i) legal[i] = action_index(moves[i], state.id());
  if (static_cast<int>(eval.policy.size()) != action_space_size(state.id())) {
    throw std::runtime_error("evaluator policy length does not match the action space");
  }
  const std::vector<float> priors = legal_priors(eval.policy, legal);

  SearchNode& n = tree_.nodes_[node];
  n.first_edge = static_cast<int>(tree_.stats_.size());
  n.edge_count = static_cast<int>(moves.size());
  n.expanded = true;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    tree_.stats_.push_back(EdgeStats{0, 0.0, 0.0, priors[i]});
    tree_.links_.push_back(SearchTree::EdgeLink{moves[i], legal[i], -1});
  }
  return static_cast<double>(eval.value);
}

void PuctSearch::run(int simulations) {
  for (int i = 0; i < simulations; ++i) simulate();
}

void PuctSearch::simulate() {
  path_.clear();
  int node = 0;
  double leaf_value = 0.0;
  while (true) {
    const SearchNode& n = tree_.nodes_[node];
    if (is_terminal(n.state.outcome())) {
      leaf_value = winner_color(n.state.outcome());
      break;
    }
    if (!n.expanded) {
      leaf_value = expand(node);
      break;
    }
    const int edge = n.first_edge + static_cast<int>(puct_select(tree_.stats(n), params_.c_puct));
    path_.push_back(edge);
    int child = tree_.links_[edge].child;
    if (child < 0) {
      GameState next = apply_move(n.state, tree_.links_[edge].action);
      child = add_node(next);
      tree_.links_[edge].child = child;
    }
    node = child;
  }

  // Each edge accumulates the leaf value seen from its parent's side to move.
  int parent = 0;
  for (int edge : path_) {
    const double sign = tree_.nodes_[parent].state.to_move();
    EdgeStats& s = tree_.stats_[edge];
    s.visits += 1;
    s.value_sum += sign * leaf_value;
    s.mean_value = s.value_sum / s.visits;
    parent = tree_.links_[edge].child;
  }
  if (observer_) observer_(path_, leaf_value);
}

std::vector<int> PuctSearch::root_visits() const {
  const SearchNode& r = tree_.root();
  std::vector<int> out(action_space_size(r.state.id()), 0);
  for (int i = 0; i < r.edge_count; ++i) {
    out[tree_.links_[r.first_edge + i].action_index] = tree_.stats_[r.first_edge + i].visits;
  }
  return out;
}

std::vector<double> PuctSearch::root_q() const {
  const SearchNode& r = tree_.root();
  std::vector<double> out(action_space_size(r.state.id()), 0.0);
  for (int i = 0; i < r.edge_count; ++i) {
    out[tree_.links_[r.first_edge + i].action_index] = tree_.stats_[r.first_edge + i].mean_value;
  }
  return out;
}

SearchResult mcts_search(const GameState& root, const Evaluator& evaluator, const SearchParams& params,
                         Rng& rng) {
  PuctSearch search(root, evaluator, params, rng);
  search.run(params.simulations);
  SearchResult result;
  result.visits = search.root_visits();
  result.q = search.root_q();
  result.network_value = search.root_network_value();
  double w = 0.0;
  int n = 0;
  for (const auto& s : search.tree().stats(search.tree().root())) {
    w += s.value_sum;
    n += s.visits;
  }
  result.value = n > 0 ? w / n : 0.0;
  return result;
}

std::vector<double> softmax_visit_probabilities(std::span<const int> visits, std::span<const int> legal,
                                                double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  std::vector<double> probs(legal.size(), 0.0);
  if (legal.empty()) return probs;
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int a : legal) max_logit = std::max(max_logit, visits[a] / temperature);
  double total = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    probs[i] = std::exp(visits[legal[i]] / temperature - max_logit);
    total += probs[i];
  }
  for (auto& p : probs) p /= total;
  return probs;
}

int play_from_visits(std::span<const int> visits, std::span<const int> legal, const PlayPolicy& policy,
                     Rng& rng) {
  if (legal.empty()) throw ContractViolation("no legal actions to play");
  if (policy.mode == PlayMode::Greedy) {
    int best = legal.front();
    for (int a : legal) {
      if (visits[a] > visits[best] || (visits[a] == visits[best] && a < best)) best = a;
    }
    return best;
  }
  const auto probs = softmax_visit_probabilities(visits, legal, policy.temperature);
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
  return legal[pick(rng)];
}

}  // namespace alphavit
