#include "alphavit/uct.hpp"

#include <cmath>
#include <limits>

namespace alphavit {
namespace {

struct UctNode {
  GameState state;
  int visits = 0;
  bool expanded = false;
  int first_edge = 0;
  int edge_count = 0;
};

struct UctEdge {
  Action action;
  int action_index = 0;
  int child = -1;
  int visits = 0;
  double value_sum = 0.0;
};

class UctTree {
 public:
  UctTree(const GameState& root, const UctParams& params) : params_(params) {
    nodes_.push_back(UctNode{root});
    expand(0);
  }

  void simulate(Rng& rng) {
    path_.clear();
    int node = 0;
    double value = 0.0;
    while (true) {
      UctNode& n = nodes_[node];
      if (is_terminal(n.state.outcome())) {
        value = winner_color(n.state.outcome());
        break;
      }
      if (!n.expanded) {
        if (n.visits + 1 >= params_.expand_threshold) {
          expand(node);
        } else {
          value = random_rollout(n.state, rng);
          break;
        }
      }
      const int edge = select(nodes_[node]);
      path_.push_back(edge);
      int child = edges_[edge].child;
      if (child < 0) {
        GameState next = apply_move(nodes_[node].state, edges_[edge].action);
        nodes_.push_back(UctNode{next});
        child = static_cast<int>(nodes_.size()) - 1;
        edges_[edge].child = child;
      }
      nodes_[node].visits += 1;
      node = child;
    }
    nodes_[node].visits += 1;

    int parent = 0;
    for (int edge : path_) {
      const double sign = nodes_[parent].state.to_move();
      edges_[edge].visits += 1;
      edges_[edge].value_sum += sign * value;
      parent = edges_[edge].child;
    }
  }

  UctResult result() const {
    const UctNode& r = nodes_.front();
    UctResult out;
    out.visits.assign(action_space_size(r.state.id()), 0);
    int best = r.first_edge;
    for (int e = r.first_edge; e < r.first_edge + r.edge_count; ++e) {
      out.visits[edges_[e].action_index] = edges_[e].visits;
      if (edges_[e].visits > edges_[best].visits) best = e;
    }
    out.action = edges_[best].action;
    return out;
  }

 private:
  void expand(int node) {
    const auto moves = legal_moves(nodes_[node].state);
    UctNode& n = nodes_[node];
    n.first_edge = static_cast<int>(edges_.size());
    n.edge_count = static_cast<int>(moves.size());
    n.expanded = true;
    for (const auto& m : moves) edges_.push_back(UctEdge{m, action_index(m, n.state.id()), -1, 0, 0.0});
  }

  int select(const UctNode& n) const {
    int parent_visits = 0;
    for (int e = n.first_edge; e < n.first_edge + n.edge_count; ++e) {
      if (edges_[e].visits == 0) return e;
      parent_visits += edges_[e].visits;
    }
    const double log_parent = std::log(static_cast<double>(parent_visits));
    int best = n.first_edge;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int e = n.first_edge; e < n.first_edge + n.edge_count; ++e) {
      const double q = edges_[e].value_sum / edges_[e].visits;
      const double score = q + params_.exploration * std::sqrt(log_parent / edges_[e].visits);
      if (score > best_score) {
        best_score = score;
        best = e;
      }
    }
    return best;
  }

  UctParams params_;
  std::vector<UctNode> nodes_;
  std::vector<UctEdge> edges_;
  std::vector<int> path_;
};

}  // namespace

int random_rollout(GameState state, Rng& rng) {
  while (!is_terminal(state.outcome())) state = apply_move(state, random_move(state, rng));
  return winner_color(state.outcome());
}

Action random_move(const GameState& state, Rng& rng) {
  const auto moves = legal_moves(state);
  std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
  return moves[pick(rng)];
}

UctResult uct_search(const GameState& root, const UctParams& params, Rng& rng) {
  if (is_terminal(root.outcome())) throw ContractViolation("uct_search on a terminal root");
  if (params.simulations < 1) throw std::invalid_argument("simulations must be >= 1");
  UctTree tree(root, params);
  for (int i = 0; i < params.simulations; ++i) tree.simulate(rng);
  return tree.result();
}

}  // namespace alphavit
