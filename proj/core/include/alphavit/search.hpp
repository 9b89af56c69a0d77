#pragma once

#include <functional>
#include <span>
#include <vector>

#include "alphavit/game.hpp"
#include "alphavit/rng.hpp"

namespace alphavit {

// Statistics on one edge (s, a). mean_value is W / N from the perspective of
// the player to move at s, so selection always maximises.
struct EdgeStats {
  int visits = 0;
  double value_sum = 0.0;
  double mean_value = 0.0;
  float prior = 0.0f;
};

struct SearchParams {
  int simulations = 200;
  double c_puct = 1.25;
  double dirichlet_epsilon = 0.2;
  double dirichlet_alpha = 0.3;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Network output seen by the search: value in first-player terms and a
// per-action policy over the full action space.
struct Evaluation {
  float value = 0.0f;
  std::vector<float> policy;
};

// Implementations must allow concurrent evaluate() calls.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation evaluate(const GameState& state) const = 0;
};

// Value 0 and a flat policy: the untrained-network stand-in.
class UniformEvaluator final : public Evaluator {
 public:
  Evaluation evaluate(const GameState& state) const override;
};

struct SearchNode {
  GameState state;
  bool expanded = false;
  int first_edge = 0;
  int edge_count = 0;
};

class SearchTree {
 public:
  struct EdgeLink {
    Action action;
    int action_index = 0;
    int child = -1;
  };

  int size() const { return static_cast<int>(nodes_.size()); }
  const SearchNode& node(int i) const { return nodes_[i]; }
  const SearchNode& root() const { return nodes_.front(); }

  std::span<const EdgeStats> stats(const SearchNode& n) const {
    return {stats_.data() + n.first_edge, static_cast<std::size_t>(n.edge_count)};
  }
  std::span<const EdgeLink> links(const SearchNode& n) const {
    return {links_.data() + n.first_edge, static_cast<std::size_t>(n.edge_count)};
  }
  const EdgeStats& edge_stats(int edge) const { return stats_[edge]; }

 private:
  friend class PuctSearch;
  std::vector<SearchNode> nodes_;
  std::vector<EdgeStats> stats_;
  std::vector<EdgeLink> links_;
};

// Position of the edge maximising Q + c * P * sqrt(N) / (1 + N(a)) with
// N = sum of edge visits; ties go to the lowest position. Throws
// ContractViolation on an empty edge list.
std::size_t puct_select(std::span<const EdgeStats> edges, double c_puct);

// Node-level form: throws ContractViolation when the node is unexpanded.
Action puct_select(const SearchTree& tree, const SearchNode& node, double c_puct);

// AlphaZero-style search over one root. The root is expanded on
// construction (and Dirichlet noise mixed into its priors when epsilon > 0),
// so every simulation passes through exactly one root edge.
class PuctSearch {
 public:
  // Called once per simulation with the global edge ids on the path (root
  // first) and the leaf value in first-player terms.
  using BackupObserver = std::function<void(std::span<const int> edges, double leaf_value)>;

  PuctSearch(const GameState& root, const Evaluator& evaluator, const SearchParams& params, Rng& rng);

  void run(int simulations);
  void simulate();
  void set_backup_observer(BackupObserver observer) { observer_ = std::move(observer); }

  const SearchTree& tree() const { return tree_; }
  float root_network_value() const { return root_value_; }

  // Visit counts and mean values indexed by action index (zeros for
  // illegal actions).
  std::vector<int> root_visits() const;
  std::vector<double> root_q() const;

 private:
  int add_node(const GameState& state);
  // Returns the leaf value in first-player terms.
  double expand(int node);

  const Evaluator& evaluator_;
  SearchParams params_;
  SearchTree tree_;
  BackupObserver observer_;
  float root_value_ = 0.0f;
  std::vector<int> path_;
};

struct SearchResult {
  std::vector<int> visits;     // per action index
  std::vector<double> q;       // per action index, side-to-move perspective
  double value = 0.0;          // visit-weighted root value, side-to-move perspective
  float network_value = 0.0f;  // evaluator value at the root, first-player terms
};

// Throws ContractViolation on a terminal root.
SearchResult mcts_search(const GameState& root, const Evaluator& evaluator, const SearchParams& params,
                         Rng& rng);

enum class PlayMode { Greedy, Softmax };

struct PlayPolicy {
  PlayMode mode = PlayMode::Greedy;
  double temperature = 1.0;
};

// exp(N / tau) normalised over `legal` (computed with the max subtracted).
std::vector<double> softmax_visit_probabilities(std::span<const int> visits, std::span<const int> legal,
                                                double temperature);

// Picks an action index among `legal`. Greedy ties (and an all-zero visit
// vector) resolve to the lowest legal index.
int play_from_visits(std::span<const int> visits, std::span<const int> legal, const PlayPolicy& policy,
                     Rng& rng);

// Restricts a policy to the legal indices and renormalises; falls back to
// uniform when the restricted mass is zero or not finite.
std::vector<float> legal_priors(std::span<const float> policy, std::span<const int> legal);

}  // namespace alphavit
