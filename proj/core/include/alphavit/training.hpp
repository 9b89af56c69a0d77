#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphavit/features.hpp"
#include "alphavit/game.hpp"
#include "alphavit/neural/network.hpp"
#include "alphavit/search.hpp"

namespace alphavit {

// Raised when the loss or a gradient stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sample {
  FeatureStack features;
  std::vector<float> pi;  // over the full action space, zero on illegal actions
  int c_win = 0;          // winner colour of the finished game, 0 for a draw
  GameId id;
};

// Bounded FIFO of samples for one game.
class ReplayQueue {
 public:
  explicit ReplayQueue(std::size_t capacity = 100000);

  void push(Sample sample);
  void push(std::vector<Sample> samples);

  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Sample> samples_;
};

// Per-game self-play settings.
struct GameSettings {
  GameId id;
  int selfplay_games = 10;  // per iteration
  int opening_moves = 6;    // moves sampled from exp(N / tau) before greedy play
  double temperature = 100.0;
  SearchParams search;
};

// Defaults for the built-in variants (simulations, self-play games per
// iteration, opening length and temperature); other boards take the values
// of their game's full-size variant.
GameSettings default_settings(const GameId& id);

struct TrainConfig {
  int iterations = 1000;
  int batch_size = 1024;
  int epochs = 1;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::size_t queue_capacity = 100000;
  std::size_t min_fill = 1024;  // bootstrap target per queue
  int bootstrap_simulations = 100;
  std::vector<GameSettings> games;
  int threads = 1;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// One full game of network-guided self-play. Every ply yields a sample whose
// pi is the normalised root visit distribution; c_win is filled in once the
// game ends.
std::vector<Sample> self_play(const Evaluator& evaluator, const GameSettings& settings, std::uint64_t seed,
                              int history = 1);

// Self-play with the rollout-based UCT searcher, used to fill empty queues.
std::vector<Sample> uct_self_play(const GameSettings& settings, int simulations, std::uint64_t seed,
                                  int history = 1);

// Each sample followed by its board symmetries (x2 Connect4, x8 otherwise);
// the identity copy comes first.
std::vector<Sample> augment(const std::vector<Sample>& samples);

// Plays UCT self-play games in fixed rounds of eight until the queue holds
// at least min_fill samples (or is full).
void bootstrap_queue(ReplayQueue& queue, const GameSettings& settings, const TrainConfig& cfg, int history = 1);

struct LossTerms {
  double value_mse = 0.0;
  double policy_ce = 0.0;
  double total() const { return value_mse + policy_ce; }
};

inline constexpr double kProbabilityFloor = 1e-7;

// (c_win - v)^2 - pi . log(max(p, 1e-7)). Throws DivergenceError when the
// result is not finite.
LossTerms sample_loss(double value, double c_win, std::span<const double> policy, std::span<const double> pi);

// SGD with classical momentum and L2 weight decay on trainable arrays:
//   velocity = momentum * velocity + grad + weight_decay * w
//   w -= lr * velocity
class SgdMomentum {
 public:
  SgdMomentum(double learning_rate, double momentum, double weight_decay);

  template <typename T>
  void step(neural::Network<T>& network, const neural::ParameterBuffer<T>& grads);

  std::vector<double>& velocity() { return velocity_; }
  const std::vector<double>& velocity() const { return velocity_; }

 private:
  double learning_rate_;
  double momentum_;
  double weight_decay_;
  std::vector<double> velocity_;
};

// Mean loss and gradient over a batch.
template <typename T>
LossTerms batch_gradient(const neural::Network<T>& network, std::span<const Sample* const> batch,
                         neural::ParameterBuffer<T>& grads);

// One optimizer update on a batch; returns the batch loss measured before the
// update.
template <typename T>
LossTerms train_step(neural::Network<T>& network, SgdMomentum& optimizer, std::span<const Sample* const> batch);

struct IterationMetrics {
  int iteration = 0;
  GameId id;
  LossTerms loss;
  int batches = 0;
  std::size_t queue = 0;
};

// "iter=<n> game=<id> loss=<f> value_mse=<f> policy_ce=<f> queue=<len>"
std::string format_metrics(const IterationMetrics& m);

// The iterated self-play / augmentation / learning loop over one or more
// games sharing a single network. Iterations are numbered from 1.
class Trainer {
 public:
  Trainer(TrainConfig cfg, std::shared_ptr<neural::Network<float>> network, int completed_iterations = 0);

  const TrainConfig& config() const { return cfg_; }
  neural::Network<float>& network() { return *network_; }
  std::shared_ptr<neural::Network<float>> shared_network() const { return network_; }
  SgdMomentum& optimizer() { return optimizer_; }
  const ReplayQueue& queue(std::size_t game) const { return queues_[game]; }
  int completed_iterations() const { return iteration_; }

  // Fills every empty queue with UCT self-play data.
  void bootstrap();
  // Runs one iteration and returns one metrics record per game.
  std::vector<IterationMetrics> run_iteration();

  // Order in which game queues supply batches in one epoch, given the number
  // of batches each queue provides.
  static std::vector<int> batch_schedule(std::span<const int> batches_per_game);

 private:
  std::vector<Sample> generate_selfplay(std::size_t game);

  TrainConfig cfg_;
  std::shared_ptr<neural::Network<float>> network_;
  SgdMomentum optimizer_;
  std::vector<ReplayQueue> queues_;
  int iteration_ = 0;
};

// Checkpoint path "<root>/ckpt/<run>/<iteration>.bin".
std::filesystem::path checkpoint_path(const std::filesystem::path& root, const std::string& run, int iteration);
// Highest-numbered checkpoint of a run, if any.
std::optional<std::filesystem::path> latest_checkpoint(const std::filesystem::path& root, const std::string& run);

struct TrainLoopOptions {
  std::filesystem::path output_root = ".";
  std::string run = "run";
  bool resume = true;
  std::function<void(const IterationMetrics&)> on_metrics;
};

// Runs (or resumes) training to cfg.iterations, writing a checkpoint after
// every iteration. Returns the final network.
std::shared_ptr<neural::Network<float>> train_loop(const neural::NetworkConfig& net_cfg, const TrainConfig& cfg,
                                                   const TrainLoopOptions& options);

}  // namespace alphavit
