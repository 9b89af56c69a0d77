#include "alphavit/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "alphavit/neural/checkpoint.hpp"
#include "alphavit/rng.hpp"
#include "alphavit/uct.hpp"
#include "alphavit/agents.hpp"

namespace alphavit {
namespace {

constexpr int kBootstrapRound = 8;

// Shared move loop of both self-play flavours. `search` returns root visit
// counts per action index.
template <typename SearchFn>
std::vector<Sample> play_out(const GameSettings& settings, int history, Rng& rng, SearchFn&& search) {
  std::vector<Sample> samples;
  GameState state = GameState::initial(settings.id);
  const int actions = action_space_size(settings.id);
  int ply = 0;
  while (!is_terminal(state.outcome())) {
    const std::vector<int> visits = search(state);
    const std::vector<int> legal = legal_action_indices(state);
    Sample s;
    s.id = settings.id;
    s.features = encode_planes(state, {}, history);
    s.pi.assign(actions, 0.0f);
    double total = 0.0;
    for (int a : legal) total += visits[a];
    for (int a : legal) s.pi[a] = total > 0.0 ? static_cast<float>(visits[a] / total) : 1.0f / legal.size();
    samples.push_back(std::move(s));

    PlayPolicy policy;
    if (ply < settings.opening_moves) policy = {PlayMode::Softmax, settings.temperature};
    const int index = play_from_visits(visits, legal, policy, rng);
    state = apply_move(state, action_from_index(index, settings.id));
    ++ply;
  }
  const int winner = winner_color(state.outcome());
  for (Sample& s : samples) s.c_win = winner;
  return samples;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

ReplayQueue::ReplayQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("queue capacity must be positive");
}

void ReplayQueue::push(Sample sample) {
  if (samples_.size() == capacity_) samples_.pop_front();
  samples_.push_back(std::move(sample));
}

void ReplayQueue::push(std::vector<Sample> samples) {
  for (Sample& s : samples) push(std::move(s));
}

GameSettings default_settings(const GameId& id) {
  GameSettings s;
  s.id = id;
  const bool small = id.cells() < parse_variant(game_name(id.game)).cells();
  switch (id.game) {
    case Game::Connect4:
      s.search.simulations = 200;
      s.selfplay_games = 30;
      s.opening_moves = small ? 4 : 6;
      s.temperature = 100.0;
      break;
    case Game::Gomoku:
      s.search.simulations = small ? 200 : 400;
      s.selfplay_games = 10;
      s.opening_moves = small ? 6 : 8;
      s.temperature = small ? 20.0 : 40.0;
      break;
    case Game::Othello:
      s.search.simulations = small ? 200 : 400;
      s.selfplay_games = 10;
      s.opening_moves = small ? 4 : 6;
      s.temperature = small ? 40.0 : 80.0;
      break;
  }
  return s;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(iterations >= 1, "iterations must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(std::isfinite(learning_rate) && learning_rate >= 0.0, "learning_rate must be >= 0");
  require(std::isfinite(momentum) && momentum >= 0.0 && momentum < 1.0, "momentum must be in [0, 1)");
  require(std::isfinite(weight_decay) && weight_decay >= 0.0, "weight_decay must be >= 0");
  require(queue_capacity >= 1, "queue_capacity must be >= 1");
  require(bootstrap_simulations >= 1, "bootstrap_simulations must be >= 1");
  require(!games.empty(), "at least one game is required");
  require(threads >= 1, "threads must be >= 1");
  for (std::size_t i = 0; i < games.size(); ++i) {
    const GameSettings& g = games[i];
    require(g.selfplay_games >= 1, "selfplay_games must be >= 1");
    require(g.opening_moves >= 0, "opening_moves must be >= 0");
    require(g.temperature > 0.0, "temperature must be > 0");
    g.search.validate();
    for (std::size_t j = 0; j < i; ++j) require(!(games[j].id == g.id), "duplicate game " + variant_name(g.id));
  }
}

std::vector<Sample> self_play(const Evaluator& evaluator, const GameSettings& settings, std::uint64_t seed,
                              int history) {
  Rng rng(seed);
  return play_out(settings, history, rng, [&](const GameState& state) {
    return mcts_search(state, evaluator, settings.search, rng).visits;
  });
}

std::vector<Sample> uct_self_play(const GameSettings& settings, int simulations, std::uint64_t seed, int history) {
  Rng rng(seed);
  UctParams params;
  params.simulations = simulations;
  return play_out(settings, history, rng, [&](const GameState& state) { return uct_search(state, params, rng).visits; });
}

std::vector<Sample> augment(const std::vector<Sample>& samples) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    for (SymmetricSample& sym : symmetries(s.features, s.pi, s.id)) {
      out.push_back(Sample{std::move(sym.features), std::move(sym.policy), s.c_win, s.id});
    }
  }
  return out;
}

void bootstrap_queue(ReplayQueue& queue, const GameSettings& settings, const TrainConfig& cfg, int history) {
  const std::size_t target = std::min(cfg.min_fill, queue.capacity());
  for (int round = 0; queue.size() < target; ++round) {
    std::vector<std::vector<Sample>> games(kBootstrapRound);
    parallel_for(kBootstrapRound, cfg.threads, [&](int i) {
      const std::uint64_t seed =
          derive_seed(cfg.seed, {0xb007, static_cast<std::uint64_t>(settings.id.game),
                                 static_cast<std::uint64_t>(settings.id.cells()), static_cast<std::uint64_t>(round),
                                 static_cast<std::uint64_t>(i)});
      games[i] = augment(uct_self_play(settings, cfg.bootstrap_simulations, seed, history));
    });
    for (auto& g : games) queue.push(std::move(g));
  }
}

LossTerms sample_loss(double value, double c_win, std::span<const double> policy, std::span<const double> pi) {
  if (policy.size() != pi.size()) throw std::invalid_argument("policy and target lengths differ");
  LossTerms t;
  t.value_mse = (c_win - value) * (c_win - value);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] != 0.0) t.policy_ce -= pi[i] * std::log(std::max(policy[i], kProbabilityFloor));
  }
  if (!std::isfinite(t.total())) throw DivergenceError("non-finite loss");
  return t;
}

SgdMomentum::SgdMomentum(double learning_rate, double momentum, double weight_decay)
    : learning_rate_(learning_rate), momentum_(momentum), weight_decay_(weight_decay) {}

template <typename T>
void SgdMomentum::step(neural::Network<T>& network, const neural::ParameterBuffer<T>& grads) {
  auto& w = network.params().values();
  const auto& g = grads.values();
  if (velocity_.size() != w.size()) velocity_.assign(w.size(), 0.0);
  for (const neural::ParamSpec& spec : network.layout().specs()) {
    if (!spec.trainable) continue;
    for (std::size_t i = spec.offset; i < spec.offset + spec.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      if (!std::isfinite(gi)) throw DivergenceError("non-finite gradient in " + spec.name);
      velocity_[i] = momentum_ * velocity_[i] + gi + weight_decay_ * static_cast<double>(w[i]);
      w[i] = static_cast<T>(static_cast<double>(w[i]) - learning_rate_ * velocity_[i]);
    }
  }
}

template <typename T>
LossTerms batch_gradient(const neural::Network<T>& network, std::span<const Sample* const> batch,
                         neural::ParameterBuffer<T>& grads) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  grads.set_zero();
  const double scale = 1.0 / static_cast<double>(batch.size());
  LossTerms total;
  neural::Tape<T> tape;
  std::vector<double> p;
  std::vector<double> pi;
  std::vector<T> d_logits;
  for (const Sample* s : batch) {
    const neural::NetworkOutput<T>& out = network.forward(s->features, s->id, tape);
    p.assign(out.policy.begin(), out.policy.end());
    pi.assign(s->pi.begin(), s->pi.end());
    const LossTerms l = sample_loss(out.value, s->c_win, p, pi);
    total.value_mse += l.value_mse * scale;
    total.policy_ce += l.policy_ce * scale;

    const double v = out.value;
    const T d_value_logit = static_cast<T>(2.0 * (v - s->c_win) * (1.0 - v * v) * scale);
    d_logits.assign(p.size(), T(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (pi[i] != 0.0 && p[i] > kProbabilityFloor) d_logits[i] = static_cast<T>(-pi[i] * (1.0 - p[i]) * scale);
    }
    network.backward_logits(tape, d_value_logit, d_logits, grads);
  }
  return total;
}

template <typename T>
LossTerms train_step(neural::Network<T>& network, SgdMomentum& optimizer, std::span<const Sample* const> batch) {
  neural::ParameterBuffer<T> grads = network.make_buffer();
  const LossTerms loss = batch_gradient(network, batch, grads);
  optimizer.step(network, grads);
  return loss;
}

template void SgdMomentum::step(neural::Network<float>&, const neural::ParameterBuffer<float>&);
template void SgdMomentum::step(neural::Network<double>&, const neural::ParameterBuffer<double>&);
template LossTerms batch_gradient(const neural::Network<float>&, std::span<const Sample* const>,
                                  neural::ParameterBuffer<float>&);
template LossTerms batch_gradient(const neural::Network<double>&, std::span<const Sample* const>,
                                  neural::ParameterBuffer<double>&);
template LossTerms train_step(neural::Network<float>&, SgdMomentum&, std::span<const Sample* const>);
template LossTerms train_step(neural::Network<double>&, SgdMomentum&, std::span<const Sample* const>);

std::string format_metrics(const IterationMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "iter=%d game=%s loss=%.6f value_mse=%.6f policy_ce=%.6f queue=%zu", m.iteration,
                variant_name(m.id).c_str(), m.loss.total(), m.loss.value_mse, m.loss.policy_ce, m.queue);
  return buf;
}

Trainer::Trainer(TrainConfig cfg, std::shared_ptr<neural::Network<float>> network, int completed_iterations)
    : cfg_(std::move(cfg)),
      network_(std::move(network)),
      optimizer_(cfg_.learning_rate, cfg_.momentum, cfg_.weight_decay),
      iteration_(completed_iterations) {
  cfg_.validate();
  if (!network_) throw std::invalid_argument("null network");
  for (const GameSettings& g : cfg_.games) {
    network_->check_supported(g.id);
    queues_.emplace_back(cfg_.queue_capacity);
  }
}

void Trainer::bootstrap() {
  for (std::size_t g = 0; g < queues_.size(); ++g) {
    if (queues_[g].empty()) bootstrap_queue(queues_[g], cfg_.games[g], cfg_, network_->config().history);
  }
}

std::vector<Sample> Trainer::generate_selfplay(std::size_t game) {
  const GameSettings& settings = cfg_.games[game];
  const NetworkEvaluator evaluator(network_);
  std::vector<std::vector<Sample>> results(settings.selfplay_games);
  parallel_for(settings.selfplay_games, cfg_.threads, [&](int i) {
    const std::uint64_t seed = derive_seed(cfg_.seed, {static_cast<std::uint64_t>(iteration_ + 1), game,
                                                       static_cast<std::uint64_t>(i)});
    results[i] = augment(self_play(evaluator, settings, seed, network_->config().history));
  });
  std::vector<Sample> all;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(all));
  return all;
}

std::vector<int> Trainer::batch_schedule(std::span<const int> batches_per_game) {
  std::vector<int> order;
  const int rounds = batches_per_game.empty() ? 0 : *std::max_element(batches_per_game.begin(), batches_per_game.end());
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t g = 0; g < batches_per_game.size(); ++g) {
      if (r < batches_per_game[g]) order.push_back(static_cast<int>(g));
    }
  }
  return order;
}

std::vector<IterationMetrics> Trainer::run_iteration() {
  bootstrap();
  for (std::size_t g = 0; g < queues_.size(); ++g) queues_[g].push(generate_selfplay(g));
  const int iteration = iteration_ + 1;

  const std::size_t n_games = queues_.size();
  std::vector<IterationMetrics> metrics(n_games);
  for (std::size_t g = 0; g < n_games; ++g) {
    metrics[g].iteration = iteration;
    metrics[g].id = cfg_.games[g].id;
    metrics[g].queue = queues_[g].size();
  }

  Rng rng = make_rng(cfg_.seed, {static_cast<std::uint64_t>(iteration), 0x1ea7});
  const std::size_t batch = static_cast<std::size_t>(cfg_.batch_size);
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    std::vector<std::vector<std::size_t>> order(n_games);
    std::vector<int> batches(n_games);
    for (std::size_t g = 0; g < n_games; ++g) {
      order[g].resize(queues_[g].size());
      for (std::size_t i = 0; i < order[g].size(); ++i) order[g][i] = i;
      std::shuffle(order[g].begin(), order[g].end(), rng);
      batches[g] = static_cast<int>(std::max<std::size_t>(1, queues_[g].size() / batch));
    }
    std::vector<int> used(n_games, 0);
    std::vector<const Sample*> members;
    for (int g : batch_schedule(batches)) {
      const std::size_t begin = used[g] * batch;
      const std::size_t end = std::min(begin + batch, order[g].size());
      members.clear();
      for (std::size_t i = begin; i < end; ++i) members.push_back(&queues_[g][order[g][i]]);
      const LossTerms l = train_step(*network_, optimizer_, std::span<const Sample* const>(members));
      metrics[g].loss.value_mse += l.value_mse;
      metrics[g].loss.policy_ce += l.policy_ce;
      ++metrics[g].batches;
      ++used[g];
    }
  }
  for (auto& m : metrics) {
    if (m.batches > 0) {
      m.loss.value_mse /= m.batches;
      m.loss.policy_ce /= m.batches;
    }
  }
  iteration_ = iteration;
  return metrics;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& root, const std::string& run, int iteration) {
  return root / "ckpt" / run / (std::to_string(iteration) + ".bin");
}

std::optional<std::filesystem::path> latest_checkpoint(const std::filesystem::path& root, const std::string& run) {
  const std::filesystem::path dir = root / "ckpt" / run;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return std::nullopt;
  int best = -1;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".bin") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    best = std::max(best, std::stoi(stem));
  }
  if (best < 0) return std::nullopt;
  return checkpoint_path(root, run, best);
}

std::shared_ptr<neural::Network<float>> train_loop(const neural::NetworkConfig& net_cfg, const TrainConfig& cfg,
                                                   const TrainLoopOptions& options) {
  cfg.validate();
  std::shared_ptr<neural::Network<float>> network;
  int start = 0;
  std::vector<double> velocity;
  if (options.resume) {
    if (auto path = latest_checkpoint(options.output_root, options.run)) {
      neural::Checkpoint ckpt = neural::load_checkpoint(*path);
      if (!(ckpt.network->config() == net_cfg)) {
        throw std::invalid_argument("existing checkpoint " + path->string() + " has a different network config");
      }
      network = std::move(ckpt.network);
      start = ckpt.info.iteration;
      velocity.assign(ckpt.velocity.begin(), ckpt.velocity.end());
    }
  }
  if (!network) network = std::make_shared<neural::Network<float>>(net_cfg, derive_seed(cfg.seed, {0x1417}));

  Trainer trainer(cfg, network, start);
  if (!velocity.empty()) trainer.optimizer().velocity() = std::move(velocity);
  neural::CheckpointInfo info;
  for (const GameSettings& g : cfg.games) info.games.push_back(variant_name(g.id));
  info.seed = cfg.seed;
  while (trainer.completed_iterations() < cfg.iterations) {
    const std::vector<IterationMetrics> metrics = trainer.run_iteration();
    if (options.on_metrics) {
      for (const auto& m : metrics) options.on_metrics(m);
    }
    info.iteration = trainer.completed_iterations();
    const auto& v = trainer.optimizer().velocity();
    const std::vector<float> vel(v.begin(), v.end());
    neural::save_checkpoint(checkpoint_path(options.output_root, options.run, info.iteration), *network, info,
                            vel.size() == network->layout().total_size() ? &vel : nullptr);
  }
  return network;
}

}  // namespace alphavit
