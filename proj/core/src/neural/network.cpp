#include "alphavit/neural/network.hpp"

#include <cmath>
#include <random>
#include <string>

namespace alphavit::neural {
namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

int policy_length(const GameId& id) { return action_space_size(id); }

}  // namespace

std::shared_ptr<const Architecture> build_architecture(const NetworkConfig& cfg) {
  cfg.validate();
  auto arch = std::make_shared<Architecture>();
  ParameterLayout& l = arch->layout;
  const int planes = cfg.in_planes();
  if (cfg.is_transformer()) {
    const int e = cfg.embed_dim;
    arch->patch = Conv2d::create(l, "patch", planes, e, cfg.patch_size);
    arch->pos_embed = l.add("pos_embed", {cfg.pos_height * cfg.pos_width, e});
    arch->value_token = l.add("value_token", {e});
    if (cfg.family == Family::AlphaViT) arch->pass_token = l.add("pass_token", {e});
    arch->game_tokens = l.add("game_tokens", {cfg.games, e}, false);
    for (int i = 0; i < cfg.encoder_layers; ++i) {
      arch->encoder.push_back(
          EncoderLayer::create(l, "encoder." + std::to_string(i), e, cfg.heads, cfg.ffn_dim));
    }
    arch->value_head = ScalarHead::create(l, "value_head", e, cfg.head_hidden);
    if (cfg.family == Family::AlphaViD) arch->bridge = Linear::create(l, "bridge", e, e);
    if (cfg.family == Family::AlphaVDA) arch->action_tokens = l.add("action_tokens", {cfg.action_tokens, e});
    if (cfg.family != Family::AlphaViT) {
      for (int i = 0; i < cfg.decoder_layers; ++i) {
        arch->decoder.push_back(
            DecoderLayer::create(l, "decoder." + std::to_string(i), e, cfg.heads, cfg.ffn_dim));
      }
    }
    arch->policy_head = ScalarHead::create(l, "policy_head", e, cfg.head_hidden);
  } else {
    const int f = cfg.filters;
    const int cells = cfg.board.cells();
    arch->stem = Conv2d::create(l, "stem", planes, f, cfg.kernel);
    for (int i = 0; i < cfg.res_blocks; ++i) {
      const std::string name = "block." + std::to_string(i);
      arch->blocks.emplace_back(Conv2d::create(l, name + ".conv1", f, f, cfg.kernel),
                                Conv2d::create(l, name + ".conv2", f, f, cfg.kernel));
    }
    arch->value_fc1 = Linear::create(l, "value_head.fc1", f * cells, cfg.value_hidden);
    arch->value_fc2 = Linear::create(l, "value_head.fc2", cfg.value_hidden, 1);
    arch->policy_conv = Linear::create(l, "policy_head.conv", f, 2);
    arch->policy_fc = Linear::create(l, "policy_head.fc", 2 * cells, action_space_size(cfg.board));
  }
  return arch;
}

std::size_t parameter_count(const NetworkConfig& cfg) { return build_architecture(cfg)->layout.trainable_size(); }

template <typename T>
Network<T>::Network(const NetworkConfig& cfg, std::uint64_t seed)
    : config_(cfg), arch_(build_architecture(cfg)), params_(&arch_->layout) {
  initialize(seed);
}

template <typename T>
void Network<T>::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> embed(0.0, 0.02);
  for (int id = 0; id < static_cast<int>(layout().specs().size()); ++id) {
    const ParamSpec& s = layout().spec(id);
    T* data = params_.data(id);
    const std::size_t n = s.size();
    if (id == arch_->game_tokens) {
      auto m = params_.matrix(id);
      m.setZero();
      for (int g = 0; g < s.rows(); ++g) m(g, g) = T(1);
    } else if (ends_with(s.name, ".weight")) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(s.cols()));
      std::uniform_real_distribution<double> u(-bound, bound);
      for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<T>(u(rng));
    } else if (ends_with(s.name, ".bias") || ends_with(s.name, ".beta")) {
      std::fill(data, data + n, T(0));
    } else if (ends_with(s.name, ".gamma")) {
      std::fill(data, data + n, T(1));
    } else {
      for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<T>(embed(rng));
    }
  }
}

template <typename T>
void Network<T>::check_supported(const GameId& id) const {
  if (config_.is_transformer()) {
    if (game_slot(id) >= config_.games) throw std::invalid_argument("unknown game id " + variant_name(id));
    return;
  }
  if (!(id == config_.board)) {
    throw UnsupportedBoard("network built for " + variant_name(config_.board) + " cannot evaluate " +
                           variant_name(id));
  }
}

template <typename T>
bool Network<T>::supports(const GameId& id) const {
  try {
    check_supported(id);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

template <typename T>
Matrix<T> Network<T>::image_of(const FeatureStack& features) const {
  if (features.height < 1 || features.width < 1) throw std::invalid_argument("board smaller than 1x1");
  if (features.planes != config_.in_planes()) {
    throw std::invalid_argument("feature planes " + std::to_string(features.planes) + " != " +
                                std::to_string(config_.in_planes()));
  }
  const int cells = features.height * features.width;
  Matrix<T> image(cells, features.planes);
  for (int p = 0; p < features.planes; ++p) {
    for (int i = 0; i < cells; ++i) image(i, p) = static_cast<T>(features.data[static_cast<std::size_t>(p) * cells + i]);
  }
  return image;
}

template <typename T>
Matrix<T> Network<T>::tokenize(const FeatureStack& features) const {
  Matrix<T> cols;
  return arch_->patch.forward(params_, image_of(features), features.height, features.width, cols);
}

template <typename T>
Matrix<T> Network<T>::position_embedding(int height, int width) const {
  const auto base = params_.matrix(arch_->pos_embed);
  if (height == config_.pos_height && width == config_.pos_width) return base;
  return Resampler::bilinear(config_.pos_height, config_.pos_width, height, width).apply(base);
}

template <typename T>
Matrix<T> Network<T>::encoder_input(const FeatureStack& features, const GameId& id) const {
  check_supported(id);
  const int cells = id.cells();
  const bool pass = config_.family == Family::AlphaViT && id.game == Game::Othello;
  Matrix<T> seq(2 + cells + (pass ? 1 : 0), config_.embed_dim);
  seq.row(0) = params_.row(arch_->value_token);
  seq.row(1) = params_.matrix(arch_->game_tokens).row(game_slot(id));
  seq.middleRows(2, cells) = tokenize(features) + position_embedding(id.height, id.width);
  if (pass) seq.row(2 + cells) = params_.row(arch_->pass_token);
  return seq;
}

template <typename T>
Matrix<T> Network<T>::decoder_input(const FeatureStack& features, const GameId& id) const {
  if (config_.family == Family::AlphaVDA) {
    return Resampler::linear(config_.action_tokens, policy_length(id)).apply(params_.matrix(arch_->action_tokens));
  }
  if (config_.family != Family::AlphaViD) throw std::logic_error("network has no decoder");
  Tape<T> tape;
  forward(features, id, tape);
  const Matrix<T> bridged = arch_->bridge.forward(params_, tape.bridge_in);
  return tape.decoder_resampler.apply(bridged);
}

template <typename T>
NetworkOutput<T> Network<T>::forward(const FeatureStack& features, const GameId& id) const {
  Tape<T> tape;
  return forward(features, id, tape);
}

template <typename T>
const NetworkOutput<T>& Network<T>::forward(const FeatureStack& features, const GameId& id, Tape<T>& tape) const {
  check_supported(id);
  if (features.height != id.height || features.width != id.width) {
    throw std::invalid_argument("feature planes do not match the board size");
  }
  tape.id = id;
  return config_.is_transformer() ? forward_transformer(features, id, tape) : forward_resnet(features, tape);
}

template <typename T>
const NetworkOutput<T>& Network<T>::forward_transformer(const FeatureStack& features, const GameId& id,
                                                       Tape<T>& tape) const {
  const Architecture& a = *arch_;
  const int cells = id.cells();
  const int n_actions = policy_length(id);
  const bool vit = config_.family == Family::AlphaViT;
  const bool pass = vit && id.game == Game::Othello;

  tape.image = image_of(features);
  Matrix<T> seq(2 + cells + (pass ? 1 : 0), config_.embed_dim);
  seq.row(0) = params_.row(a.value_token);
  seq.row(1) = params_.matrix(a.game_tokens).row(game_slot(id));
  tape.position_resampler = Resampler::bilinear(config_.pos_height, config_.pos_width, id.height, id.width);
  seq.middleRows(2, cells) = a.patch.forward(params_, tape.image, id.height, id.width, tape.patch_cols) +
                             tape.position_resampler.apply(params_.matrix(a.pos_embed));
  if (pass) seq.row(2 + cells) = params_.row(a.pass_token);

  tape.encoder.resize(a.encoder.size());
  for (std::size_t i = 0; i < a.encoder.size(); ++i) seq = a.encoder[i].forward(params_, seq, tape.encoder[i]);
  tape.encoded = std::move(seq);

  NetworkOutput<T>& out = tape.output;
  const Matrix<T> value_row = tape.encoded.topRows(1);
  out.value = std::tanh(a.value_head.forward(params_, value_row, tape.value_head)(0));

  if (vit) {
    tape.policy_rows.clear();
    const int placements = id.game == Game::Connect4 ? id.width : cells;
    for (int i = 0; i < placements; ++i) tape.policy_rows.push_back(2 + i);
    if (pass) tape.policy_rows.push_back(2 + cells);
    tape.policy_in.resize(static_cast<int>(tape.policy_rows.size()), config_.embed_dim);
    for (int i = 0; i < tape.policy_in.rows(); ++i) tape.policy_in.row(i) = tape.encoded.row(tape.policy_rows[i]);
  } else {
    Matrix<T> dec;
    if (config_.family == Family::AlphaViD) {
      tape.bridge_in = tape.encoded.middleRows(2, cells);
      tape.decoder_resampler = Resampler::linear(cells, n_actions);
      dec = tape.decoder_resampler.apply(a.bridge.forward(params_, tape.bridge_in));
    } else {
      tape.decoder_resampler = Resampler::linear(config_.action_tokens, n_actions);
      dec = tape.decoder_resampler.apply(params_.matrix(a.action_tokens));
    }
    tape.decoder.resize(a.decoder.size());
    for (std::size_t i = 0; i < a.decoder.size(); ++i) {
      dec = a.decoder[i].forward(params_, dec, tape.encoded, tape.decoder[i]);
    }
    tape.policy_in = std::move(dec);
  }
  const ColVector<T> logits = a.policy_head.forward(params_, tape.policy_in, tape.policy_head);
  out.policy.resize(n_actions);
  for (int i = 0; i < n_actions; ++i) out.policy[i] = sigmoid(logits(i));
  return out;
}

template <typename T>
const NetworkOutput<T>& Network<T>::forward_resnet(const FeatureStack& features, Tape<T>& tape) const {
  const Architecture& a = *arch_;
  const int h = config_.board.height;
  const int w = config_.board.width;
  tape.image = image_of(features);
  tape.stem_pre = a.stem.forward(params_, tape.image, h, w, tape.stem_cols);
  Matrix<T> x = relu(tape.stem_pre);
  tape.blocks.resize(a.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    auto& b = tape.blocks[i];
    b.input = x;
    b.pre1 = a.blocks[i].first.forward(params_, x, h, w, b.cols1);
    b.pre2 = a.blocks[i].second.forward(params_, relu(b.pre1), h, w, b.cols2) + x;
    x = relu(b.pre2);
  }
  tape.body = std::move(x);

  NetworkOutput<T>& out = tape.output;
  const Matrix<T> flat = Eigen::Map<const Matrix<T>>(tape.body.data(), 1, tape.body.size());
  tape.value_pre = a.value_fc1.forward(params_, flat);
  tape.value_act = relu(tape.value_pre);
  out.value = std::tanh(a.value_fc2.forward(params_, tape.value_act)(0, 0));

  tape.policy_pre = a.policy_conv.forward(params_, tape.body);
  tape.policy_act = relu(tape.policy_pre);
  const Matrix<T> pflat = Eigen::Map<const Matrix<T>>(tape.policy_act.data(), 1, tape.policy_act.size());
  const Matrix<T> logits = a.policy_fc.forward(params_, pflat);
  out.policy.resize(logits.cols());
  for (int i = 0; i < logits.cols(); ++i) out.policy[i] = sigmoid(logits(0, i));
  return out;
}

template <typename T>
void Network<T>::backward(const Tape<T>& tape, T d_value, std::span<const T> d_policy,
                          ParameterBuffer<T>& grads) const {
  const NetworkOutput<T>& out = tape.output;
  if (d_policy.size() != out.policy.size()) throw std::invalid_argument("policy gradient length mismatch");
  std::vector<T> d_logits(d_policy.size());
  for (std::size_t i = 0; i < d_policy.size(); ++i) {
    d_logits[i] = d_policy[i] * out.policy[i] * (T(1) - out.policy[i]);
  }
  backward_logits(tape, d_value * (T(1) - out.value * out.value), d_logits, grads);
}

template <typename T>
void Network<T>::backward_logits(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                                 ParameterBuffer<T>& grads) const {
  if (d_policy_logits.size() != tape.output.policy.size()) {
    throw std::invalid_argument("policy gradient length mismatch");
  }
  if (!std::isfinite(static_cast<double>(d_value_logit))) throw std::domain_error("non-finite value gradient");
  for (T g : d_policy_logits) {
    if (!std::isfinite(static_cast<double>(g))) throw std::domain_error("non-finite policy gradient");
  }
  if (config_.is_transformer()) {
    backward_transformer(tape, d_value_logit, d_policy_logits, grads);
  } else {
    backward_resnet(tape, d_value_logit, d_policy_logits, grads);
  }
}

template <typename T>
void Network<T>::backward_transformer(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                                      ParameterBuffer<T>& grads) const {
  const Architecture& a = *arch_;
  const GameId& id = tape.id;
  const int cells = id.cells();

  Matrix<T> dz = Matrix<T>::Zero(tape.encoded.rows(), tape.encoded.cols());
  ColVector<T> dv(1);
  dv(0) = d_value_logit;
  dz.topRows(1) += a.value_head.backward(params_, tape.value_head, dv, grads);

  const ColVector<T> dlog = Eigen::Map<const ColVector<T>>(d_policy_logits.data(), d_policy_logits.size());
  const Matrix<T> dpolicy_in = a.policy_head.backward(params_, tape.policy_head, dlog, grads);
  if (config_.family == Family::AlphaViT) {
    for (int i = 0; i < dpolicy_in.rows(); ++i) dz.row(tape.policy_rows[i]) += dpolicy_in.row(i);
  } else {
    Matrix<T> ddec = dpolicy_in;
    for (std::size_t i = a.decoder.size(); i-- > 0;) ddec = a.decoder[i].backward(params_, tape.decoder[i], ddec, grads, dz);
    if (config_.family == Family::AlphaViD) {
      Matrix<T> dbridged = Matrix<T>::Zero(cells, config_.embed_dim);
      tape.decoder_resampler.backward(ddec, dbridged);
      dz.middleRows(2, cells) += a.bridge.backward(params_, tape.bridge_in, dbridged, grads);
    } else {
      tape.decoder_resampler.backward(ddec, grads.matrix(a.action_tokens));
    }
  }

  for (std::size_t i = a.encoder.size(); i-- > 0;) dz = a.encoder[i].backward(params_, tape.encoder[i], dz, grads);

  grads.row(a.value_token) += dz.row(0);
  if (config_.family == Family::AlphaViT && id.game == Game::Othello) grads.row(a.pass_token) += dz.row(2 + cells);
  const Matrix<T> dpatch = dz.middleRows(2, cells);
  tape.position_resampler.backward(dpatch, grads.matrix(a.pos_embed));
  a.patch.accumulate(tape.patch_cols, dpatch, grads);
}

template <typename T>
void Network<T>::backward_resnet(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                                 ParameterBuffer<T>& grads) const {
  const Architecture& a = *arch_;
  const int h = config_.board.height;
  const int w = config_.board.width;
  const int f = config_.filters;

  const Matrix<T> pflat = Eigen::Map<const Matrix<T>>(tape.policy_act.data(), 1, tape.policy_act.size());
  const Matrix<T> dlog = Eigen::Map<const Matrix<T>>(d_policy_logits.data(), 1, d_policy_logits.size());
  const Matrix<T> dpflat = a.policy_fc.backward(params_, pflat, dlog, grads);
  const Matrix<T> dpact = Eigen::Map<const Matrix<T>>(dpflat.data(), h * w, 2);
  Matrix<T> dbody = a.policy_conv.backward(params_, tape.body, relu_backward(tape.policy_pre, dpact), grads);

  Matrix<T> dv(1, 1);
  dv(0, 0) = d_value_logit;
  const Matrix<T> dvact = a.value_fc2.backward(params_, tape.value_act, dv, grads);
  const Matrix<T> flat = Eigen::Map<const Matrix<T>>(tape.body.data(), 1, tape.body.size());
  const Matrix<T> dflat = a.value_fc1.backward(params_, flat, relu_backward(tape.value_pre, dvact), grads);
  dbody += Eigen::Map<const Matrix<T>>(dflat.data(), h * w, f);

  Matrix<T> dx = std::move(dbody);
  for (std::size_t i = a.blocks.size(); i-- > 0;) {
    const auto& b = tape.blocks[i];
    const Matrix<T> dpre2 = relu_backward(b.pre2, dx);
    const Matrix<T> dr1 = a.blocks[i].second.backward(params_, b.cols2, dpre2, h, w, grads);
    dx = dpre2 + a.blocks[i].first.backward(params_, b.cols1, relu_backward(b.pre1, dr1), h, w, grads);
  }
  a.stem.accumulate(tape.stem_cols, relu_backward(tape.stem_pre, dx), grads);
}

template class Network<float>;
template class Network<double>;

}  // namespace alphavit::neural
