#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "alphavit/features.hpp"
#include "alphavit/neural/config.hpp"
#include "alphavit/neural/layers.hpp"

namespace alphavit::neural {

class UnsupportedBoard : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
struct NetworkOutput {
  T value = T(0);
  std::vector<T> policy;  // indexed by action_index()
};

// Layer ids for every family. Only the members of the configured family are
// populated.
struct Architecture {
  ParameterLayout layout;

  // Transformer families.
  Conv2d patch;
  int pos_embed = -1;
  int value_token = -1;
  int pass_token = -1;
  int game_tokens = -1;
  std::vector<EncoderLayer> encoder;
  ScalarHead value_head;
  ScalarHead policy_head;
  Linear bridge;
  int action_tokens = -1;
  std::vector<DecoderLayer> decoder;

  // ResNet baseline.
  Conv2d stem;
  std::vector<std::pair<Conv2d, Conv2d>> blocks;
  Linear value_fc1;
  Linear value_fc2;
  Linear policy_conv;
  Linear policy_fc;
};

std::shared_ptr<const Architecture> build_architecture(const NetworkConfig& cfg);

// Number of trainable scalars (the static game one-hots are excluded).
std::size_t parameter_count(const NetworkConfig& cfg);

// Intermediate values recorded by a forward pass and consumed by backward().
template <typename T>
struct Tape {
  GameId id;
  Matrix<T> image;
  Matrix<T> patch_cols;
  Resampler position_resampler;
  std::vector<EncoderLayer::Cache<T>> encoder;
  Matrix<T> encoded;
  ScalarHead::Cache<T> value_head;
  std::vector<int> policy_rows;
  Matrix<T> policy_in;
  ScalarHead::Cache<T> policy_head;
  Matrix<T> bridge_in;
  Resampler decoder_resampler;
  std::vector<DecoderLayer::Cache<T>> decoder;

  Matrix<T> stem_cols;
  Matrix<T> stem_pre;
  struct Block {
    Matrix<T> input;
    Matrix<T> cols1;
    Matrix<T> pre1;
    Matrix<T> cols2;
    Matrix<T> pre2;
  };
  std::vector<Block> blocks;
  Matrix<T> body;
  Matrix<T> value_pre;
  Matrix<T> value_act;
  Matrix<T> policy_pre;
  Matrix<T> policy_act;

  NetworkOutput<T> output;
};

// One policy-value network. The weights are plain values; forward passes are
// const and may run concurrently from several threads.
template <typename T>
class Network {
 public:
  explicit Network(const NetworkConfig& cfg, std::uint64_t seed = 0);

  const NetworkConfig& config() const { return config_; }
  const Architecture& architecture() const { return *arch_; }
  const ParameterLayout& layout() const { return arch_->layout; }
  ParameterBuffer<T>& params() { return params_; }
  const ParameterBuffer<T>& params() const { return params_; }

  // A zeroed buffer with this network's layout.
  ParameterBuffer<T> make_buffer() const { return ParameterBuffer<T>(&arch_->layout); }

  // Re-draws every trainable array from the default initializers.
  void initialize(std::uint64_t seed);

  // Throws std::invalid_argument (UnsupportedBoard for the ResNet baseline)
  // when this network cannot evaluate positions of `id`.
  void check_supported(const GameId& id) const;
  bool supports(const GameId& id) const;

  NetworkOutput<T> forward(const FeatureStack& features, const GameId& id) const;
  const NetworkOutput<T>& forward(const FeatureStack& features, const GameId& id, Tape<T>& tape) const;

  // Gradients w.r.t. the value and each policy probability.
  void backward(const Tape<T>& tape, T d_value, std::span<const T> d_policy, ParameterBuffer<T>& grads) const;
  // Gradients w.r.t. the pre-tanh value and the pre-sigmoid policy logits.
  void backward_logits(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                       ParameterBuffer<T>& grads) const;

  // Transformer pieces, exposed for inspection.
  Matrix<T> tokenize(const FeatureStack& features) const;
  Matrix<T> position_embedding(int height, int width) const;
  Matrix<T> encoder_input(const FeatureStack& features, const GameId& id) const;
  Matrix<T> decoder_input(const FeatureStack& features, const GameId& id) const;

  template <typename U>
  Network<U> convert() const {
    Network<U> out(config_);
    auto& dst = out.params().values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<U>(params_.values()[i]);
    return out;
  }

 private:
  const NetworkOutput<T>& forward_transformer(const FeatureStack& features, const GameId& id,
                                              Tape<T>& tape) const;
  const NetworkOutput<T>& forward_resnet(const FeatureStack& features, Tape<T>& tape) const;
  void backward_transformer(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                            ParameterBuffer<T>& grads) const;
  void backward_resnet(const Tape<T>& tape, T d_value_logit, std::span<const T> d_policy_logits,
                       ParameterBuffer<T>& grads) const;
  Matrix<T> image_of(const FeatureStack& features) const;

  NetworkConfig config_;
  std::shared_ptr<const Architecture> arch_;
  ParameterBuffer<T> params_;
};

extern template class Network<float>;
extern template class Network<double>;

}  // namespace alphavit::neural
