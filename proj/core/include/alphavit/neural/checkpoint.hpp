#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphavit/neural/network.hpp"

namespace alphavit::neural {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

struct CheckpointInfo {
  int iteration = 0;
  std::vector<std::string> games;  // variant names the weights were trained on
  std::uint64_t seed = 0;
};

struct Checkpoint {
  std::shared_ptr<Network<float>> network;
  CheckpointInfo info;
  std::vector<float> velocity;  // optimizer state; empty when not saved
};

// File layout: a text header line, the byte length of a JSON manifest, the
// manifest itself (version, family, config, array names and shapes, info),
// then every array as raw little-endian float32 in manifest order, followed
// by the optimizer velocity when present. The write goes through a temporary
// file and a rename.
void save_checkpoint(const std::filesystem::path& path, const Network<float>& network, const CheckpointInfo& info,
                     const std::vector<float>* velocity = nullptr);

// Throws CheckpointError on missing, truncated or inconsistent files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string config_to_json(const NetworkConfig& cfg);
NetworkConfig config_from_json(const std::string& text);

}  // namespace alphavit::neural
