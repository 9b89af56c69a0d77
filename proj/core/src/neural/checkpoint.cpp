#include "alphavit/neural/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace alphavit::neural {
namespace {

using nlohmann::json;

constexpr const char* kMagic = "ALPHAVIT-CHECKPOINT";

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
}

void write_floats(std::ostream& out, const float* data, std::size_t n) {
  std::vector<std::uint32_t> words(n);
  for (std::size_t i = 0; i < n; ++i) words[i] = to_little(std::bit_cast<std::uint32_t>(data[i]));
  out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(n * 4));
}

void read_floats(std::istream& in, float* data, std::size_t n) {
  std::vector<std::uint32_t> words(n);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(n * 4));
  if (static_cast<std::size_t>(in.gcount()) != n * 4) throw CheckpointError("checkpoint truncated");
  for (std::size_t i = 0; i < n; ++i) data[i] = std::bit_cast<float>(to_little(words[i]));
}

json config_json(const NetworkConfig& c) {
  return json{{"family", std::string(family_name(c.family))},
              {"history", c.history},
              {"patch_size", c.patch_size},
              {"embed_dim", c.embed_dim},
              {"ffn_dim", c.ffn_dim},
              {"heads", c.heads},
              {"encoder_layers", c.encoder_layers},
              {"decoder_layers", c.decoder_layers},
              {"head_hidden", c.head_hidden},
              {"games", c.games},
              {"pos_height", c.pos_height},
              {"pos_width", c.pos_width},
              {"action_tokens", c.action_tokens},
              {"res_blocks", c.res_blocks},
              {"filters", c.filters},
              {"kernel", c.kernel},
              {"value_hidden", c.value_hidden},
              {"board", variant_name(c.board)}};
}

NetworkConfig config_of(const json& j) {
  NetworkConfig c;
  c.family = parse_family(j.at("family").get<std::string>());
  c.history = j.at("history");
  c.patch_size = j.at("patch_size");
  c.embed_dim = j.at("embed_dim");
  c.ffn_dim = j.at("ffn_dim");
  c.heads = j.at("heads");
  c.encoder_layers = j.at("encoder_layers");
  c.decoder_layers = j.at("decoder_layers");
  c.head_hidden = j.at("head_hidden");
  c.games = j.at("games");
  c.pos_height = j.at("pos_height");
  c.pos_width = j.at("pos_width");
  c.action_tokens = j.at("action_tokens");
  c.res_blocks = j.at("res_blocks");
  c.filters = j.at("filters");
  c.kernel = j.at("kernel");
  c.value_hidden = j.at("value_hidden");
  c.board = parse_variant(j.at("board").get<std::string>());
  c.validate();
  return c;
}

}  // namespace

std::string config_to_json(const NetworkConfig& cfg) { return config_json(cfg).dump(); }

NetworkConfig config_from_json(const std::string& text) {
  try {
    return config_of(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad network config: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Network<float>& network, const CheckpointInfo& info,
                     const std::vector<float>* velocity) {
  const ParameterLayout& layout = network.layout();
  if (velocity != nullptr && velocity->size() != layout.total_size()) {
    throw std::invalid_argument("velocity size does not match the network");
  }
  json arrays = json::array();
  for (const auto& s : layout.specs()) arrays.push_back({{"name", s.name}, {"shape", s.shape}, {"trainable", s.trainable}});
  json manifest{{"version", kCheckpointVersion},
                {"family", std::string(family_name(network.config().family))},
                {"config", config_json(network.config())},
                {"arrays", arrays},
                {"iteration", info.iteration},
                {"games", info.games},
                {"seed", info.seed},
                {"velocity", velocity != nullptr}};
  const std::string text = manifest.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out << kMagic << ' ' << kCheckpointVersion << '\n' << text.size() << '\n' << text;
    write_floats(out, network.params().values().data(), layout.total_size());
    if (velocity != nullptr) write_floats(out, velocity->data(), velocity->size());
    if (!out) throw CheckpointError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::string magic;
  int version = 0;
  std::size_t length = 0;
  in >> magic >> version >> length;
  if (!in || magic != kMagic) throw CheckpointError("not a checkpoint: " + path.string());
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  if (in.get() != '\n' || length > (1u << 26)) throw CheckpointError("corrupt checkpoint header");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::size_t>(in.gcount()) != length) throw CheckpointError("checkpoint truncated");

  Checkpoint ckpt;
  bool has_velocity = false;
  try {
    const json manifest = json::parse(text);
    const NetworkConfig cfg = config_of(manifest.at("config"));
    ckpt.network = std::make_shared<Network<float>>(cfg);
    const auto& specs = ckpt.network->layout().specs();
    const json& arrays = manifest.at("arrays");
    if (arrays.size() != specs.size()) throw CheckpointError("array list does not match the configuration");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (arrays[i].at("name").get<std::string>() != specs[i].name ||
          arrays[i].at("shape").get<std::vector<int>>() != specs[i].shape) {
        throw CheckpointError("array " + specs[i].name + " does not match the configuration");
      }
    }
    ckpt.info.iteration = manifest.at("iteration");
    ckpt.info.games = manifest.at("games").get<std::vector<std::string>>();
    ckpt.info.seed = manifest.value("seed", std::uint64_t{0});
    has_velocity = manifest.value("velocity", false);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("invalid checkpoint configuration: ") + e.what());
  }
  auto& values = ckpt.network->params().values();
  read_floats(in, values.data(), values.size());
  if (has_velocity) {
    ckpt.velocity.resize(values.size());
    read_floats(in, ckpt.velocity.data(), values.size());
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CheckpointError("trailing bytes in checkpoint");
  return ckpt;
}

}  // namespace alphavit::neural
