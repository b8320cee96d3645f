#include "glp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "glp/errors.hpp"
#include "glp/rng.hpp"

namespace glp {

namespace {

constexpr char kPayloadMagic[4] = {'G', 'L', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;

std::string payload_path_for(const std::string& manifest_path) {
  std::filesystem::path p(manifest_path);
  p.replace_extension(".bin");
  return p.string();
}

void append_f64_le(std::string& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(data), n * sizeof(double));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, &data[i], 8);
      for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
}

void read_f64_le(const char* in, double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(data, in, n * sizeof(double));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[8 * i + b])) << (8 * b);
      std::memcpy(&data[i], &bits, 8);
    }
  }
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"vocab", c.vocab},
          {"dim", c.dim},
          {"heads", c.heads},
          {"enc_layers", c.enc_layers},
          {"dec_layers", c.dec_layers},
          {"mol_dim", c.mol_dim},
          {"num_kernels", c.num_kernels},
          {"max_len", c.max_len},
          {"mlp_mult", c.mlp_mult},
          {"width_floor", c.width_floor}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.vocab = j.at("vocab").get<int>();
  c.dim = j.at("dim").get<int>();
  c.heads = j.at("heads").get<int>();
  c.enc_layers = j.at("enc_layers").get<int>();
  c.dec_layers = j.at("dec_layers").get<int>();
  c.mol_dim = j.at("mol_dim").get<int>();
  c.num_kernels = j.at("num_kernels").get<int>();
  c.max_len = j.at("max_len").get<int>();
  c.mlp_mult = j.at("mlp_mult").get<int>();
  c.width_floor = j.at("width_floor").get<double>();
  return c;
}

}  // namespace

void save_checkpoint(const std::string& manifest_path, const ParamStore& params,
                     const ModelConfig& cfg, std::uint64_t seed) {
  std::string payload;
  payload.append(kPayloadMagic, 4);
  std::uint32_t version = kVersion;
  payload.append(reinterpret_cast<const char*>(&version), 4);

  nlohmann::json tensors = nlohmann::json::array();
  for (const std::string& name : params.names()) {
    const Tensor& t = params.get(name);
    std::size_t offset = payload.size();
    std::string bytes;
    append_f64_le(bytes, t.data.data(), t.size());
    payload += bytes;
    tensors.push_back({{"name", name},
                       {"rows", t.rows},
                       {"cols", t.cols},
                       {"dtype", "f64"},
                       {"offset", offset},
                       {"count", t.size()},
                       {"fnv1a", fnv1a64_bytes(bytes.data(), bytes.size())}});
  }

  nlohmann::json manifest = {
      {"format", "glprotein-checkpoint"},
      {"version", kVersion},
      {"seed", seed},
      {"config", config_to_json(cfg)},
      {"payload_file", std::filesystem::path(payload_path_for(manifest_path)).filename().string()},
      {"payload_fnv1a", fnv1a64_bytes(payload.data(), payload.size())},
      {"tensors", tensors}};

  std::ofstream pf(payload_path_for(manifest_path), std::ios::binary);
  if (!pf) throw DataError("cannot write '" + payload_path_for(manifest_path) + "'");
  pf.write(payload.data(), static_cast<std::streamsize>(payload.size()));

  std::ofstream mf(manifest_path, std::ios::binary);
  if (!mf) throw DataError("cannot write '" + manifest_path + "'");
  mf << manifest.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& manifest_path) {
  std::ifstream mf(manifest_path, std::ios::binary);
  if (!mf) throw DataError("cannot open '" + manifest_path + "'");
  nlohmann::json manifest;
  try {
    mf >> manifest;
  } catch (const std::exception& e) {
    throw DataError("checkpoint manifest parse error: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "glprotein-checkpoint")
    throw DataError("'" + manifest_path + "' is not a checkpoint manifest");
  if (manifest.value("version", 0u) != kVersion)
    throw DataError("unsupported checkpoint version");

  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::string payload_file = (base / manifest.at("payload_file").get<std::string>()).string();
  std::ifstream pf(payload_file, std::ios::binary);
  if (!pf) throw DataError("cannot open payload '" + payload_file + "'");
  std::string payload((std::istreambuf_iterator<char>(pf)), std::istreambuf_iterator<char>());

  if (payload.size() < 8 || std::memcmp(payload.data(), kPayloadMagic, 4) != 0)
    throw DataError("payload magic mismatch in '" + payload_file + "'");
  if (manifest.at("payload_fnv1a").get<std::uint64_t>() !=
      fnv1a64_bytes(payload.data(), payload.size()))
    throw DataError("payload checksum mismatch in '" + payload_file + "'");

  Checkpoint ck;
  ck.seed = manifest.at("seed").get<std::uint64_t>();
  ck.config = config_from_json(manifest.at("config"));

  for (const auto& tj : manifest.at("tensors")) {
    std::string name = tj.at("name").get<std::string>();
    int rows = tj.at("rows").get<int>();
    int cols = tj.at("cols").get<int>();
    std::size_t offset = tj.at("offset").get<std::size_t>();
    std::size_t count = tj.at("count").get<std::size_t>();
    if (tj.at("dtype").get<std::string>() != "f64")
      throw DataError("tensor '" + name + "': unsupported dtype");
    if (count != static_cast<std::size_t>(rows) * cols)
      throw DataError("tensor '" + name + "': count/shape mismatch");
    if (offset + count * 8 > payload.size())
      throw DataError("tensor '" + name + "': payload out of range");
    if (tj.at("fnv1a").get<std::uint64_t>() !=
        fnv1a64_bytes(payload.data() + offset, count * 8))
      throw DataError("tensor '" + name + "': checksum mismatch");
    Tensor t(rows, cols);
    read_f64_le(payload.data() + offset, t.data.data(), count);
    ck.params.add(name, std::move(t));
  }
  return ck;
}

}  // namespace glp
