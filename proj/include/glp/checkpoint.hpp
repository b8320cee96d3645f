#pragma once

#include <cstdint>
#include <string>

#include "glp/model.hpp"

namespace glp {

// Checkpoint = JSON manifest (shapes, names, offsets, per-tensor checksums,
// config, seed) + a flat little-endian f64 payload file. Loading verifies
// shapes and checksums.
void save_checkpoint(const std::string& manifest_path, const ParamStore& params,
                     const ModelConfig& cfg, std::uint64_t seed);

struct Checkpoint {
  ParamStore params;
  ModelConfig config;
  std::uint64_t seed = 0;
};

Checkpoint load_checkpoint(const std::string& manifest_path);

}  // namespace glp
