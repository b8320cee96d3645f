#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/autograd.hpp"
#include "glp/encodings.hpp"
#include "glp/geom.hpp"
#include "glp/tensor.hpp"

namespace glp {

struct ModelConfig {
  int vocab = 29;
  int dim = 64;  // residue representation width D; divisible by heads
  int heads = 4;
  int enc_layers = 2;
  int dec_layers = 2;
  int mol_dim = 16;      // substructure embedding width d
  int num_kernels = 16;  // Gaussian basis size K
  int max_len = 512;
  int mlp_mult = 4;
  double width_floor = 1e-3;

  void validate() const;
};

// Named parameter tensors with a stable iteration order.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor t);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool has(const std::string& name) const { return map_.count(name) != 0; }
  const std::vector<std::string>& names() const { return order_; }
  std::size_t total_parameters() const;

 private:
  std::unordered_map<std::string, Tensor> map_;
  std::vector<std::string> order_;
};

// All learnable tensors: token/position embeddings, encoder blocks, decoder
// blocks, LM head, distance-encoder parameters, substructure embeddings.
ParamStore init_model_params(const ModelConfig& cfg, std::uint64_t seed);

// Zeroing switches for the ablation runs.
struct Ablations {
  bool zero_distance_bias = false;  // drop the pairwise bias
  bool zero_molecular = false;      // zero the substructure features
};

// Pre-norm self-attention stack; returns the L x D representation.
Value encode_tokens(Tape& tape, ParamStore& params, const ModelConfig& cfg,
                    const std::vector<int>& tokens);

// Structure-conditioned decoder stack. Queries come from the sequence
// representation; keys/values from the substructure encoding of ea_tokens;
// the pairwise distance bias is built from coords and bias_tokens (the
// uncorrupted residue types).
Value decode_with_structure(Tape& tape, ParamStore& params, const ModelConfig& cfg, Value e_p,
                            const std::vector<int>& ea_tokens, const std::vector<Vec3>& coords,
                            const std::vector<int>& bias_tokens, const Ablations& ablations = {});

Value lm_logits(Tape& tape, ParamStore& params, const ModelConfig& cfg, Value rep);

// One decoder layer (exposed for tests). kv can have width mol_dim.
Value decoder_layer(Tape& tape, ParamStore& params, const ModelConfig& cfg, int layer, Value e_p,
                    Value e_a, Value phi_or_null);

enum class Corruption { masked, random_residue, kept };

struct MaskedBatch {
  std::vector<int> input_tokens;   // post-corruption
  std::vector<int> target_tokens;  // originals
  std::vector<int> mask_positions; // sorted, |M| = round(0.2 * L)
  std::vector<Corruption> kinds;   // parallel to mask_positions
};

// round(0.2*L) positions uniformly without replacement; each corrupted
// 80/10/10 (mask / uniform random residue / unchanged).
MaskedBatch mask_sequence(const std::vector<int>& tokens, std::mt19937_64& rng);

int masked_count(int length);  // round(0.2 * L)

Value mlm_loss(Tape& tape, Value logits, const MaskedBatch& batch);
Value pool_rows(Tape& tape, Value e);  // arithmetic mean over positions
Value triplet_loss(Tape& tape, Value anchor, Value positive, Value negative, double epsilon);
Value total_loss(Tape& tape, Value mlm, Value ptl, double alpha);

}  // namespace glp
