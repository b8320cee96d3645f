#include "glp/model.hpp"

#include <algorithm>
#include <cmath>

#include "glp/alphabet.hpp"
#include "glp/errors.hpp"
#include "glp/rng.hpp"

namespace glp {

void ModelConfig::validate() const {
  if (vocab < 1) throw UsageError("vocab must be >= 1");
  if (dim < 1 || heads < 1 || dim % heads != 0)
    throw UsageError("dim must be positive and divisible by heads");
  if (enc_layers < 1 || dec_layers < 0) throw UsageError("layer counts out of range");
  if (mol_dim < 1 || num_kernels < 1) throw UsageError("mol_dim and num_kernels must be >= 1");
  if (max_len < 2) throw UsageError("max_len must be >= 2");
  if (mlp_mult < 1) throw UsageError("mlp_mult must be >= 1");
  if (width_floor <= 0) throw UsageError("width_floor must be > 0");
}

Tensor& ParamStore::add(const std::string& name, Tensor t) {
  auto [it, inserted] = map_.emplace(name, std::move(t));
  if (!inserted) throw DataError("duplicate parameter '" + name + "'");
  order_.push_back(name);
  return it->second;
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = map_.find(name);
  if (it == map_.end()) throw DataError("unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = map_.find(name);
  if (it == map_.end()) throw DataError("unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParamStore::total_parameters() const {
  std::size_t n = 0;
  for (const auto& name : order_) n += map_.at(name).size();
  return n;
}

namespace {

void add_layer_norm(ParamStore& p, const std::string& prefix, int width) {
  p.add(prefix + ".gain", Tensor::full(1, width, 1.0));
  p.add(prefix + ".bias", Tensor(1, width));
}

void add_mlp(ParamStore& p, const std::string& prefix, int in, int hidden, std::mt19937_64& gen) {
  p.add(prefix + ".w1", Tensor::randn(in, hidden, 0.02, gen));
  p.add(prefix + ".b1", Tensor(1, hidden));
  p.add(prefix + ".w2", Tensor::randn(hidden, in, 0.02, gen));
  p.add(prefix + ".b2", Tensor(1, in));
}

}  // namespace

ParamStore init_model_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 gen(seed);
  ParamStore p;

  p.add("tok_emb", Tensor::randn(cfg.vocab, cfg.dim, 0.02, gen));
  p.add("pos_emb", Tensor::randn(cfg.max_len, cfg.dim, 0.02, gen));

  for (int i = 0; i < cfg.enc_layers; ++i) {
    std::string base = "enc." + std::to_string(i);
    add_layer_norm(p, base + ".ln1", cfg.dim);
    for (const char* proj : {"wq", "wk", "wv", "wo"})
      p.add(base + ".attn." + proj, Tensor::randn(cfg.dim, cfg.dim, 0.02, gen));
    for (const char* bias : {"bq", "bk", "bv", "bo"})
      p.add(base + ".attn." + bias, Tensor(1, cfg.dim));
    add_layer_norm(p, base + ".ln2", cfg.dim);
    add_mlp(p, base + ".mlp", cfg.dim, cfg.dim * cfg.mlp_mult, gen);
  }
  add_layer_norm(p, "enc.final_ln", cfg.dim);

  for (int i = 0; i < cfg.dec_layers; ++i) {
    std::string base = "dec." + std::to_string(i);
    add_layer_norm(p, base + ".ln_q", cfg.dim);
    add_layer_norm(p, base + ".ln_k", cfg.mol_dim);
    add_layer_norm(p, base + ".ln_v", cfg.mol_dim);
    p.add(base + ".wq", Tensor::randn(cfg.dim, cfg.dim, 0.02, gen));
    p.add(base + ".wk", Tensor::randn(cfg.mol_dim, cfg.dim, 0.02, gen));
    p.add(base + ".wv", Tensor::randn(cfg.mol_dim, cfg.dim, 0.02, gen));
    add_mlp(p, base + ".mlp", cfg.dim, cfg.dim * cfg.mlp_mult, gen);
  }
  add_layer_norm(p, "dec.final_ln", cfg.dim);

  p.add("lm_head.w", Tensor::randn(cfg.dim, cfg.vocab, 0.02, gen));
  p.add("lm_head.b", Tensor(1, cfg.vocab));

  DistanceEncoderParams dist = DistanceEncoderParams::init(cfg.num_kernels, gen);
  p.add("dist.centers", dist.centers);
  p.add("dist.widths", dist.widths);
  p.add("dist.pair_scale", dist.pair_scale);
  p.add("dist.pair_shift", dist.pair_shift);
  p.add("dist.mix", dist.mix);
  p.add("dist.out", dist.out);

  p.add("mol.table", Tensor::randn(MolecularVocab::instance().size(), cfg.mol_dim, 0.02, gen));
  return p;
}

namespace {

Value layer_norm_named(Tape& tape, ParamStore& params, const std::string& prefix, Value x) {
  return tape.layer_norm(x, tape.leaf(prefix + ".gain", params.get(prefix + ".gain")),
                         tape.leaf(prefix + ".bias", params.get(prefix + ".bias")));
}

Value mlp_named(Tape& tape, ParamStore& params, const std::string& prefix, Value x) {
  Value h = tape.gelu(tape.add_rowvec(tape.matmul(x, tape.leaf(prefix + ".w1", params.get(prefix + ".w1"))),
                                      tape.leaf(prefix + ".b1", params.get(prefix + ".b1"))));
  return tape.add_rowvec(tape.matmul(h, tape.leaf(prefix + ".w2", params.get(prefix + ".w2"))),
                         tape.leaf(prefix + ".b2", params.get(prefix + ".b2")));
}

Value multi_head_self_attention(Tape& tape, ParamStore& params, const ModelConfig& cfg,
                                const std::string& base, Value x) {
  auto proj = [&](const char* w, const char* b) {
    return tape.add_rowvec(tape.matmul(x, tape.leaf(base + "." + w, params.get(base + "." + w))),
                           tape.leaf(base + "." + b, params.get(base + "." + b)));
  };
  Value q = proj("wq", "bq");
  Value k = proj("wk", "bk");
  Value v = proj("wv", "bv");

  const int head_dim = cfg.dim / cfg.heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  std::vector<Value> head_outputs;
  for (int h = 0; h < cfg.heads; ++h) {
    Value qh = tape.slice_cols(q, h * head_dim, head_dim);
    Value kh = tape.slice_cols(k, h * head_dim, head_dim);
    Value vh = tape.slice_cols(v, h * head_dim, head_dim);
    Value scores = tape.scale(tape.matmul_transposed(qh, kh), inv_sqrt);
    head_outputs.push_back(tape.matmul(tape.softmax_rows(scores), vh));
  }
  Value merged = tape.concat_cols(head_outputs);
  return tape.add_rowvec(tape.matmul(merged, tape.leaf(base + ".wo", params.get(base + ".wo"))),
                         tape.leaf(base + ".bo", params.get(base + ".bo")));
}

}  // namespace

Value encode_tokens(Tape& tape, ParamStore& params, const ModelConfig& cfg,
                    const std::vector<int>& tokens) {
  const int l = static_cast<int>(tokens.size());
  if (l < 1) throw DataError("encode: empty token sequence");
  if (l > cfg.max_len)
    throw DataError("encode: sequence length " + std::to_string(l) + " exceeds max_len " +
                    std::to_string(cfg.max_len));
  for (int t : tokens)
    if (t < 0 || t >= cfg.vocab) throw DataError("encode: token " + std::to_string(t) + " out of vocab");

  std::vector<int> positions(l);
  for (int i = 0; i < l; ++i) positions[i] = i;
  Value x = tape.add(tape.lookup_rows(tape.leaf("tok_emb", params.get("tok_emb")), tokens),
                     tape.lookup_rows(tape.leaf("pos_emb", params.get("pos_emb")), positions));

  for (int i = 0; i < cfg.enc_layers; ++i) {
    std::string base = "enc." + std::to_string(i);
    Value attn = multi_head_self_attention(tape, params, cfg, base + ".attn",
                                           layer_norm_named(tape, params, base + ".ln1", x));
    x = tape.add(x, attn);
    Value ff = mlp_named(tape, params, base + ".mlp", layer_norm_named(tape, params, base + ".ln2", x));
    x = tape.add(x, ff);
  }
  return layer_norm_named(tape, params, "enc.final_ln", x);
}

Value decoder_layer(Tape& tape, ParamStore& params, const ModelConfig& cfg, int layer, Value e_p,
                    Value e_a, Value phi_or_null) {
  std::string base = "dec." + std::to_string(layer);
  Value q_in = layer_norm_named(tape, params, base + ".ln_q", e_p);
  Value k_in = layer_norm_named(tape, params, base + ".ln_k", e_a);
  Value v_in = layer_norm_named(tape, params, base + ".ln_v", e_a);
  Value q = tape.matmul(q_in, tape.leaf(base + ".wq", params.get(base + ".wq")));
  Value k = tape.matmul(k_in, tape.leaf(base + ".wk", params.get(base + ".wk")));
  Value v = tape.matmul(v_in, tape.leaf(base + ".wv", params.get(base + ".wv")));

  Value scores = tape.scale(tape.matmul_transposed(q, k), 1.0 / std::sqrt(static_cast<double>(cfg.dim)));
  if (phi_or_null) scores = tape.add(scores, phi_or_null);
  Value attended = tape.matmul(tape.softmax_rows(scores), v);

  // Eq-style residual: the normalized query stream plus the attended values,
  // then a residual MLP.
  Value merged = tape.add(q_in, attended);
  return tape.add(merged, mlp_named(tape, params, base + ".mlp", merged));
}

Value decode_with_structure(Tape& tape, ParamStore& params, const ModelConfig& cfg, Value e_p,
                            const std::vector<int>& ea_tokens, const std::vector<Vec3>& coords,
                            const std::vector<int>& bias_tokens, const Ablations& ablations) {
  if (coords.size() != ea_tokens.size() || coords.size() != bias_tokens.size())
    throw DataError("decode: coordinate/type length mismatch");

  Value e_a = build_molecular_encoding(tape, tape.leaf("mol.table", params.get("mol.table")), ea_tokens);
  if (ablations.zero_molecular) e_a = tape.scale(e_a, 0.0);

  Value phi = nullptr;
  if (!ablations.zero_distance_bias) {
    phi = build_distance_bias(tape, tape.leaf("dist.centers", params.get("dist.centers")),
                              tape.leaf("dist.widths", params.get("dist.widths")),
                              tape.leaf("dist.pair_scale", params.get("dist.pair_scale")),
                              tape.leaf("dist.pair_shift", params.get("dist.pair_shift")),
                              tape.leaf("dist.mix", params.get("dist.mix")),
                              tape.leaf("dist.out", params.get("dist.out")), coords, bias_tokens,
                              cfg.width_floor);
  }

  Value x = e_p;
  for (int i = 0; i < cfg.dec_layers; ++i) x = decoder_layer(tape, params, cfg, i, x, e_a, phi);
  return layer_norm_named(tape, params, "dec.final_ln", x);
}

Value lm_logits(Tape& tape, ParamStore& params, const ModelConfig& cfg, Value rep) {
  (void)cfg;
  return tape.add_rowvec(tape.matmul(rep, tape.leaf("lm_head.w", params.get("lm_head.w"))),
                         tape.leaf("lm_head.b", params.get("lm_head.b")));
}

int masked_count(int length) {
  return static_cast<int>(std::lround(0.2 * static_cast<double>(length)));
}

MaskedBatch mask_sequence(const std::vector<int>& tokens, std::mt19937_64& rng) {
  const int l = static_cast<int>(tokens.size());
  if (l < 2) throw DataError("mask_sequence: sequence length must be >= 2");
  for (int t : tokens)
    if (t < 0 || t >= kNumResidues)
      throw DataError("mask_sequence: expected residue tokens, got " + std::to_string(t));

  MaskedBatch batch;
  batch.input_tokens = tokens;
  batch.target_tokens = tokens;

  const int m = masked_count(l);
  auto picks = sample_without_replacement(static_cast<std::size_t>(l), static_cast<std::size_t>(m), rng);
  std::vector<int> positions(picks.begin(), picks.end());
  std::sort(positions.begin(), positions.end());

  for (int pos : positions) {
    double u = unit_real(rng);
    Corruption kind;
    if (u < 0.8) {
      kind = Corruption::masked;
      batch.input_tokens[pos] = kMaskToken;
    } else if (u < 0.9) {
      kind = Corruption::random_residue;
      batch.input_tokens[pos] = static_cast<int>(bounded(rng, kNumResidues));
    } else {
      kind = Corruption::kept;
    }
    batch.mask_positions.push_back(pos);
    batch.kinds.push_back(kind);
  }
  return batch;
}

Value mlm_loss(Tape& tape, Value logits, const MaskedBatch& batch) {
  if (batch.mask_positions.empty()) throw DataError("mlm_loss: empty mask");
  return tape.masked_cross_entropy(logits, batch.target_tokens, batch.mask_positions);
}

Value pool_rows(Tape& tape, Value e) { return tape.mean_rows(e); }

Value triplet_loss(Tape& tape, Value anchor, Value positive, Value negative, double epsilon) {
  auto l2 = [&](Value a, Value b) {
    Value d = tape.sub(a, b);
    return tape.sqrt_elem(tape.sum_all(tape.hadamard(d, d)));
  };
  Value margin = tape.shift(tape.sub(l2(anchor, positive), l2(anchor, negative)), epsilon);
  return tape.relu(margin);
}

Value total_loss(Tape& tape, Value mlm, Value ptl, double alpha) {
  return tape.add(mlm, tape.scale(ptl, alpha));
}

}  // namespace glp
