#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "glp/miner.hpp"
#include "glp/model.hpp"
#include "glp/protein.hpp"

namespace glp {

struct TrainingConfig {
  double alpha = 1.0;    // weight of the triplet term
  double epsilon = 1.0;  // triplet margin
  double learning_rate = 1e-3;
  int steps = 500;
  int batch = 4;  // masked sequences and triplets drawn per step
  std::uint64_t seed = 0;
  std::string optimizer = "adam";  // "sgd" for plain gradient descent
  Ablations ablations;

  void validate() const;
};

struct StepStats {
  int step = 0;
  double mlm = 0.0;
  double ptl = 0.0;
  double total = 0.0;
};

// Momentum-free SGD or Adam over a ParamStore, state keyed by tensor name.
class Optimizer {
 public:
  Optimizer(std::string kind, double lr);
  void apply(ParamStore& params, const std::vector<std::pair<std::string, Tensor>>& grads);

 private:
  std::string kind_;
  double lr_;
  long t_ = 0;
  std::unordered_map<std::string, Tensor> m_, v_;
};

// Joint pre-training: each step draws `batch` masked sequences and `batch`
// triplets round-robin and takes one gradient step on L_MLM + alpha * L_PTL.
class Trainer {
 public:
  Trainer(const Corpus& corpus, std::vector<TripletRecord> index, ModelConfig model_cfg,
          TrainingConfig train_cfg);

  StepStats step();
  std::vector<StepStats> run(std::ostream* log = nullptr);

  // Fraction of masked positions recovered by argmax over fresh masked
  // batches (one per record, seeded independently of training).
  double masked_accuracy(std::uint64_t eval_seed);

  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  const ModelConfig& model_config() const { return model_cfg_; }
  const TrainingConfig& train_config() const { return train_cfg_; }

 private:
  const Corpus& corpus_;
  std::vector<TripletRecord> index_;
  std::vector<std::size_t> mlm_records_;  // corpus positions with coordinates
  ModelConfig model_cfg_;
  TrainingConfig train_cfg_;
  ParamStore params_;
  Optimizer optimizer_;
  std::mt19937_64 rng_;
  std::size_t mlm_cursor_ = 0;
  std::size_t triplet_cursor_ = 0;
  int step_count_ = 0;
};

// Mean-pooled encoder representation of one record (forward only).
Tensor pooled_embedding(ParamStore& params, const ModelConfig& cfg, const ProteinRecord& rec);

// Full-model representation (encoder + structure decoder, forward only).
Tensor model_representation(ParamStore& params, const ModelConfig& cfg, const ProteinRecord& rec,
                            const Ablations& ablations = {});

struct ContactGroundTruth {
  std::set<std::pair<int, int>> contacts;  // i < j, separation >= 6
  int length = 0;
};

// Contact iff CA-CA distance < threshold and j - i >= 6.
ContactGroundTruth contact_truth(const ProteinRecord& rec, double threshold = 8.0);

enum class SeparationBucket { short_range, medium_range, long_range };
inline constexpr SeparationBucket kAllBuckets[3] = {
    SeparationBucket::short_range, SeparationBucket::medium_range, SeparationBucket::long_range};
bool bucket_contains(SeparationBucket b, int separation);
const char* bucket_name(SeparationBucket b);

// Precision of the top ceil(fraction * L) candidates inside the bucket
// (candidates: i < j, sep >= 6, prediction averaged over (i,j)/(j,i); ties
// break lexicographically). Empty buckets are undefined, not 0.
std::optional<double> precision_at(const Tensor& predicted, const ContactGroundTruth& truth,
                                   SeparationBucket bucket, double fraction);

struct ProbeConfig {
  int steps = 300;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
  bool finetune_backbone = false;
  double contact_threshold = 8.0;
  int hidden = 32;
  std::string optimizer = "adam";
};

// Bilinear-ish pair scorer: MLP over (e_i ++ e_j ++ e_i*e_j), symmetrized by
// averaging both orders; trained with BCE against contact ground truth.
class ContactProbe {
 public:
  ContactProbe(const ModelConfig& cfg, const ProbeConfig& pcfg);

  void train(ParamStore& backbone, const ModelConfig& cfg,
             const std::vector<const ProteinRecord*>& records, const Ablations& ablations = {});

  // L x L probability matrix, exactly symmetric.
  Tensor predict(ParamStore& backbone, const ModelConfig& cfg, const ProteinRecord& rec,
                 const Ablations& ablations = {}) const;

  ParamStore& head() { return head_; }

 private:
  ProbeConfig pcfg_;
  ParamStore head_;
};

struct ProbeMetrics {
  // [bucket][fraction index: 0 -> L, 1 -> L/2, 2 -> L/5]
  std::optional<double> precision[3][3];
};

ProbeMetrics evaluate_probe(const ContactProbe& probe, ParamStore& backbone, const ModelConfig& cfg,
                            const std::vector<const ProteinRecord*>& records,
                            double contact_threshold = 8.0, const Ablations& ablations = {});

std::string metrics_to_tsv(const ProbeMetrics& m);

}  // namespace glp
