#include "glp/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "glp/alphabet.hpp"
#include "glp/errors.hpp"
#include "glp/kernels.hpp"

namespace glp {

void TrainingConfig::validate() const {
  if (alpha < 0) throw UsageError("alpha must be >= 0");
  if (epsilon <= 0) throw UsageError("epsilon must be > 0");
  if (learning_rate <= 0) throw UsageError("learning_rate must be > 0");
  if (steps < 0) throw UsageError("steps must be >= 0");
  if (batch < 1) throw UsageError("batch must be >= 1");
  if (optimizer != "sgd" && optimizer != "adam") throw UsageError("optimizer must be sgd or adam");
}

Optimizer::Optimizer(std::string kind, double lr) : kind_(std::move(kind)), lr_(lr) {}

void Optimizer::apply(ParamStore& params, const std::vector<std::pair<std::string, Tensor>>& grads) {
  if (kind_ == "sgd") {
    for (const auto& [name, g] : grads) {
      Tensor& p = params.get(name);
      kernels::axpy(-lr_, g.data.data(), p.data.data(), g.size());
    }
    return;
  }
  // Adam, bias-corrected.
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++t_;
  const double c1 = 1.0 - std::pow(beta1, t_);
  const double c2 = 1.0 - std::pow(beta2, t_);
  for (const auto& [name, g] : grads) {
    Tensor& p = params.get(name);
    Tensor& m = m_.try_emplace(name, Tensor::zeros(g.rows, g.cols)).first->second;
    Tensor& v = v_.try_emplace(name, Tensor::zeros(g.rows, g.cols)).first->second;
    for (std::size_t i = 0; i < g.size(); ++i) {
      m.data[i] = beta1 * m.data[i] + (1.0 - beta1) * g.data[i];
      v.data[i] = beta2 * v.data[i] + (1.0 - beta2) * g.data[i] * g.data[i];
      double mhat = m.data[i] / c1;
      double vhat = v.data[i] / c2;
      p.data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

Trainer::Trainer(const Corpus& corpus, std::vector<TripletRecord> index, ModelConfig model_cfg,
                 TrainingConfig train_cfg)
    : corpus_(corpus),
      index_(std::move(index)),
      model_cfg_(model_cfg),
      train_cfg_(train_cfg),
      params_(init_model_params(model_cfg, train_cfg.seed)),
      optimizer_(train_cfg.optimizer, train_cfg.learning_rate),
      rng_(train_cfg.seed) {
  model_cfg_.validate();
  train_cfg_.validate();
  for (std::size_t i = 0; i < corpus_.size(); ++i)
    if (corpus_.at(i).has_coords()) mlm_records_.push_back(i);
  if (mlm_records_.empty())
    throw DataError("pretraining corpus has no records with coordinates");
  for (const TripletRecord& t : index_)
    for (const std::string* id : {&t.anchor_id, &t.positive_id, &t.negative_id})
      if (!corpus_.contains(*id)) throw DataError("triplet references unknown id '" + *id + "'");
}

StepStats Trainer::step() {
  Tape tape;
  tape.set_finite_checks(true);

  // Masked-language branch.
  std::vector<Value> mlm_terms;
  for (int b = 0; b < train_cfg_.batch; ++b) {
    const ProteinRecord& rec = corpus_.at(mlm_records_[mlm_cursor_]);
    mlm_cursor_ = (mlm_cursor_ + 1) % mlm_records_.size();
    std::vector<int> tokens = tokenize(rec.sequence);
    MaskedBatch batch = mask_sequence(tokens, rng_);
    if (batch.mask_positions.empty()) continue;  // round(0.2*L) can be 0 for tiny L
    Value e_p = encode_tokens(tape, params_, model_cfg_, batch.input_tokens);
    Value rep = decode_with_structure(tape, params_, model_cfg_, e_p, batch.input_tokens,
                                      *rec.ca_coords, tokens, train_cfg_.ablations);
    Value logits = lm_logits(tape, params_, model_cfg_, rep);
    mlm_terms.push_back(mlm_loss(tape, logits, batch));
  }
  if (mlm_terms.empty()) throw DataError("train_step: no maskable sequences in batch");
  Value mlm = mlm_terms[0];
  for (std::size_t i = 1; i < mlm_terms.size(); ++i) mlm = tape.add(mlm, mlm_terms[i]);
  mlm = tape.scale(mlm, 1.0 / mlm_terms.size());

  // Triplet branch (pooled encoder representations).
  Value ptl = nullptr;
  if (!index_.empty()) {
    std::vector<Value> terms;
    for (int b = 0; b < train_cfg_.batch; ++b) {
      const TripletRecord& t = index_[triplet_cursor_];
      triplet_cursor_ = (triplet_cursor_ + 1) % index_.size();
      auto embed = [&](const std::string& id) {
        const ProteinRecord& r = *corpus_.find(id);
        return pool_rows(tape, encode_tokens(tape, params_, model_cfg_, tokenize(r.sequence)));
      };
      terms.push_back(triplet_loss(tape, embed(t.anchor_id), embed(t.positive_id),
                                   embed(t.negative_id), train_cfg_.epsilon));
    }
    ptl = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) ptl = tape.add(ptl, terms[i]);
    ptl = tape.scale(ptl, 1.0 / terms.size());
  }

  Value total = mlm;
  if (ptl && train_cfg_.alpha != 0.0) total = total_loss(tape, mlm, ptl, train_cfg_.alpha);

  StepStats stats;
  stats.step = ++step_count_;
  stats.mlm = mlm->value.data[0];
  stats.ptl = ptl ? ptl->value.data[0] : 0.0;
  stats.total = total->value.data[0];
  if (!std::isfinite(stats.total))
    throw DataError("train_step: non-finite loss at step " + std::to_string(stats.step));

  tape.backward(total);

  std::vector<std::pair<std::string, Tensor>> grads;
  for (const std::string& name : params_.names()) {
    Value leafnode = tape.leaf(name, params_.get(name));
    if (!leafnode->grad_ready) continue;
    if (!leafnode->grad.all_finite())
      throw DataError("train_step: non-finite gradient for '" + name + "' at step " +
                      std::to_string(stats.step));
    grads.emplace_back(name, leafnode->grad);
  }
  optimizer_.apply(params_, grads);
  return stats;
}

std::vector<StepStats> Trainer::run(std::ostream* log) {
  std::vector<StepStats> trace;
  trace.reserve(train_cfg_.steps);
  if (log) *log << "step\tloss_mlm\tloss_ptl\tloss_total\n";
  for (int i = 0; i < train_cfg_.steps; ++i) {
    StepStats s = step();
    if (log) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%d\t%.12g\t%.12g\t%.12g\n", s.step, s.mlm, s.ptl, s.total);
      *log << buf;
    }
    trace.push_back(s);
  }
  return trace;
}

double Trainer::masked_accuracy(std::uint64_t eval_seed) {
  std::mt19937_64 eval_rng(eval_seed);
  long correct = 0, total = 0;
  for (std::size_t idx : mlm_records_) {
    const ProteinRecord& rec = corpus_.at(idx);
    std::vector<int> tokens = tokenize(rec.sequence);
    MaskedBatch batch = mask_sequence(tokens, eval_rng);
    if (batch.mask_positions.empty()) continue;
    Tape tape;
    Value e_p = encode_tokens(tape, params_, model_cfg_, batch.input_tokens);
    Value rep = decode_with_structure(tape, params_, model_cfg_, e_p, batch.input_tokens,
                                      *rec.ca_coords, tokens, train_cfg_.ablations);
    Value logits = lm_logits(tape, params_, model_cfg_, rep);
    for (int pos : batch.mask_positions) {
      const double* row = logits->value.row(pos);
      int best = 0;
      for (int c = 1; c < logits->value.cols; ++c)
        if (row[c] > row[best]) best = c;
      if (best == batch.target_tokens[pos]) ++correct;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(correct) / total : 0.0;
}

Tensor pooled_embedding(ParamStore& params, const ModelConfig& cfg, const ProteinRecord& rec) {
  Tape tape;
  return pool_rows(tape, encode_tokens(tape, params, cfg, tokenize(rec.sequence)))->value;
}

Tensor model_representation(ParamStore& params, const ModelConfig& cfg, const ProteinRecord& rec,
                            const Ablations& ablations) {
  if (!rec.has_coords()) throw DataError("model_representation: '" + rec.id + "' lacks coordinates");
  Tape tape;
  std::vector<int> tokens = tokenize(rec.sequence);
  Value e_p = encode_tokens(tape, params, cfg, tokens);
  return decode_with_structure(tape, params, cfg, e_p, tokens, *rec.ca_coords, tokens, ablations)
      ->value;
}

ContactGroundTruth contact_truth(const ProteinRecord& rec, double threshold) {
  if (!rec.has_coords()) throw DataError("contact_truth: '" + rec.id + "' lacks coordinates");
  ContactGroundTruth truth;
  truth.length = static_cast<int>(rec.length());
  const auto& xyz = *rec.ca_coords;
  for (int i = 0; i < truth.length; ++i)
    for (int j = i + 6; j < truth.length; ++j)
      if (distance(xyz[i], xyz[j]) < threshold) truth.contacts.insert({i, j});
  return truth;
}

bool bucket_contains(SeparationBucket b, int sep) {
  switch (b) {
    case SeparationBucket::short_range: return sep >= 6 && sep < 12;
    case SeparationBucket::medium_range: return sep >= 12 && sep < 24;
    case SeparationBucket::long_range: return sep >= 24;
  }
  return false;
}

const char* bucket_name(SeparationBucket b) {
  switch (b) {
    case SeparationBucket::short_range: return "short";
    case SeparationBucket::medium_range: return "medium";
    case SeparationBucket::long_range: return "long";
  }
  return "?";
}

std::optional<double> precision_at(const Tensor& predicted, const ContactGroundTruth& truth,
                                   SeparationBucket bucket, double fraction) {
  const int l = truth.length;
  if (predicted.rows != l || predicted.cols != l)
    throw DataError("precision_at: prediction shape mismatch");

  struct Candidate {
    double prob;
    int i, j;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < l; ++i) {
    for (int j = i + 6; j < l; ++j) {
      if (!bucket_contains(bucket, j - i)) continue;
      double p = 0.5 * (predicted.at(i, j) + predicted.at(j, i));
      cands.push_back({p, i, j});
    }
  }
  if (cands.empty()) return std::nullopt;

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::size_t take = static_cast<std::size_t>(std::ceil(fraction * l));
  take = std::min(take, cands.size());
  if (take == 0) return std::nullopt;

  std::size_t hits = 0;
  for (std::size_t k = 0; k < take; ++k)
    if (truth.contacts.count({cands[k].i, cands[k].j})) ++hits;
  return static_cast<double>(hits) / static_cast<double>(take);
}

namespace {

std::vector<std::pair<int, int>> scored_pairs(int l) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < l; ++i)
    for (int j = i + 6; j < l; ++j) pairs.emplace_back(i, j);
  return pairs;
}

Value head_logits(Tape& tape, ParamStore& head, Value rep,
                  const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<int, int>> flipped;
  flipped.reserve(pairs.size());
  for (auto [i, j] : pairs) flipped.emplace_back(j, i);
  auto mlp = [&](Value feats) {
    Value h = tape.gelu(tape.add_rowvec(tape.matmul(feats, tape.leaf("probe.w1", head.get("probe.w1"))),
                                        tape.leaf("probe.b1", head.get("probe.b1"))));
    return tape.add_rowvec(tape.matmul(h, tape.leaf("probe.w2", head.get("probe.w2"))),
                           tape.leaf("probe.b2", head.get("probe.b2")));
  };
  Value fwd = mlp(tape.pair_features(rep, pairs));
  Value bwd = mlp(tape.pair_features(rep, flipped));
  return tape.scale(tape.add(fwd, bwd), 0.5);  // symmetric by construction
}

}  // namespace

ContactProbe::ContactProbe(const ModelConfig& cfg, const ProbeConfig& pcfg) : pcfg_(pcfg) {
  std::mt19937_64 gen(pcfg.seed ^ 0x9e3779b97f4a7c15ull);
  head_.add("probe.w1", Tensor::randn(3 * cfg.dim, pcfg.hidden, 0.05, gen));
  head_.add("probe.b1", Tensor(1, pcfg.hidden));
  head_.add("probe.w2", Tensor::randn(pcfg.hidden, 1, 0.05, gen));
  head_.add("probe.b2", Tensor(1, 1));
}

void ContactProbe::train(ParamStore& backbone, const ModelConfig& cfg,
                         const std::vector<const ProteinRecord*>& records,
                         const Ablations& ablations) {
  if (records.empty()) throw DataError("probe: no training records");

  // Frozen backbone: representations are fixed, compute them once.
  std::vector<Tensor> cached_reps;
  if (!pcfg_.finetune_backbone)
    for (const ProteinRecord* r : records)
      cached_reps.push_back(model_representation(backbone, cfg, *r, ablations));

  std::vector<ContactGroundTruth> truths;
  for (const ProteinRecord* r : records) truths.push_back(contact_truth(*r, pcfg_.contact_threshold));

  Optimizer head_opt(pcfg_.optimizer, pcfg_.learning_rate);
  Optimizer backbone_opt(pcfg_.optimizer, pcfg_.learning_rate);

  for (int s = 0; s < pcfg_.steps; ++s) {
    std::size_t r = static_cast<std::size_t>(s) % records.size();
    const ProteinRecord& rec = *records[r];
    const int l = static_cast<int>(rec.length());
    auto pairs = scored_pairs(l);
    if (pairs.empty()) continue;

    Tape tape;
    Value rep;
    if (pcfg_.finetune_backbone) {
      std::vector<int> tokens = tokenize(rec.sequence);
      Value e_p = encode_tokens(tape, backbone, cfg, tokens);
      rep = decode_with_structure(tape, backbone, cfg, e_p, tokens, *rec.ca_coords, tokens, ablations);
    } else {
      rep = tape.constant(cached_reps[r], "rep");
    }
    Value logits = head_logits(tape, head_, rep, pairs);
    std::vector<double> labels;
    labels.reserve(pairs.size());
    for (auto [i, j] : pairs) labels.push_back(truths[r].contacts.count({i, j}) ? 1.0 : 0.0);
    Value loss = tape.binary_cross_entropy_with_logits(logits, std::move(labels));
    tape.backward(loss);

    std::vector<std::pair<std::string, Tensor>> head_grads;
    for (const std::string& name : head_.names()) {
      Value leafnode = tape.leaf(name, head_.get(name));
      if (leafnode->grad_ready) head_grads.emplace_back(name, leafnode->grad);
    }
    head_opt.apply(head_, head_grads);

    if (pcfg_.finetune_backbone) {
      std::vector<std::pair<std::string, Tensor>> grads;
      for (const std::string& name : backbone.names()) {
        Value leafnode = tape.leaf(name, backbone.get(name));
        if (leafnode->grad_ready) grads.emplace_back(name, leafnode->grad);
      }
      backbone_opt.apply(backbone, grads);
    }
  }
}

Tensor ContactProbe::predict(ParamStore& backbone, const ModelConfig& cfg, const ProteinRecord& rec,
                             const Ablations& ablations) const {
  Tensor rep = model_representation(backbone, cfg, rec, ablations);
  const int l = rep.rows;
  Tensor prob(l, l);
  auto pairs = scored_pairs(l);
  if (pairs.empty()) return prob;

  Tape tape;
  ParamStore& head = const_cast<ParamStore&>(head_);
  Value logits = head_logits(tape, head, tape.constant(rep, "rep"), pairs);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    double v = 1.0 / (1.0 + std::exp(-logits->value.data[p]));
    prob.at(i, j) = v;
    prob.at(j, i) = v;
  }
  return prob;
}

ProbeMetrics evaluate_probe(const ContactProbe& probe, ParamStore& backbone, const ModelConfig& cfg,
                            const std::vector<const ProteinRecord*>& records,
                            double contact_threshold, const Ablations& ablations) {
  const double fractions[3] = {1.0, 0.5, 0.2};
  double sums[3][3] = {};
  int counts[3][3] = {};
  for (const ProteinRecord* r : records) {
    Tensor pred = probe.predict(backbone, cfg, *r, ablations);
    ContactGroundTruth truth = contact_truth(*r, contact_threshold);
    for (int b = 0; b < 3; ++b) {
      for (int f = 0; f < 3; ++f) {
        auto p = precision_at(pred, truth, kAllBuckets[b], fractions[f]);
        if (p) {
          sums[b][f] += *p;
          counts[b][f] += 1;
        }
      }
    }
  }
  ProbeMetrics m;
  for (int b = 0; b < 3; ++b)
    for (int f = 0; f < 3; ++f)
      if (counts[b][f] > 0) m.precision[b][f] = sums[b][f] / counts[b][f];
  return m;
}

std::string metrics_to_tsv(const ProbeMetrics& m) {
  const char* fraction_names[3] = {"L", "L/2", "L/5"};
  std::string out = "bucket\tfraction\tprecision\n";
  for (int b = 0; b < 3; ++b) {
    for (int f = 0; f < 3; ++f) {
      out += bucket_name(kAllBuckets[b]);
      out += '\t';
      out += fraction_names[f];
      out += '\t';
      if (m.precision[b][f]) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *m.precision[b][f]);
        out += buf;
      } else {
        out += "undefined";
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace glp
