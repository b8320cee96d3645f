#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glp/align.hpp"
#include "glp/protein.hpp"

namespace glp {

struct MinerConfig {
  int k_positives = 4;
  int n_candidates = 32;
  double neg_threshold = 0.2;
  std::uint64_t rng_seed = 0;
  int threads = 1;

  void validate() const;  // throws UsageError naming the violated field
};

// One mined (anchor, positive, negative) triple with the scores that
// justified it.
struct TripletRecord {
  std::string anchor_id;
  std::string positive_id;
  std::string negative_id;
  double pos_score = 0.0;
  double neg_score = 0.0;
};

struct ScoredId {
  std::string id;
  double score = 0.0;
};

struct MineDiagnostic {
  std::string anchor_id;
  std::string message;
};

// Top-k corpus entries by tm_score against the anchor, descending; exact
// score ties break by id.
std::vector<ScoredId> mine_positives(const std::string& anchor_id, const Corpus& corpus,
                                     const MinerConfig& cfg);

// Draws n_candidates without replacement from a per-anchor stream
// (rng_seed ^ fnv1a(anchor_id)) and keeps the first k whose tm_score falls
// below the threshold. A shortage is reported, never padded.
std::vector<ScoredId> mine_negatives(const std::string& anchor_id, const Corpus& corpus,
                                     const MinerConfig& cfg,
                                     std::vector<MineDiagnostic>* diagnostics = nullptr);

// Per-anchor cartesian pairing of mined positives and negatives. Pairs that
// would violate the record invariants (pos_score < neg_score, or the same id
// on both sides) are skipped with a diagnostic.
std::vector<TripletRecord> build_index(const Corpus& corpus, const MinerConfig& cfg,
                                       std::vector<MineDiagnostic>* diagnostics = nullptr);

// Line format: anchor<TAB>pos<TAB>neg<TAB>pos_score<TAB>neg_score. Scores
// round-trip exactly.
std::string serialize_index(const std::vector<TripletRecord>& index);
std::vector<TripletRecord> parse_index(const std::string& text);

void save_index(const std::vector<TripletRecord>& index, const std::string& path);
// Verifies that every referenced id exists in the corpus.
std::vector<TripletRecord> load_index(const std::string& path, const Corpus& corpus);

}  // namespace glp
