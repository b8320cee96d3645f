#include "glp/miner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "glp/errors.hpp"
#include "glp/rng.hpp"

namespace glp {

void MinerConfig::validate() const {
  if (k_positives < 1) throw UsageError("k_positives must be >= 1");
  if (n_candidates < k_positives) throw UsageError("n_candidates must be >= k_positives");
  if (!(neg_threshold > 0.0 && neg_threshold < 1.0))
    throw UsageError("neg_threshold must lie in (0, 1)");
  if (threads < 1) throw UsageError("threads must be >= 1");
}

namespace {

const ProteinRecord& anchor_record(const std::string& anchor_id, const Corpus& corpus) {
  const ProteinRecord* rec = corpus.find(anchor_id);
  if (!rec) throw DataError("anchor '" + anchor_id + "' not in corpus");
  if (!rec->has_coords()) throw DataError("anchor '" + anchor_id + "' lacks coordinates");
  if (corpus.size() < 2) throw DataError("corpus smaller than 2");
  return *rec;
}

}  // namespace

std::vector<ScoredId> mine_positives(const std::string& anchor_id, const Corpus& corpus,
                                     const MinerConfig& cfg) {
  cfg.validate();
  const ProteinRecord& anchor = anchor_record(anchor_id, corpus);

  std::vector<ScoredId> scored;
  for (const ProteinRecord& other : corpus.records()) {
    if (other.id == anchor_id || !other.has_coords()) continue;
    scored.push_back({other.id, tm_score(anchor, other).score});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredId& x, const ScoredId& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  });
  if (scored.size() > static_cast<std::size_t>(cfg.k_positives))
    scored.resize(static_cast<std::size_t>(cfg.k_positives));
  return scored;
}

std::vector<ScoredId> mine_negatives(const std::string& anchor_id, const Corpus& corpus,
                                     const MinerConfig& cfg,
                                     std::vector<MineDiagnostic>* diagnostics) {
  cfg.validate();
  const ProteinRecord& anchor = anchor_record(anchor_id, corpus);

  std::vector<const ProteinRecord*> pool;
  for (const ProteinRecord& other : corpus.records())
    if (other.id != anchor_id && other.has_coords()) pool.push_back(&other);

  std::mt19937_64 gen(cfg.rng_seed ^ fnv1a64(anchor_id));
  auto picks = sample_without_replacement(pool.size(), static_cast<std::size_t>(cfg.n_candidates), gen);

  std::vector<ScoredId> kept;
  for (std::size_t p : picks) {
    if (kept.size() >= static_cast<std::size_t>(cfg.k_positives)) break;
    const ProteinRecord& cand = *pool[p];
    double s = tm_score(anchor, cand).score;
    if (s < cfg.neg_threshold) kept.push_back({cand.id, s});
  }
  if (kept.size() < static_cast<std::size_t>(cfg.k_positives) && diagnostics) {
    diagnostics->push_back({anchor_id, "negative shortage: " + std::to_string(kept.size()) + "/" +
                                           std::to_string(cfg.k_positives) + " below threshold " +
                                           std::to_string(cfg.neg_threshold)});
  }
  return kept;
}

std::vector<TripletRecord> build_index(const Corpus& corpus, const MinerConfig& cfg,
                                       std::vector<MineDiagnostic>* diagnostics) {
  cfg.validate();
  for (const ProteinRecord& r : corpus.records())
    if (!r.has_coords()) throw DataError("record '" + r.id + "' lacks coordinates");

  struct AnchorResult {
    std::vector<ScoredId> positives, negatives;
    std::vector<MineDiagnostic> diags;
  };
  const std::size_t n = corpus.size();
  std::vector<AnchorResult> results(n);

  auto mine_one = [&](std::size_t i) {
    const std::string& id = corpus.at(i).id;
    results[i].positives = mine_positives(id, corpus, cfg);
    results[i].negatives = mine_negatives(id, corpus, cfg, &results[i].diags);
  };

  if (cfg.threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) mine_one(i);
  } else {
    // Anchors are independent; aggregation below stays in anchor order.
    std::size_t workers = std::min<std::size_t>(cfg.threads, n);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) mine_one(i);
      });
    }
    for (auto& t : threads) t.join();
  }

  std::vector<TripletRecord> index;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& anchor = corpus.at(i).id;
    if (diagnostics)
      diagnostics->insert(diagnostics->end(), results[i].diags.begin(), results[i].diags.end());
    for (const ScoredId& pos : results[i].positives) {
      for (const ScoredId& neg : results[i].negatives) {
        if (pos.id == neg.id) {
          if (diagnostics)
            diagnostics->push_back({anchor, "skipped pair: '" + pos.id + "' mined on both sides"});
          continue;
        }
        if (pos.score < neg.score) {
          if (diagnostics)
            diagnostics->push_back(
                {anchor, "skipped pair '" + pos.id + "'/'" + neg.id + "': pos_score < neg_score"});
          continue;
        }
        index.push_back({anchor, pos.id, neg.id, pos.score, neg.score});
      }
    }
  }
  return index;
}

std::string serialize_index(const std::vector<TripletRecord>& index) {
  std::string out;
  char buf[256];
  for (const TripletRecord& t : index) {
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%s\t%.17g\t%.17g\n", t.anchor_id.c_str(),
                  t.positive_id.c_str(), t.negative_id.c_str(), t.pos_score, t.neg_score);
    out += buf;
  }
  return out;
}

std::vector<TripletRecord> parse_index(const std::string& text) {
  std::vector<TripletRecord> index;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) f.push_back(tok);
    if (f.size() != 5) throw DataError("index line '" + line + "': expected 5 tab-separated fields");
    TripletRecord t;
    t.anchor_id = f[0];
    t.positive_id = f[1];
    t.negative_id = f[2];
    try {
      t.pos_score = std::stod(f[3]);
      t.neg_score = std::stod(f[4]);
    } catch (const std::exception&) {
      throw DataError("index line '" + line + "': bad score field");
    }
    index.push_back(std::move(t));
  }
  return index;
}

void save_index(const std::vector<TripletRecord>& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << serialize_index(index);
}

std::vector<TripletRecord> load_index(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::vector<TripletRecord> index = parse_index(ss.str());
  for (const TripletRecord& t : index) {
    for (const std::string* id : {&t.anchor_id, &t.positive_id, &t.negative_id})
      if (!corpus.contains(*id))
        throw DataError("index references id '" + *id + "' missing from corpus");
  }
  return index;
}

}  // namespace glp
