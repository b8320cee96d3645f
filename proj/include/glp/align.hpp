#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glp/geom.hpp"
#include "glp/protein.hpp"

namespace glp {

// Monotone residue correspondence: pairs (index_in_a, index_in_b), strictly
// increasing in both coordinates.
struct AlignmentPairing {
  std::vector<std::pair<int, int>> pairs;

  std::size_t size() const { return pairs.size(); }
};

struct AlignmentScoring {
  int match = 2;
  int mismatch = -1;
  int gap = -2;
};

struct KabschResult {
  RigidTransform transform;  // maps B onto A
  double rmsd = 0.0;
};

// Least-squares optimal proper rigid superposition of points_b onto points_a
// (optionally weighted). Reflections are corrected by flipping the smallest
// singular direction.
KabschResult kabsch(const std::vector<Vec3>& points_a, const std::vector<Vec3>& points_b,
                    const std::vector<double>* weights = nullptr);

// Global alignment, optimal under the scoring. Traceback ties resolve as
// match/mismatch first, then gap-in-A (consume B), then gap-in-B.
AlignmentPairing needleman_wunsch(const std::string& seq_a, const std::string& seq_b,
                                  const AlignmentScoring& scoring = {});

// DP optimum alone (same recurrence as needleman_wunsch).
long nw_score(const std::string& seq_a, const std::string& seq_b, const AlignmentScoring& scoring = {});

// Zhang-Skolnick length-dependent distance scale, clamped below at 0.5.
double d_zero(int l_native);

struct TmScoreResult {
  double score = 0.0;
  RigidTransform transform;  // maps B onto A
  AlignmentPairing pairing;
  int l_native = 0;
  double d0 = 0.0;
};

struct TmScoreOptions {
  AlignmentScoring scoring{};
  int refine_iterations = 8;
  double start_cutoff = 8.0;  // shrinks toward d0 across refinement passes
};

// TM-score of struct_b against struct_a (the native; the score normalizes by
// its length). Residue correspondence comes from needleman_wunsch; the
// superposition search seeds Kabsch fits on sliding windows of the pairing
// (lengths L, L/2, L/4, ... >= 4) and refines each seed on shrinking
// distance-cutoff subsets. Callers wanting a symmetric score average both
// directions.
TmScoreResult tm_score(const ProteinRecord& struct_a, const ProteinRecord& struct_b,
                       const TmScoreOptions& options = {});

}  // namespace glp
