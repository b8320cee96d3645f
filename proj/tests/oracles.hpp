#pragma once

// Test-only oracles, independent of the library's search/DP code paths:
// brute-force rigid-motion optimization and exhaustive alignment enumeration.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "glp/align.hpp"
#include "glp/geom.hpp"

namespace oracle {

inline glp::Mat3 euler_rotation(double a, double b, double c) {
  using glp::axis_angle_rotation;
  using glp::mat3_mul;
  return mat3_mul(axis_angle_rotation({0, 0, 1}, a),
                  mat3_mul(axis_angle_rotation({0, 1, 0}, b), axis_angle_rotation({1, 0, 0}, c)));
}

// Compass/pattern search maximizer with shrinking steps.
inline std::vector<double> pattern_search(std::function<double(const std::vector<double>&)> f,
                                          std::vector<double> x, double step, double min_step) {
  double best = f(x);
  while (step > min_step) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> y = x;
        y[i] += sign * step;
        double v = f(y);
        if (v > best) {
          best = v;
          x = y;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

// Least RMSD of b onto a over proper rotations (translation handled
// analytically by centroid alignment): rotation grid plus pattern search.
inline double brute_force_min_rmsd(const std::vector<glp::Vec3>& a,
                                   const std::vector<glp::Vec3>& b) {
  using namespace glp;
  const std::size_t n = a.size();
  Vec3 ca{0, 0, 0}, cb{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    ca = ca + a[i];
    cb = cb + b[i];
  }
  ca = (1.0 / n) * ca;
  cb = (1.0 / n) * cb;

  auto rmsd_for = [&](const std::vector<double>& angles) {
    Mat3 r = euler_rotation(angles[0], angles[1], angles[2]);
    double se = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 d = mat3_apply(r, b[i] - cb) - (a[i] - ca);
      se += dot(d, d);
    }
    return std::sqrt(se / n);
  };
  auto neg = [&](const std::vector<double>& ang) { return -rmsd_for(ang); };

  double best = 1e300;
  std::vector<double> best_angles{0, 0, 0};
  const double grid_step = M_PI / 9.0;  // 20 degrees
  for (double x = -M_PI; x < M_PI; x += grid_step)
    for (double y = -M_PI / 2; y <= M_PI / 2; y += grid_step)
      for (double z = -M_PI; z < M_PI; z += grid_step) {
        double v = rmsd_for({x, y, z});
        if (v < best) {
          best = v;
          best_angles = {x, y, z};
        }
      }
  auto polished = pattern_search(neg, best_angles, grid_step, 1e-9);
  return rmsd_for(polished);
}

// TM-style score maximization over SO(3) x R^3 by multi-start grid +
// pattern search over Euler angles and translation.
inline double brute_force_max_tm(const std::vector<glp::Vec3>& a, const std::vector<glp::Vec3>& b,
                                 double d0, int l_native) {
  using namespace glp;
  const std::size_t n = a.size();
  Vec3 ca{0, 0, 0}, cb{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    ca = ca + a[i];
    cb = cb + b[i];
  }
  ca = (1.0 / n) * ca;
  cb = (1.0 / n) * cb;
  const double inv_d0sq = 1.0 / (d0 * d0);

  auto score_for = [&](const std::vector<double>& p) {
    Mat3 r = euler_rotation(p[0], p[1], p[2]);
    Vec3 t{p[3], p[4], p[5]};
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 d = mat3_apply(r, b[i] - cb) + t - (a[i] - ca);
      acc += 1.0 / (1.0 + dot(d, d) * inv_d0sq);
    }
    return acc / l_native;
  };

  struct Start {
    double score;
    std::vector<double> p;
  };
  std::vector<Start> starts;
  const double grid_step = M_PI / 6.0;  // 30 degrees
  for (double x = -M_PI; x < M_PI; x += grid_step)
    for (double y = -M_PI / 2; y <= M_PI / 2; y += grid_step)
      for (double z = -M_PI; z < M_PI; z += grid_step) {
        std::vector<double> p{x, y, z, 0, 0, 0};
        starts.push_back({score_for(p), p});
      }
  std::sort(starts.begin(), starts.end(),
            [](const Start& s1, const Start& s2) { return s1.score > s2.score; });

  double best = -1.0;
  const std::size_t polish_count = std::min<std::size_t>(starts.size(), 8);
  for (std::size_t s = 0; s < polish_count; ++s) {
    auto polished = pattern_search(score_for, starts[s].p, 0.5, 1e-8);
    best = std::max(best, score_for(polished));
  }
  return best;
}

// All global alignments by explicit recursion (no DP table); optimum score.
inline long enumerate_best_alignment(const std::string& a, const std::string& b,
                                     const glp::AlignmentScoring& sc, std::size_t i = 0,
                                     std::size_t j = 0) {
  if (i == a.size()) return static_cast<long>(b.size() - j) * sc.gap;
  if (j == b.size()) return static_cast<long>(a.size() - i) * sc.gap;
  long best = enumerate_best_alignment(a, b, sc, i + 1, j + 1) +
              (a[i] == b[j] ? sc.match : sc.mismatch);
  best = std::max(best, enumerate_best_alignment(a, b, sc, i + 1, j) + sc.gap);
  best = std::max(best, enumerate_best_alignment(a, b, sc, i, j + 1) + sc.gap);
  return best;
}

// Score of a specific pairing under the alignment scoring (gaps charged for
// all unpaired residues).
inline long pairing_score(const std::string& a, const std::string& b,
                          const glp::AlignmentPairing& pairing, const glp::AlignmentScoring& sc) {
  long score = 0;
  std::size_t paired = pairing.pairs.size();
  for (auto [ia, ib] : pairing.pairs)
    score += (a[ia] == b[ib]) ? sc.match : sc.mismatch;
  score += static_cast<long>(a.size() - paired + b.size() - paired) * sc.gap;
  return score;
}

}  // namespace oracle
