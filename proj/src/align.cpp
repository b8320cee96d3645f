#include "glp/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glp/errors.hpp"

namespace glp {

namespace {

Vec3 weighted_centroid(const std::vector<Vec3>& pts, const std::vector<double>* w, double wsum) {
  Vec3 c{0, 0, 0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double wi = w ? (*w)[i] : 1.0;
    c = c + wi * pts[i];
  }
  return (1.0 / wsum) * c;
}

// Orthonormal completion of one or two unit columns.
Vec3 any_orthogonal(const Vec3& u) {
  Vec3 trial = std::abs(u[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 v = cross(u, trial);
  double n = norm(v);
  return (1.0 / n) * v;
}

}  // namespace

KabschResult kabsch(const std::vector<Vec3>& points_a, const std::vector<Vec3>& points_b,
                    const std::vector<double>* weights) {
  const std::size_t n = points_a.size();
  if (n != points_b.size()) throw DataError("kabsch: point sets differ in size");
  if (n < 3) throw DataError("kabsch: fewer than 3 points");
  if (weights && weights->size() != n) throw DataError("kabsch: weight count mismatch");

  double wsum = 0.0;
  if (weights) {
    for (double w : *weights) {
      if (w < 0) throw DataError("kabsch: negative weight");
      wsum += w;
    }
    if (wsum <= 0) throw DataError("kabsch: weights sum to zero");
  } else {
    wsum = static_cast<double>(n);
  }

  const Vec3 ca = weighted_centroid(points_a, weights, wsum);
  const Vec3 cb = weighted_centroid(points_b, weights, wsum);

  // Cross-covariance H = sum_i w_i (b_i - cb)(a_i - ca)^T and point variances.
  Mat3 h{};
  double var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights ? (*weights)[i] : 1.0;
    Vec3 a = points_a[i] - ca;
    Vec3 b = points_b[i] - cb;
    var_a += w * dot(a, a);
    var_b += w * dot(b, b);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) h[3 * r + c] += w * b[r] * a[c];
  }
  if (var_a <= 0.0 || var_b <= 0.0) throw DataError("kabsch: degenerate zero-variance point set");

  // SVD of H from the eigen-decomposition of H^T H.
  Mat3 hth = mat3_mul(mat3_transpose(h), h);
  std::array<double, 3> lam;
  Mat3 v;
  symmetric_eigen3(hth, lam, v);
  std::array<double, 3> sigma;
  for (int i = 0; i < 3; ++i) sigma[i] = std::sqrt(std::max(lam[i], 0.0));

  std::array<Vec3, 3> vcol, ucol;
  for (int c = 0; c < 3; ++c) vcol[c] = {v[c], v[3 + c], v[6 + c]};

  const double tol = 1e-12 * std::max(sigma[0], 1e-300);
  int rank = 0;
  for (int c = 0; c < 3; ++c) {
    if (sigma[c] > tol) {
      ucol[c] = (1.0 / sigma[c]) * mat3_apply(h, vcol[c]);
      ++rank;
    }
  }
  if (rank == 0) throw DataError("kabsch: degenerate zero-variance point set");
  if (rank == 1) {
    ucol[1] = any_orthogonal(ucol[0]);
    vcol[1] = any_orthogonal(vcol[0]);
  }
  if (rank <= 2) {
    ucol[2] = cross(ucol[0], ucol[1]);
    vcol[2] = cross(vcol[0], vcol[1]);
  }

  Mat3 u_m, v_m;
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) {
      u_m[3 * r + c] = ucol[c][r];
      v_m[3 * r + c] = vcol[c][r];
    }

  // R = U D V^T with D flipping the smallest singular direction when the
  // unconstrained optimum is a reflection.
  double det_uv = mat3_det(mat3_mul(u_m, mat3_transpose(v_m)));
  Mat3 d = mat3_identity();
  if (det_uv < 0) d[8] = -1.0;
  Mat3 rot = mat3_mul(u_m, mat3_mul(d, mat3_transpose(v_m)));

  RigidTransform g;
  g.rotation = rot;
  Vec3 rcb = mat3_apply(rot, cb);
  g.translation = ca - rcb;

  double se = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights ? (*weights)[i] : 1.0;
    Vec3 diff = g.apply(points_b[i]) - points_a[i];
    se += w * dot(diff, diff);
  }
  return {g, std::sqrt(std::max(se, 0.0) / wsum)};
}

namespace {

enum Move : unsigned char { kDiag = 0, kLeft = 1, kUp = 2 };

// Fills the DP table; scores[i][j] = best score aligning a[0..i) with b[0..j).
std::vector<long> nw_table(const std::string& a, const std::string& b, const AlignmentScoring& sc) {
  const std::size_t la = a.size(), lb = b.size();
  std::vector<long> dp((la + 1) * (lb + 1));
  auto at = [&](std::size_t i, std::size_t j) -> long& { return dp[i * (lb + 1) + j]; };
  for (std::size_t i = 0; i <= la; ++i) at(i, 0) = static_cast<long>(i) * sc.gap;
  for (std::size_t j = 0; j <= lb; ++j) at(0, j) = static_cast<long>(j) * sc.gap;
  for (std::size_t i = 1; i <= la; ++i) {
    for (std::size_t j = 1; j <= lb; ++j) {
      long diag = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? sc.match : sc.mismatch);
      long left = at(i, j - 1) + sc.gap;
      long up = at(i - 1, j) + sc.gap;
      at(i, j) = std::max({diag, left, up});
    }
  }
  return dp;
}

}  // namespace

long nw_score(const std::string& a, const std::string& b, const AlignmentScoring& sc) {
  if (a.empty() || b.empty()) throw DataError("needleman_wunsch: empty sequence");
  return nw_table(a, b, sc)[(a.size() + 1) * (b.size() + 1) - 1];
}

AlignmentPairing needleman_wunsch(const std::string& a, const std::string& b,
                                  const AlignmentScoring& sc) {
  if (a.empty() || b.empty()) throw DataError("needleman_wunsch: empty sequence");
  const std::size_t la = a.size(), lb = b.size();
  std::vector<long> dp = nw_table(a, b, sc);
  auto at = [&](std::size_t i, std::size_t j) { return dp[i * (lb + 1) + j]; };

  AlignmentPairing out;
  std::size_t i = la, j = lb;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? sc.match : sc.mismatch)) {
      out.pairs.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
      --i;
      --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + sc.gap) {
      --j;  // gap in A
    } else {
      --i;  // gap in B
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

double d_zero(int l_native) {
  if (l_native < 1) throw DataError("d_zero: native length must be >= 1");
  double v = 1.24 * std::cbrt(static_cast<double>(l_native) - 15.0) - 1.8;
  return std::max(0.5, v);
}

namespace {

struct PairedCoords {
  std::vector<Vec3> a, b;
};

double score_under(const RigidTransform& g, const PairedCoords& pc, double d0, int l_native,
                   std::vector<double>& dist_out) {
  const double inv_d0sq = 1.0 / (d0 * d0);
  double acc = 0.0;
  for (std::size_t i = 0; i < pc.a.size(); ++i) {
    Vec3 diff = g.apply(pc.b[i]) - pc.a[i];
    double d2 = dot(diff, diff);
    dist_out[i] = std::sqrt(d2);
    acc += 1.0 / (1.0 + d2 * inv_d0sq);
  }
  return acc / static_cast<double>(l_native);
}

}  // namespace

TmScoreResult tm_score(const ProteinRecord& sa, const ProteinRecord& sb, const TmScoreOptions& opt) {
  if (!sa.has_coords() || !sb.has_coords())
    throw DataError("tm_score: both records need coordinates ('" + sa.id + "', '" + sb.id + "')");

  AlignmentPairing pairing = needleman_wunsch(sa.sequence, sb.sequence, opt.scoring);
  const int lr = static_cast<int>(pairing.size());
  if (lr < 3)
    throw DataError("tm_score: pairing of '" + sa.id + "' and '" + sb.id + "' too short (" +
                    std::to_string(lr) + " < 3)");

  PairedCoords pc;
  pc.a.reserve(lr);
  pc.b.reserve(lr);
  for (auto [ia, ib] : pairing.pairs) {
    pc.a.push_back((*sa.ca_coords)[ia]);
    pc.b.push_back((*sb.ca_coords)[ib]);
  }

  const int l_native = static_cast<int>(sa.length());
  const double d0 = d_zero(l_native);

  // Seed window lengths: L, L/2, L/4, ... clamped at 4 (or L itself when
  // shorter).
  std::vector<int> window_lengths;
  for (int l = lr; l >= 4; l /= 2) {
    window_lengths.push_back(l);
    if (l == 4) break;
  }
  if (window_lengths.empty()) window_lengths.push_back(lr);
  if (window_lengths.back() > 4 && lr >= 4) window_lengths.push_back(4);

  double best_score = -1.0;
  RigidTransform best_g;
  std::vector<double> dist(lr);
  std::vector<Vec3> sub_a, sub_b;
  std::vector<std::size_t> subset, prev_subset;

  const int n_refine = std::max(1, opt.refine_iterations);
  for (int wl : window_lengths) {
    for (int start = 0; start + wl <= lr; ++start) {
      sub_a.assign(pc.a.begin() + start, pc.a.begin() + start + wl);
      sub_b.assign(pc.b.begin() + start, pc.b.begin() + start + wl);
      RigidTransform g;
      try {
        g = kabsch(sub_a, sub_b).transform;
      } catch (const DataError&) {
        continue;  // degenerate window
      }
      double s = score_under(g, pc, d0, l_native, dist);
      if (s > best_score) {
        best_score = s;
        best_g = g;
      }
      prev_subset.clear();
      for (int it = 0; it < n_refine; ++it) {
        // Cutoff shrinks linearly from start_cutoff toward d0.
        double frac = n_refine > 1 ? static_cast<double>(it) / (n_refine - 1) : 1.0;
        double cutoff = opt.start_cutoff + (d0 - opt.start_cutoff) * frac;
        subset.clear();
        for (int i = 0; i < lr; ++i)
          if (dist[i] < cutoff) subset.push_back(i);
        while (subset.size() < 3) {
          cutoff += 0.5;
          subset.clear();
          for (int i = 0; i < lr; ++i)
            if (dist[i] < cutoff) subset.push_back(i);
          if (cutoff > 1e6) break;
        }
        if (subset.size() < 3) break;
        if (subset == prev_subset) continue;
        prev_subset = subset;
        sub_a.clear();
        sub_b.clear();
        for (std::size_t i : subset) {
          sub_a.push_back(pc.a[i]);
          sub_b.push_back(pc.b[i]);
        }
        try {
          g = kabsch(sub_a, sub_b).transform;
        } catch (const DataError&) {
          break;
        }
        s = score_under(g, pc, d0, l_native, dist);
        if (s > best_score) {
          best_score = s;
          best_g = g;
        }
      }
    }
  }

  TmScoreResult result;
  result.score = best_score;
  result.transform = best_g;
  result.pairing = std::move(pairing);
  result.l_native = l_native;
  result.d0 = d0;
  return result;
}

}  // namespace glp
