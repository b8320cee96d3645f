#include "glp/geom.hpp"

#include <algorithm>
#include <cmath>

namespace glp {

Mat3 axis_angle_rotation(const Vec3& axis, double angle) {
  double n = norm(axis);
  Vec3 u = (n > 0) ? (1.0 / n) * axis : Vec3{0, 0, 1};
  double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return {c + u[0] * u[0] * t,        u[0] * u[1] * t - u[2] * s, u[0] * u[2] * t + u[1] * s,
          u[1] * u[0] * t + u[2] * s, c + u[1] * u[1] * t,        u[1] * u[2] * t - u[0] * s,
          u[2] * u[0] * t - u[1] * s, u[2] * u[1] * t + u[0] * s, c + u[2] * u[2] * t};
}

void symmetric_eigen3(const Mat3& m, std::array<double, 3>& eigenvalues, Mat3& eigenvectors) {
  // Cyclic Jacobi sweeps; a 3x3 converges in a handful of rotations.
  Mat3 a = m;
  Mat3 v = mat3_identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[1]) + std::abs(a[2]) + std::abs(a[5]);
    if (off < 1e-300) break;
    double scale = std::abs(a[0]) + std::abs(a[4]) + std::abs(a[8]);
    if (scale > 0 && off <= 1e-15 * scale) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        double apq = a[3 * p + q];
        if (apq == 0.0) continue;
        double app = a[3 * p + p], aqq = a[3 * q + q];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        // A <- J^T A J with the (p,q) Givens rotation J.
        for (int k = 0; k < 3; ++k) {
          double akp = a[3 * k + p], akq = a[3 * k + q];
          a[3 * k + p] = c * akp - s * akq;
          a[3 * k + q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          double apk = a[3 * p + k], aqk = a[3 * q + k];
          a[3 * p + k] = c * apk - s * aqk;
          a[3 * q + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          double vkp = v[3 * k + p], vkq = v[3 * k + q];
          v[3 * k + p] = c * vkp - s * vkq;
          v[3 * k + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::array<double, 3> diag{a[0], a[4], a[8]};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });
  Mat3 sorted_v;
  for (int c = 0; c < 3; ++c) {
    eigenvalues[c] = diag[order[c]];
    for (int r = 0; r < 3; ++r) sorted_v[3 * r + c] = v[3 * r + order[c]];
  }
  eigenvectors = sorted_v;
}

std::vector<Vec3> apply_transform(const RigidTransform& g, const std::vector<Vec3>& pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec3& p : pts) out.push_back(g.apply(p));
  return out;
}

}  // namespace glp
