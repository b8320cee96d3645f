#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace glp {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;  // row-major

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Mat3 mat3_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
          m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
  return c;
}

inline Mat3 mat3_transpose(const Mat3& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

inline double mat3_det(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = mat3_identity();
  Vec3 translation{0, 0, 0};

  Vec3 apply(const Vec3& v) const { return mat3_apply(rotation, v) + translation; }

  RigidTransform inverse() const {
    Mat3 rt = mat3_transpose(rotation);
    Vec3 t = mat3_apply(rt, translation);
    return {rt, {-t[0], -t[1], -t[2]}};
  }

  // ||R^T R - I||_max and |det R - 1|, for invariant checks.
  double orthogonality_error() const;
  double det_error() const { return std::abs(mat3_det(rotation) - 1.0); }
};

inline double RigidTransform::orthogonality_error() const {
  Mat3 g = mat3_mul(mat3_transpose(rotation), rotation);
  double err = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double target = (i == j) ? 1.0 : 0.0;
      err = std::max(err, std::abs(g[3 * i + j] - target));
    }
  return err;
}

// Rotation about a unit axis by angle (radians), Rodrigues form.
Mat3 axis_angle_rotation(const Vec3& axis, double angle);

// Jacobi eigendecomposition of a symmetric 3x3 matrix. Eigenvalues are
// returned in descending order with matching unit eigenvectors (columns of
// the returned matrix).
void symmetric_eigen3(const Mat3& m, std::array<double, 3>& eigenvalues, Mat3& eigenvectors);

std::vector<Vec3> apply_transform(const RigidTransform& g, const std::vector<Vec3>& pts);

}  // namespace glp
