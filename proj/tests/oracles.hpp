#pragma once

// Test-only reference computations. Nothing here calls into the library's
// math; rotations, products and the gradient formula are rebuilt from plain
// arrays so the tests check the implementation against a separate route.

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

/// Rodrigues' formula for a rotation of `angle` about the unit `axis`.
inline Mat3 axis_angle(const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
           {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
           {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

inline Mat3 rot_x(double a) { return axis_angle({1, 0, 0}, a); }
inline Mat3 rot_y(double a) { return axis_angle({0, 1, 0}, a); }

inline Vec3 mul(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

inline double det(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Mat3 inverse(const Mat3& m) {
  const double d = det(m);
  Mat3 inv{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
    }
  }
  return inv;
}

/// Polar factor by Newton iteration X <- (X + X^-T) / 2. Independent of any SVD.
inline Mat3 nearest_rotation_newton(Mat3 x) {
  for (int it = 0; it < 50; ++it) {
    const Mat3 inv_t = transpose(inverse(x));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x[i][j] = 0.5 * (x[i][j] + inv_t[i][j]);
  }
  return x;
}

inline double orthonormality_residual(const Mat3& r) {
  const Mat3 rtr = mul(transpose(r), r);
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double e = rtr[i][j] - (i == j ? 1.0 : 0.0);
      s += e * e;
    }
  return std::sqrt(s);
}

/// Gradient from the two rotations, written as asin(n . d), which equals
/// pi/2 - acos(n . d) on [-1, 1].
inline double gradient(const Mat3& prev, const Mat3& curr, double theta_0) {
  const Vec3 n = mul(prev, Vec3{0.0, -std::cos(theta_0), -std::sin(theta_0)});
  const Vec3 d = mul(curr, Vec3{0.0, 0.0, 1.0});
  const double dot = n[0] * d[0] + n[1] * d[1] + n[2] * d[2];
  return std::asin(std::fmax(-1.0, std::fmin(1.0, dot)));
}

/// Exact pinhole projection of a point (camera frame, y down) to an image row.
inline double project_row(double c_y, double focal_px, double y, double z) {
  return c_y + focal_px * y / z;
}

}  // namespace oracle
