// Copyright 2026 The su2hjb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Closed-form SU(2) arithmetic on the chart U = exp(-i (a I_x + b I_y + c I_z)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace su2hjb {

using Complex = std::complex<double>;

//! Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

inline Matrix2 multiply(const Matrix2& m, const Matrix2& n) {
  return {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
          m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
}

inline Matrix2 subtract(const Matrix2& m, const Matrix2& n) {
  return {m[0] - n[0], m[1] - n[1], m[2] - n[2], m[3] - n[3]};
}

inline Matrix2 scale(Complex s, const Matrix2& m) {
  return {s * m[0], s * m[1], s * m[2], s * m[3]};
}

inline Matrix2 conjugate_transpose(const Matrix2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

inline double frobenius_norm(const Matrix2& m) {
  return std::sqrt(std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) +
                   std::norm(m[3]));
}

inline Complex trace(const Matrix2& m) { return m[0] + m[3]; }
inline Complex determinant(const Matrix2& m) { return m[0] * m[3] - m[1] * m[2]; }

enum class Axis { kX = 0, kY = 1, kZ = 2 };

//! I_k = sigma_k / 2.
inline Matrix2 generator(Axis axis) {
  constexpr Complex i{0.0, 1.0};
  switch (axis) {
    case Axis::kX: return {0.0, 0.5, 0.5, 0.0};
    case Axis::kY: return {0.0, -0.5 * i, 0.5 * i, 0.0};
    case Axis::kZ: return {0.5, 0.0, 0.0, -0.5};
  }
  return {};
}

//! Coefficients (a, b, c) of a I_x + b I_y + c I_z.
struct AlgebraElement {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double& operator[](int k) { return k == 0 ? a : (k == 1 ? b : c); }
  double operator[](int k) const { return k == 0 ? a : (k == 1 ? b : c); }

  double norm() const { return std::sqrt(a * a + b * b + c * c); }

  friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c};
  }
  friend AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c};
  }
  friend AlgebraElement operator*(double s, const AlgebraElement& x) {
    return {s * x.a, s * x.b, s * x.c};
  }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

inline double dot(const AlgebraElement& x, const AlgebraElement& y) {
  return x.a * y.a + x.b * y.b + x.c * y.c;
}

inline AlgebraElement cross(const AlgebraElement& x, const AlgebraElement& y) {
  return {x.b * y.c - x.c * y.b, x.c * y.a - x.a * y.c, x.a * y.b - x.b * y.a};
}

//! a I_x + b I_y + c I_z as a Hermitian matrix.
inline Matrix2 to_matrix(const AlgebraElement& x) {
  constexpr Complex i{0.0, 1.0};
  return {0.5 * x.c, 0.5 * (x.a - i * x.b), 0.5 * (x.a + i * x.b), -0.5 * x.c};
}

//! 2x2 special unitary matrix. Construction does not validate; see
//! unitarity_defect() and is_special_unitary().
class GroupElement {
 public:
  GroupElement() : m_{1.0, 0.0, 0.0, 1.0} {}
  explicit GroupElement(const Matrix2& m) : m_(m) {}

  static GroupElement identity() { return GroupElement(); }

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_[2 * row + col]; }

  GroupElement adjoint() const { return GroupElement(conjugate_transpose(m_)); }

  //! max(|U U^dagger - I|_F, |det U - 1|).
  double unitarity_defect() const {
    const Matrix2 gram = multiply(m_, conjugate_transpose(m_));
    const double unitary = frobenius_norm(subtract(gram, {1.0, 0.0, 0.0, 1.0}));
    return std::max(unitary, std::abs(determinant(m_) - 1.0));
  }

  bool is_special_unitary(double tol = 1e-12) const {
    return unitarity_defect() <= tol;
  }

  friend GroupElement operator*(const GroupElement& u, const GroupElement& w) {
    return GroupElement(multiply(u.m_, w.m_));
  }

  friend GroupElement operator-(const GroupElement& u) {
    return GroupElement(scale(-1.0, u.m_));
  }

 private:
  Matrix2 m_;
};

inline GroupElement compose(const GroupElement& u, const GroupElement& w) { return u * w; }

//! sin(r/2)/r, continuous at r = 0.
inline double half_sinc(double r) {
  if (r < 1e-4) return 0.5 - r * r / 48.0;
  return std::sin(0.5 * r) / r;
}

//! exp(-i (a I_x + b I_y + c I_z)) = cos(r/2) I - i sin(r/2)/r (a sx + b sy + c sz).
inline GroupElement exp_map(const AlgebraElement& x) {
  const double r = x.norm();
  const double cs = std::cos(0.5 * r);
  const double s = half_sinc(r);
  // -i s (x . sigma)
  const Complex m00{cs, -s * x.c};
  const Complex m01{-s * x.b, -s * x.a};
  const Complex m10{s * x.b, -s * x.a};
  const Complex m11{cs, s * x.c};
  return GroupElement({m00, m01, m10, m11});
}

//! exp(-i angle I_axis).
inline GroupElement axis_rotation(Axis axis, double angle) {
  AlgebraElement x;
  x[static_cast<int>(axis)] = angle;
  return exp_map(x);
}

struct ChartLog {
  AlgebraElement point;
  //! U was -I within tolerance; point is the canonical (2 pi, 0, 0).
  bool at_branch_singularity = false;
};

//! Principal chart representative with r in [0, 2 pi].
inline ChartLog log_map(const GroupElement& u, double branch_tol = 1e-10) {
  const Matrix2& m = u.matrix();
  const double cs = 0.5 * (m[0] + m[3]).real();
  // sin(r/2) n, averaged over the redundant entries.
  const AlgebraElement sn{-0.5 * (m[1] + m[2]).imag(), 0.5 * (m[2] - m[1]).real(),
                          -0.5 * (m[0] - m[3]).imag()};
  const double s = sn.norm();
  if (cs < 0.0 && s <= branch_tol) {
    return {{2.0 * std::numbers::pi, 0.0, 0.0}, true};
  }
  const double half_r = std::atan2(s, cs);
  const double r = 2.0 * half_r;
  // x = (r / sin(r/2)) sn; the factor tends to 2 at the identity.
  const double factor = s > 0.0 ? r / s : 2.0;
  return {factor * sn, false};
}

//! Frobenius norm of U - W.
inline double group_distance(const GroupElement& u, const GroupElement& w) {
  return frobenius_norm(subtract(u.matrix(), w.matrix()));
}

}  // namespace su2hjb
