#pragma once

/**
 * Quaternion algebra H = span{1, i, j, k} with i^2 = j^2 = k^2 = ijk = -1.
 *
 * Values are four real components q = x0 + x1 i + x2 j + x3 k. The
 * symplectic view q = z0 + z1 j (z0 = x0 + x1 i, z1 = x2 + x3 i) is a
 * conversion only; complex numbers are the subalgebra span{1, i}.
 *
 * Multiplication is associative but not commutative.
 */

#include <cmath>
#include <complex>
#include <utility>

namespace qqm {

using Complex = std::complex<double>;

struct Quaternion {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double a, double b = 0.0, double c = 0.0, double d = 0.0)
      : x0(a), x1(b), x2(c), x3(d) {}

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  /// Embeds a complex number as z.real() + z.imag() i.
  static constexpr Quaternion from_complex(Complex z) { return {z.real(), z.imag(), 0.0, 0.0}; }

  constexpr double real() const { return x0; }
  constexpr Quaternion imag() const { return {0.0, x1, x2, x3}; }

  constexpr double operator[](int c) const {
    return c == 0 ? x0 : c == 1 ? x1 : c == 2 ? x2 : x3;
  }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    x0 += o.x0;
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    x0 -= o.x0;
    x1 -= o.x1;
    x2 -= o.x2;
    x3 -= o.x3;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    x0 *= s;
    x1 *= s;
    x2 *= s;
    x3 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.x0, -a.x1, -a.x2, -a.x3}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product.
constexpr Quaternion multiply(const Quaternion& p, const Quaternion& q) {
  return {p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
          p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
          p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
          p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return multiply(p, q); }

constexpr Quaternion conj(const Quaternion& q) { return {q.x0, -q.x1, -q.x2, -q.x3}; }

/// |q|^2 = q conj(q), always real and nonnegative.
constexpr double norm2(const Quaternion& q) {
  return q.x0 * q.x0 + q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3;
}

inline double abs(const Quaternion& q) { return std::sqrt(norm2(q)); }

/// Re[p conj(q)], the pointwise integrand of the real inner product.
constexpr double real_dot(const Quaternion& p, const Quaternion& q) {
  return p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3;
}

inline Quaternion inverse(const Quaternion& q) { return conj(q) / norm2(q); }

/// Largest absolute component difference.
inline double max_abs_diff(const Quaternion& a, const Quaternion& b) {
  const Quaternion d = a - b;
  return std::fmax(std::fmax(std::fabs(d.x0), std::fabs(d.x1)),
                   std::fmax(std::fabs(d.x2), std::fabs(d.x3)));
}

inline bool approx_equal(const Quaternion& a, const Quaternion& b, double abs_tol = 1e-12,
                         double rel_tol = 0.0) {
  const double scale = std::fmax(abs(a), abs(b));
  return abs(a - b) <= abs_tol + rel_tol * scale;
}

// Symplectic view --------------------------------------------------------

struct Symplectic {
  Complex z0;
  Complex z1;
};

/// q = z0 + z1 j with z0 = x0 + x1 i and z1 = x2 + x3 i.
constexpr Symplectic symplectic_split(const Quaternion& q) {
  return {Complex{q.x0, q.x1}, Complex{q.x2, q.x3}};
}

constexpr Quaternion symplectic_join(Complex z0, Complex z1) {
  return {z0.real(), z0.imag(), z1.real(), z1.imag()};
}

constexpr Quaternion symplectic_join(const Symplectic& s) { return symplectic_join(s.z0, s.z1); }

// Unit quaternions ---------------------------------------------------------

/// Angles of Λ(θ, φ, ξ) = cosθ e^{iφ} + sinθ e^{iξ} j.
struct UnitQuaternion {
  double theta = 0.0;
  double phi = 0.0;
  double xi = 0.0;
};

inline Quaternion realize(const UnitQuaternion& u) {
  const double c = std::cos(u.theta);
  const double s = std::sin(u.theta);
  return {c * std::cos(u.phi), c * std::sin(u.phi), s * std::cos(u.xi), s * std::sin(u.xi)};
}

/**
 * Closed form cosθcosθ'cos(φ−φ') + sinθsinθ'cos(ξ−ξ').
 *
 * This is Re[Λ conj(Λ')]; the unconjugated product Re[ΛΛ'] evaluates to
 * cosθcosθ'cos(φ+φ') − sinθsinθ'cos(ξ−ξ') instead.
 */
inline double re_product_identity(const UnitQuaternion& u, const UnitQuaternion& v) {
  return std::cos(u.theta) * std::cos(v.theta) * std::cos(u.phi - v.phi) +
         std::sin(u.theta) * std::sin(v.theta) * std::cos(u.xi - v.xi);
}

/// Componentwise angle sum u ⊕ v.
constexpr UnitQuaternion add_angles(const UnitQuaternion& u, const UnitQuaternion& v) {
  return {u.theta + v.theta, u.phi + v.phi, u.xi + v.xi};
}

/// realize(u) * realize(v).
inline Quaternion compose_unitaries(const UnitQuaternion& u, const UnitQuaternion& v) {
  return realize(u) * realize(v);
}

/// |realize(u) realize(v) − realize(u ⊕ v)|; zero when the angles compose additively.
inline double angle_additivity_deviation(const UnitQuaternion& u, const UnitQuaternion& v) {
  return abs(compose_unitaries(u, v) - realize(add_angles(u, v)));
}

/// |[realize(u), realize(v)]|.
inline double commutator_norm(const UnitQuaternion& u, const UnitQuaternion& v) {
  const Quaternion a = realize(u);
  const Quaternion b = realize(v);
  return abs(a * b - b * a);
}

}  // namespace qqm
