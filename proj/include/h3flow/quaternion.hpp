#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>

namespace h3flow {

using Complex = std::complex<double>;

/// Absolute/relative comparison slack used throughout the library.
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;

  bool close(double a, double b) const {
    return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
  }
};

/// Hamilton quaternion w + x i + y j + z k.
///
/// Complex numbers are the quaternions with y = z = 0, and points of
/// upper half-space z + r j are the quaternions with z = 0, so one
/// arithmetic kernel covers the coefficient algebra and the point algebra.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0,
                       double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion from_complex(Complex c) {
    return {c.real(), c.imag(), 0.0, 0.0};
  }

  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  bool is_zero() const { return w == 0.0 && x == 0.0 && y == 0.0 && z == 0.0; }
  bool is_finite() const {
    return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) &&
           std::isfinite(z);
  }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline constexpr Quaternion kOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion kI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

/// Noncommutative Hamilton product.
constexpr Quaternion mul(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return mul(a, b);
}
constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// conj(q) / |q|^2. Throws DomainError for q = 0.
Quaternion inv(const Quaternion& q);

/// q^k for any integer k; k < 0 requires q != 0.
Quaternion pow_int(const Quaternion& q, int k);

bool approx_equal(const Quaternion& a, const Quaternion& b,
                  const Tolerance& tol = {});

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// A point x + y i + r j of closed upper half-space (r >= 0).
struct HPoint {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  bool interior() const { return r > 0.0; }
  bool on_boundary() const { return r == 0.0; }
  constexpr Quaternion to_quaternion() const { return {x, y, r, 0.0}; }
  Complex z() const { return {x, y}; }

  friend bool operator==(const HPoint&, const HPoint&) = default;
};

/// Drops the k-component. Callers that care check it first.
constexpr HPoint to_hpoint(const Quaternion& q) { return {q.w, q.x, q.y}; }

}  // namespace h3flow
