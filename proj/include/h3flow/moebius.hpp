#pragma once

#include <string>

#include "h3flow/quaternion.hpp"
#include "h3flow/vec.hpp"

namespace h3flow {

/// Linear fractional map p -> (a p + b)(c p + d)^-1 with complex entries.
///
/// The matrix is stored exactly as given; it is not projectivised. Group
/// words compose these literal matrices, so determinants multiply.
struct MoebiusMap {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  Complex c{0.0, 0.0};
  Complex d{1.0, 0.0};

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }

  static MoebiusMap identity() { return {}; }
  static MoebiusMap translation(Complex t) { return {1.0, t, 0.0, 1.0}; }
};

enum class TransformClass { identity, parabolic, hyperbolic, elliptic, loxodromic };

std::string to_string(TransformClass k);

/// A point of closed upper half-space or the point at infinity.
struct ExtPoint {
  HPoint p{};
  bool infinite = false;

  static ExtPoint infinity() { return {HPoint{}, true}; }
  static ExtPoint at(HPoint q) { return {q, false}; }
};

/// det = 1 representative; sign chosen so that the first entry with
/// modulus above tol has argument in [0, pi).
MoebiusMap normalize(const MoebiusMap& T, double tol = 1e-12);

/// Action on extended upper half-space, computed with quaternion
/// arithmetic on the det-1 representative. c p + d = 0 yields infinity.
ExtPoint apply(const MoebiusMap& T, const ExtPoint& p);

/// Action on an interior point (never infinite). Throws DomainError if p
/// is not interior.
HPoint apply(const MoebiusMap& T, const HPoint& p);

/// Raw quaternion (a p + b)(c p + d)^-1 without normalisation; exposes the
/// k-component so callers can inspect closure.
Quaternion apply_quaternion(const MoebiusMap& T, const Quaternion& p);

MoebiusMap compose(const MoebiusMap& outer, const MoebiusMap& inner);

/// Matrix inverse adj(T) / det(T); a scalar multiple of ((d,-b),(-c,a)).
MoebiusMap inverse(const MoebiusMap& T);

TransformClass classify(const MoebiusMap& T, double tol = 1e-9);

/// (ad - bc) * (c p + d)^-2, the automorphy multiplier F(T p) = factor * F(p).
/// Throws PoleError when c p + d = 0.
Quaternion derivative_factor(const MoebiusMap& T, const HPoint& p);

/// Differential of the action at p applied to a tangent vector v, exact:
/// dT_p(v) = (a - T(p) c) v (c p + d)^-1 on the det-1 representative.
Vec3 differential(const MoebiusMap& T, const HPoint& p, const Vec3& v);

/// Matrices agree up to a nonzero complex scalar.
bool equal_up_to_scalar(const MoebiusMap& S, const MoebiusMap& T,
                        double tol = 1e-9);

}  // namespace h3flow
