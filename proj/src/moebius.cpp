#include "h3flow/moebius.hpp"

#include <numbers>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

Quaternion q(Complex c) { return Quaternion::from_complex(c); }

double sup_norm(const MoebiusMap& T) {
  return std::max({std::abs(T.a), std::abs(T.b), std::abs(T.c), std::abs(T.d)});
}

}  // namespace

std::string to_string(TransformClass k) {
  switch (k) {
    case TransformClass::identity: return "identity";
    case TransformClass::parabolic: return "parabolic";
    case TransformClass::hyperbolic: return "hyperbolic";
    case TransformClass::elliptic: return "elliptic";
    case TransformClass::loxodromic: return "loxodromic";
  }
  return "unknown";
}

MoebiusMap normalize(const MoebiusMap& T, double tol) {
  const Complex det = T.det();
  if (det == Complex{}) throw DomainError("Moebius map with zero determinant");
  const Complex s = 1.0 / std::sqrt(det);
  MoebiusMap N{T.a * s, T.b * s, T.c * s, T.d * s};
  for (const Complex* e : {&N.a, &N.b, &N.c, &N.d}) {
    if (std::abs(*e) <= tol) continue;
    const double arg = std::arg(*e);
    if (arg < 0.0 || arg >= std::numbers::pi) {
      N = {-N.a, -N.b, -N.c, -N.d};
    }
    break;
  }
  return N;
}

Quaternion apply_quaternion(const MoebiusMap& T, const Quaternion& p) {
  return (q(T.a) * p + q(T.b)) * inv(q(T.c) * p + q(T.d));
}

ExtPoint apply(const MoebiusMap& T, const ExtPoint& p) {
  const MoebiusMap N = normalize(T);
  if (p.infinite) {
    if (N.c == Complex{}) return ExtPoint::infinity();
    const Complex w = N.a / N.c;
    return ExtPoint::at({w.real(), w.imag(), 0.0});
  }
  const Quaternion pq = p.p.to_quaternion();
  const Quaternion den = q(N.c) * pq + q(N.d);
  if (den.is_zero()) return ExtPoint::infinity();
  return ExtPoint::at(to_hpoint((q(N.a) * pq + q(N.b)) * inv(den)));
}

HPoint apply(const MoebiusMap& T, const HPoint& p) {
  if (!p.interior()) throw DomainError("apply: point is not interior");
  return apply(T, ExtPoint::at(p)).p;
}

MoebiusMap compose(const MoebiusMap& S, const MoebiusMap& T) {
  return {S.a * T.a + S.b * T.c, S.a * T.b + S.b * T.d,
          S.c * T.a + S.d * T.c, S.c * T.b + S.d * T.d};
}

MoebiusMap inverse(const MoebiusMap& T) {
  const Complex det = T.det();
  if (det == Complex{}) throw DomainError("inverse of a singular Moebius map");
  return {T.d / det, -T.b / det, -T.c / det, T.a / det};
}

TransformClass classify(const MoebiusMap& T, double tol) {
  const MoebiusMap N = normalize(T);
  const double scale = std::max(1.0, sup_norm(N));
  if (std::abs(N.b) <= tol * scale && std::abs(N.c) <= tol * scale &&
      std::abs(N.a - N.d) <= tol * scale) {
    return TransformClass::identity;
  }
  const Complex tr = N.trace();
  if (std::abs(tr.imag()) > tol * std::max(1.0, std::abs(tr))) {
    return TransformClass::loxodromic;
  }
  const double t = std::abs(tr.real());
  if (std::abs(t - 2.0) <= tol * 2.0) return TransformClass::parabolic;
  return t > 2.0 ? TransformClass::hyperbolic : TransformClass::elliptic;
}

Quaternion derivative_factor(const MoebiusMap& T, const HPoint& p) {
  const Quaternion den = q(T.c) * p.to_quaternion() + q(T.d);
  if (den.is_zero()) throw PoleError("derivative_factor: c p + d = 0");
  return q(T.det()) * pow_int(den, -2);
}

Vec3 differential(const MoebiusMap& T, const HPoint& p, const Vec3& v) {
  const MoebiusMap N = normalize(T);
  const Quaternion pq = p.to_quaternion();
  const Quaternion den = q(N.c) * pq + q(N.d);
  if (den.is_zero()) throw PoleError("differential: c p + d = 0");
  const Quaternion den_inv = inv(den);
  const Quaternion image = (q(N.a) * pq + q(N.b)) * den_inv;
  const Quaternion out =
      (q(N.a) - image * q(N.c)) * Quaternion{v[0], v[1], v[2], 0.0} * den_inv;
  return {out.w, out.x, out.y};
}

bool equal_up_to_scalar(const MoebiusMap& S, const MoebiusMap& T, double tol) {
  // Rank-one test on the 4-vectors: S = lambda T iff all 2x2 minors vanish.
  const Complex s[4] = {S.a, S.b, S.c, S.d};
  const Complex t[4] = {T.a, T.b, T.c, T.d};
  const double scale = sup_norm(S) * sup_norm(T);
  if (scale == 0.0) return false;
  for (int i = 0; i < 4; ++i) {
    for (int k = i + 1; k < 4; ++k) {
      if (std::abs(s[i] * t[k] - s[k] * t[i]) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace h3flow
