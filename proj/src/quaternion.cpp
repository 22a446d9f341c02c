#include "h3flow/quaternion.hpp"

#include <ostream>

#include "h3flow/errors.hpp"

namespace h3flow {

Quaternion inv(const Quaternion& q) {
  const double n2 = q.norm2();
  if (n2 == 0.0) throw DomainError("inverse of the zero quaternion");
  return q.conj() * (1.0 / n2);
}

Quaternion pow_int(const Quaternion& q, int k) {
  if (k < 0) {
    if (q.is_zero()) throw DomainError("negative power of the zero quaternion");
    return pow_int(inv(q), -k);
  }
  // q commutes with its own powers, so square-and-multiply is exact algebra.
  Quaternion result = kOne;
  Quaternion base = q;
  unsigned e = static_cast<unsigned>(k);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

bool approx_equal(const Quaternion& a, const Quaternion& b, const Tolerance& tol) {
  const double diff = (a - b).norm();
  return diff <= tol.abs + tol.rel * std::max(a.norm(), b.norm());
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << "i, " << q.y << "j, " << q.z << "k)";
}

}  // namespace h3flow
