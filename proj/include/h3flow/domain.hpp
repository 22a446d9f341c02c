#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "h3flow/group.hpp"
#include "h3flow/vec.hpp"

namespace h3flow {

/// Region { p : normal . p <= offset }. `normal` must be a unit vector so
/// that signed distances are Euclidean.
struct HalfSpace {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;
};

/// Hemisphere centred on the boundary plane r = 0. The region is the
/// closed exterior (`outside`) or interior of the sphere.
struct Hemisphere {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  bool outside = true;
};

using Constraint = std::variant<HalfSpace, Hemisphere>;

/// Positive outside the region, negative inside, zero on the face.
double signed_distance(const Constraint& c, const Vec3& p);
/// Nearest point of the face surface to p.
Vec3 project_to_face(const Constraint& c, const Vec3& p);

/// Euclidean isometry x -> L x + shift.
struct AffineIsometry {
  std::array<Vec3, 3> linear{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  Vec3 shift{0.0, 0.0, 0.0};

  static AffineIsometry translation(const Vec3& t);
  Vec3 apply(const Vec3& p) const;
  Vec3 apply_linear(const Vec3& v) const;
};

AffineIsometry compose(const AffineIsometry& outer, const AffineIsometry& inner);
AffineIsometry inverse(const AffineIsometry& T);

/// Side-pairing transformation: a Moebius map of upper half-space or a
/// Euclidean isometry, acting on (x, y, r) resp. (x1, x2, x3).
using SideMap = std::variant<MoebiusMap, AffineIsometry>;

Vec3 apply(const SideMap& m, const Vec3& p);
/// Differential of the side map at p applied to v.
Vec3 push_vector(const SideMap& m, const Vec3& p, const Vec3& v);
SideMap inverse(const SideMap& m);
/// m o n is the identity (Moebius maps up to scalar).
bool is_inverse_pair(const SideMap& m, const SideMap& n, double tol = 1e-9);

enum class Geometry { euclidean, upper_half_space };

/// One labelled face. `map` is tau_s: it carries the partner face S' onto
/// this face S, so leaving the region through S continues through the
/// partner's map tau_{s'} = tau_s^-1.
struct Side {
  std::string label;
  Constraint constraint;
  std::string partner;
  SideMap map;
  /// Optional group-word label of `map` (e.g. "T3^-1 T2").
  std::string word;
};

/// Convex region cut out by its side constraints (plus r > 0 in upper
/// half-space), with the side-pairing table.
struct FundamentalDomain {
  Geometry geometry = Geometry::euclidean;
  std::vector<Side> sides;
  /// Box used to sample face points and to draw outlines: lo, hi corners.
  Vec3 box_lo{-1.0, -1.0, -1.0};
  Vec3 box_hi{1.0, 1.0, 1.0};
  /// Optional outline polygon (closed loop) for portraits.
  std::vector<Vec3> outline;

  /// Closure membership with slack `tol`.
  bool contains(const Vec3& p, double tol = 1e-9) const;
  /// Largest constraint violation (<= 0 inside).
  double violation(const Vec3& p) const;
  std::size_t side_index(const std::string& label) const;
  const Side& side(const std::string& label) const { return sides[side_index(label)]; }
  const Side& partner_of(const Side& s) const { return side(s.partner); }

  /// Points on face `side` that lie in the closure of the region. The
  /// sampler is deterministic for a given seed.
  std::vector<Vec3> sample_face(std::size_t side, std::size_t count,
                                std::uint64_t seed) const;
};

struct Violation {
  int condition = 0;  // 1: face image, 2: inverse relation, 3: bijection
  std::string side;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t sides_checked = 0;
  std::size_t points_checked = 0;

  bool ok() const { return violations.empty(); }
  std::string to_text() const;
};

/// Side-pairing conditions: (1) tau_s maps sampled points of S' onto S and
/// into the closure, (2) tau_{s'} = tau_s^-1, (3) the pairing is a
/// bijection of sides (partner(partner(s)) = s, every side covered once).
ValidationReport validate_side_pairing(const FundamentalDomain& D,
                                       std::size_t samples_per_face = 100,
                                       std::uint64_t seed = 1,
                                       double tol = 1e-9);

struct Located {
  std::size_t entry = 0;  // index into the ball
  GroupWord word;
  HPoint base;  // point of closure(D) with word(base) = p
};

/// Finds the first ball element (canonical order) whose inverse carries p
/// into closure(D). Throws NotFoundError if the ball is too small.
Located locate(const HPoint& p, const FundamentalDomain& D, const WordBall& ball,
               double tol = 1e-9);

/// [lo, hi]^3 with opposite faces paired by translations.
FundamentalDomain cube_torus(double lo, double hi);

/// Vertical slab lo <= x <= hi in upper half-space, faces paired by the
/// translation p -> p + (hi - lo). Labels "left" and "right".
FundamentalDomain translation_slab(double lo, double hi);

}  // namespace h3flow
