#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "h3flow/vec.hpp"

namespace h3flow {

struct PlanarField {
  std::function<Vec2(const Vec2&)> eval;
  /// Doubly 2 pi periodic.
  bool periodic = false;

  Vec2 operator()(const Vec2& x) const { return eval(x); }
};

/// Gradient of cos u + cos v: (-sin u, -sin v). Sink (0,0), source (pi,pi),
/// saddles (0,pi) and (pi,0).
PlanarField torus_field();

/// Same field with arrows reversed.
PlanarField reversed(const PlanarField& f);

enum class EquilibriumKind { sink, source, saddle, center, degenerate };
std::string to_string(EquilibriumKind k);

struct Equilibrium {
  Vec2 point{};
  EquilibriumKind kind = EquilibriumKind::degenerate;
};

/// Newton refinement from the local minima of |f| on an n x n grid over
/// [lo, hi]. Periodic fields are reduced to [0, 2 pi)^2 and deduplicated
/// modulo the period. Sorted by (u, v).
std::vector<Equilibrium> find_equilibria(const PlanarField& f, const Vec2& lo, const Vec2& hi,
                                         int n = 64);

/// Winding number of f along the circle |x - e| = radius, from the
/// accumulated turning angle over at least `samples` points (refined where
/// the direction turns fast). Throws DomainError if f vanishes on the circle.
int equilibrium_index(const PlanarField& f, const Vec2& e, double radius, int samples = 720);

/// Reeb leaf in the solid torus D^2 x S^1. A plane point at polar radius s
/// and angle a sits at disk radius rho with profile(rho) = s, disk angle a,
/// and circle coordinate s mod 2 pi.
struct LeafChart {
  /// tan(pi r^2 / 2).
  static double profile(double r);
  static double inverse_profile(double s);
};

struct SolidTorusPoint {
  double rho = 0.0;    // radius in the meridian disk, [0, 1)
  double alpha = 0.0;  // angle in the meridian disk
  double phi = 0.0;    // position along the core circle, [0, 2 pi)

  /// Standard embedding in R^3 with core radius `major`.
  Vec3 cartesian(double major = 2.0) const;
};

SolidTorusPoint leaf_embed(const LeafChart& chart, double u, double v);

/// Plane point of band k (k >= 1) carrying torus coordinates (a, b):
/// polar angle a, polar radius 2 pi k + b.
Vec2 band_point(int k, double a, double b);

/// Marked point on the boundary torus where the band sources accumulate.
SolidTorusPoint marked_point();

/// Planar field on a Reeb leaf: a copy of `base` on every band
/// 2 pi k <= s < 2 pi (k + 1), k >= 1, pushed forward by polar coordinates,
/// and a radial source filling the disk s < 2 pi, joined by a smooth step
/// of width 0.1 * 2 pi ending at 0.95 * 2 pi.
PlanarField leaf_system(const PlanarField& base, const LeafChart& chart = {});

/// Equilibria of leaf_system(torus_field()) in bands 1..bands plus the
/// origin, from the band construction.
std::vector<Equilibrium> leaf_equilibria(int bands = 5);

/// Genus-2 boundary system: two punctured tori joined by a neck.
struct Genus2System {
  PlanarField torus1;  // sys1 with a radial sink blended in around hole1
  PlanarField torus2;  // reversed sys1 with a radial source around hole2
  Vec2 hole1{};
  Vec2 hole2{};
  double radius = 0.5;
  /// Neck coordinates (tau in [0, 1] from torus 1 to torus 2, angle beta).
  std::function<Vec2(double tau, double beta)> neck;
  /// Labelled points of the singular invariant line through the leaf origins.
  std::vector<std::pair<std::string, SolidTorusPoint>> singular_line;

  /// Equilibria outside the removed disks, tagged by chart (1 or 2).
  std::vector<std::pair<int, Equilibrium>> equilibria() const;
  int index_sum(double radius = 0.1) const;
};

/// Removes a disk of radius rho about the sink of sys1 and the source of
/// sys2 = reversed(sys1), blends both to radial flow over rho <= sigma <=
/// 2 rho, and joins them by a neck with tau' = 1. Throws DomainError if
/// 2 rho reaches another equilibrium.
Genus2System connected_sum_field(const PlanarField& sys1, double rho = 0.5);

/// Boundary torus map on angle coordinates given by an integer matrix.
struct HeegaardGluing {
  int genus = 1;
  std::array<std::array<int, 2>, 2> psi{{{1, 0}, {0, 1}}};

  int det() const { return psi[0][0] * psi[1][1] - psi[0][1] * psi[1][0]; }
  /// Throws DomainError for a non-unimodular matrix or genus outside {1, 2}.
  void validate() const;
  Vec2 apply(const Vec2& x) const;
  /// Integer inverse matrix applied to a vector.
  Vec2 apply_inverse(const Vec2& x) const;
};

/// Collar field on V2(t): Y_t = X2 + t (C_* X2 - X2) with C = psi^-1 and
/// (C_* X)(x) = C X(psi x). Y_0 = X2 and Y_1 = (psi^-1)_* X2.
struct CollarField {
  PlanarField x1;
  PlanarField x2;
  HeegaardGluing gluing;

  Vec2 operator()(double t, const Vec2& x) const;
  PlanarField at(double t) const;
};

CollarField heegaard_glue(const PlanarField& X1, const PlanarField& X2,
                          const HeegaardGluing& gluing);

/// Genus 2: the same twist on both torus charts of the connected sum.
std::array<CollarField, 2> heegaard_glue(const Genus2System& X1, const Genus2System& X2,
                                         const HeegaardGluing& gluing);

/// psi^* X = psi^-1 X(psi x), the field that matches X under the gluing.
PlanarField pullback(const PlanarField& X, const HeegaardGluing& gluing);

/// max |Y_1 - X1| / (1 + |X1|) on an n x n grid of the torus.
double boundary_matching_residual(const CollarField& glued, int n = 32);

struct GridSample {
  double u = 0.0, v = 0.0, du = 0.0, dv = 0.0;
};

/// f on the n x n grid of [lo, hi] (row-major in v, then u). Parallel
/// across rows; identical to the serial reference.
std::vector<GridSample> sample_grid(const PlanarField& f, int n, const Vec2& lo, const Vec2& hi);
std::vector<GridSample> sample_grid_serial(const PlanarField& f, int n, const Vec2& lo,
                                           const Vec2& hi);

}  // namespace h3flow
