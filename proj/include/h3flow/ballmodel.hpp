#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "h3flow/moebius.hpp"
#include "h3flow/vec.hpp"

namespace h3flow {

/// Ideal tetrahedron in the unit ball. Face i is the face opposite vertex i.
struct IdealTetrahedron {
  std::string name;
  std::array<Vec3, 4> vertices;
  std::array<std::string, 4> face_labels;

  /// Vertices of face f in increasing index order.
  std::array<int, 3> face_vertices(int f) const;
  std::size_t face_index(const std::string& label) const;
  /// Centre and radius of the sphere carrying face f (orthogonal to the
  /// unit sphere).
  Vec3 face_center(int f) const;
  double face_radius(int f) const;
};

/// Regular ideal tetrahedron with vertices (1,1,1), (1,-1,-1), (-1,1,-1),
/// (-1,-1,1) scaled to the unit sphere.
IdealTetrahedron regular_ideal_tetrahedron(std::string name,
                                           std::array<std::string, 4> face_labels);

/// Face `source` of the second tetrahedron is glued to face
/// vertex_map[source] of the first; vertex v goes to vertex vertex_map[v].
struct FaceGluing {
  int source = 0;
  std::array<int, 4> vertex_map{0, 1, 2, 3};
  int target() const { return vertex_map[static_cast<std::size_t>(source)]; }
};

struct FacePairing {
  std::array<FaceGluing, 4> gluings;
};

struct TetrahedralComplex {
  IdealTetrahedron first;   // T1, faces A, C, B, D
  IdealTetrahedron second;  // T2, faces A', B', C', D'
  FacePairing pairing;

  const IdealTetrahedron& tet(int t) const { return t == 0 ? first : second; }
};

/// Vertex maps of the figure-eight gluing, indexed by face of T2.
FacePairing figure_eight_pairing();

/// Two regular ideal tetrahedra with the figure-eight face pairing A'->A,
/// B'->B, C'->C, D'->D. Throws InvalidPairingError when `pairing` is not a
/// bijection of faces through permutations.
TetrahedralComplex build_complex();
TetrahedralComplex build_complex(const FacePairing& pairing);

struct EdgeRef {
  int tet = 0;  // 0 for T1, 1 for T2
  int a = 0;    // vertex indices, a < b
  int b = 1;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

std::string to_string(const TetrahedralComplex& K, const EdgeRef& e);

/// Tetrahedron edges met while walking once around an edge of the quotient.
struct EdgeClass {
  std::vector<EdgeRef> members;
};

/// Walks the face identifications around every edge. Throws
/// InvalidPairingError when a walk fails to close.
std::vector<EdgeClass> edge_cycles(const TetrahedralComplex& K);

/// Dihedral angle at edge (a, b) of tetrahedron `tet`, from the angle
/// between the two face spheres through that edge.
double ideal_dihedral_angle(const IdealTetrahedron& tet, int a, int b);

struct DihedralClassReport {
  std::size_t length = 0;
  double angle_sum = 0.0;
  bool proper = false;
};

struct DihedralReport {
  std::vector<DihedralClassReport> classes;
  bool proper() const;
  std::string to_text() const;
};

/// Angle sum per edge class, proper when it is 2 pi within `tol`.
DihedralReport dihedral_check(const TetrahedralComplex& K, const std::vector<EdgeClass>& cycles,
                              double tol = 1e-6);

/// Isometry of the ball x -> S(M(S(x))) where S is the inversion taking the
/// ball to upper half-space and M acts there.
struct BallIsometry {
  MoebiusMap upper;

  Vec3 apply(const Vec3& x) const;
  /// Ideal points (on the unit sphere).
  Vec3 apply_boundary(const Vec3& x) const;
  Vec3 push_vector(const Vec3& x, const Vec3& v) const;
  BallIsometry inverse() const;
};

/// Inversion in the sphere |x - (0,0,-1)| = sqrt 2, an involution swapping
/// the unit ball and upper half-space.
Vec3 ball_to_upper(const Vec3& x);
Complex boundary_coordinate(const Vec3& x);
Vec3 boundary_point(const ExtPoint& w);

/// The isometry carrying the glued face of T2 onto its partner face of T1,
/// matching labelled vertices.
BallIsometry face_isometry(const TetrahedralComplex& K, const FaceGluing& g);

/// Points of face f (an ideal triangle), deterministic in the seed.
std::vector<Vec3> sample_ball_face(const IdealTetrahedron& tet, int f, std::size_t count,
                                   std::uint64_t seed);

using BallField = std::function<Vec3(const Vec3&)>;

/// Pushes F2 from sampled points of each face of T2 to T1 and compares with
/// F1 there: max |dPhi(F2) - F1| / (1 + |dPhi(F2)|).
double match_fields(const BallField& F1, const BallField& F2, const TetrahedralComplex& K,
                    std::size_t samples_per_face = 50, std::uint64_t seed = 1);

/// F2(x) = dPhi^-1 F1(Phi x) with Phi the isometry of the face of T2 nearest x.
BallField pullback_field(const BallField& F1, const TetrahedralComplex& K);

}  // namespace h3flow
