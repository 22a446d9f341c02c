#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "h3flow/ballmodel.hpp"
#include "h3flow/errors.hpp"

using namespace h3flow;
using std::numbers::pi;

namespace {

// Independent oracle for edge classes: union-find over the 12 labelled
// edges using the three edge identifications of every glued face.
std::vector<std::size_t> union_find_class_sizes(const TetrahedralComplex& K) {
  std::vector<int> parent(12);
  std::iota(parent.begin(), parent.end(), 0);
  auto id = [](int tet, int a, int b) {
    static const int slot[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return 6 * tet + slot[a][b];
  };
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const FaceGluing& g : K.pairing.gluings) {
    const auto f = K.second.face_vertices(g.source);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        parent[find(id(1, f[i], f[j]))] =
            find(id(0, g.vertex_map[f[i]], g.vertex_map[f[j]]));
      }
    }
  }
  std::map<int, std::size_t> sizes;
  for (int e = 0; e < 12; ++e) ++sizes[find(e)];
  std::vector<std::size_t> out;
  for (const auto& [root, n] : sizes) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

double angle_at(Complex corner, Complex p, Complex q) { return std::abs(std::arg((p - corner) / (q - corner))); }

Vec3 random_field(const Vec3& x, double s) {
  return {std::sin(s * x[0] + 1.0), std::cos(2.0 * x[1] - s), x[2] * x[0] + s};
}

}  // namespace

TEST_CASE("regular ideal tetrahedra") {
  const TetrahedralComplex K = build_complex();
  for (const IdealTetrahedron* T : {&K.first, &K.second}) {
    for (int i = 0; i < 4; ++i) {
      CHECK(norm(T->vertices[i]) == doctest::Approx(1.0).epsilon(1e-15));
      for (int j = i + 1; j < 4; ++j) CHECK(dot(T->vertices[i], T->vertices[j]) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
      // face spheres pass through their vertices and meet the unit sphere orthogonally
      const Vec3 c = T->face_center(i);
      CHECK(T->face_radius(i) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
      for (int v : T->face_vertices(i)) CHECK(norm(T->vertices[v] - c) == doctest::Approx(T->face_radius(i)).epsilon(1e-14));
    }
  }
  CHECK(K.first.face_labels[0] == "A");
  CHECK(K.first.face_index("B") == 2);
  CHECK(K.second.face_index("C'") == 2);
}

TEST_CASE("figure-eight pairing labels") {
  const TetrahedralComplex K = build_complex();
  std::set<int> targets;
  const char* expect[] = {"A", "B", "C", "D"};
  for (const FaceGluing& g : K.pairing.gluings) {
    targets.insert(g.target());
    CHECK(K.first.face_labels[g.target()] == std::string(expect[g.source]));
    CHECK(K.second.face_labels[g.source] == std::string(expect[g.source]) + "'");
  }
  CHECK(targets.size() == 4);
}

TEST_CASE("edge cycles") {
  const TetrahedralComplex K = build_complex();
  const std::vector<EdgeClass> classes = edge_cycles(K);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].members.size() == 6);
  CHECK(classes[1].members.size() == 6);
  CHECK(union_find_class_sizes(K) == std::vector<std::size_t>{6, 6});
  std::set<std::string> seen;
  for (const EdgeClass& c : classes) {
    for (const EdgeRef& e : c.members) seen.insert(to_string(K, e));
  }
  CHECK(seen.size() == 12);
}

TEST_CASE("scrambled pairings") {
  FacePairing doubled;
  for (int f = 0; f < 4; ++f) doubled.gluings[f] = {f, {0, 1, 2, 3}};
  const TetrahedralComplex K = build_complex(doubled);
  const std::vector<EdgeClass> classes = edge_cycles(K);
  CHECK(classes.size() == 6);
  for (const EdgeClass& c : classes) CHECK(c.members.size() == 2);
  const DihedralReport r = dihedral_check(K, classes);
  CHECK_FALSE(r.proper());

  FacePairing clash = figure_eight_pairing();
  clash.gluings[1] = clash.gluings[0];
  CHECK_THROWS_AS(build_complex(clash), InvalidPairingError);
  FacePairing bad = figure_eight_pairing();
  bad.gluings[2].vertex_map = {0, 0, 1, 2};
  CHECK_THROWS_AS(build_complex(bad), InvalidPairingError);
}

TEST_CASE("dihedral angles") {
  const TetrahedralComplex K = build_complex();
  // Oracle: send vertex 0 to infinity in upper half-space; the other three
  // become an equilateral triangle whose angles are the dihedral angles at
  // the edges through vertex 0.
  Complex z[4];
  for (int v = 0; v < 4; ++v) z[v] = boundary_coordinate(K.first.vertices[v]);
  Complex w[4];
  for (int v = 1; v < 4; ++v) w[v] = 1.0 / (z[v] - z[0]);
  CHECK(angle_at(w[1], w[2], w[3]) == doctest::Approx(ideal_dihedral_angle(K.first, 0, 1)).epsilon(1e-12));
  CHECK(angle_at(w[2], w[1], w[3]) == doctest::Approx(ideal_dihedral_angle(K.first, 0, 2)).epsilon(1e-12));
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) CHECK(std::abs(ideal_dihedral_angle(K.first, a, b) - pi / 3) < 1e-9);
  }

  const DihedralReport r = dihedral_check(K, edge_cycles(K));
  REQUIRE(r.classes.size() == 2);
  for (const DihedralClassReport& c : r.classes) CHECK(std::abs(c.angle_sum - 2 * pi) < 1e-6);
  CHECK(r.proper());

  EdgeClass five;
  for (int i = 0; i < 5; ++i) five.members.push_back({0, 0, 1});
  const DihedralReport r5 = dihedral_check(K, {five});
  CHECK(r5.classes[0].angle_sum == doctest::Approx(5 * pi / 3));
  CHECK_FALSE(r5.proper());
}

TEST_CASE("face isometries") {
  const TetrahedralComplex K = build_complex();
  for (const FaceGluing& g : K.pairing.gluings) {
    const BallIsometry phi = face_isometry(K, g);
    for (int v : K.second.face_vertices(g.source)) {
      CHECK(norm(phi.apply_boundary(K.second.vertices[v]) - K.first.vertices[g.vertex_map[v]]) < 1e-9);
    }
    // face sphere onto face sphere
    const Vec3 c1 = K.first.face_center(g.target());
    for (const Vec3& x : sample_ball_face(K.second, g.source, 20, 3)) {
      CHECK(norm(x) < 1.0);
      CHECK(std::abs(norm(x - K.second.face_center(g.source)) - K.second.face_radius(g.source)) < 1e-9);
      CHECK(std::abs(norm(phi.apply(x) - c1) - K.first.face_radius(g.target())) < 1e-9);
    }
    // T2 lands beyond the face: its centre maps inside T1's face sphere.
    const Vec3 image = phi.apply({0.0, 0.0, 0.0});
    CHECK(norm(image - c1) < K.first.face_radius(g.target()));
  }
}

TEST_CASE("isometry differential matches finite differences") {
  const TetrahedralComplex K = build_complex();
  const BallIsometry phi = face_isometry(K, K.pairing.gluings[2]);
  const Vec3 x{0.1, -0.2, 0.3};
  const Vec3 v{0.4, 0.1, -0.3};
  const double h = 1e-6;
  const Vec3 fd = (1.0 / (2 * h)) * (phi.apply(x + h * v) - phi.apply(x - h * v));
  CHECK(norm(fd - phi.push_vector(x, v)) < 1e-6 * norm(fd));
  CHECK(norm(phi.inverse().apply(phi.apply(x)) - x) < 1e-12);
}

TEST_CASE("field matching") {
  const TetrahedralComplex K = build_complex();
  const BallField zero = [](const Vec3&) { return Vec3{0, 0, 0}; };
  CHECK(match_fields(zero, zero, K) == 0.0);

  const BallField F1 = [](const Vec3& x) { return random_field(x, 1.3); };
  CHECK(match_fields(F1, pullback_field(F1, K), K) < 1e-9);

  const BallField G = [](const Vec3& x) { return random_field(x, -0.7); };
  const double unrelated = match_fields(F1, G, K);
  CHECK(unrelated > 0.1);
  MESSAGE("independent fields mismatch: " << unrelated);
}
