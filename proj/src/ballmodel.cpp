#include "h3flow/ballmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

using std::numbers::pi;

const Vec3 kPole{0.0, 0.0, -1.0};

// Sends z1, z2, z3 to 0, 1, infinity.
MoebiusMap three_point_map(Complex z1, Complex z2, Complex z3) {
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

Vec3 inversion_push(const Vec3& x, const Vec3& v) {
  const Vec3 y = x - kPole;
  const double n2 = dot(y, y);
  return (2.0 / n2) * v - (4.0 * dot(y, v) / (n2 * n2)) * y;
}

}  // namespace

std::array<int, 3> IdealTetrahedron::face_vertices(int f) const {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v) {
    if (v != f) out[static_cast<std::size_t>(k++)] = v;
  }
  return out;
}

std::size_t IdealTetrahedron::face_index(const std::string& label) const {
  for (std::size_t f = 0; f < 4; ++f) {
    if (face_labels[f] == label) return f;
  }
  throw ConfigError("tetrahedron " + name + " has no face '" + label + "'");
}

Vec3 IdealTetrahedron::face_center(int f) const {
  const auto idx = face_vertices(f);
  const Vec3& v1 = vertices[static_cast<std::size_t>(idx[0])];
  const Vec3& v2 = vertices[static_cast<std::size_t>(idx[1])];
  const Vec3& v3 = vertices[static_cast<std::size_t>(idx[2])];
  // c . v_k = 1 for each vertex of the face.
  const double vol = dot(v1, cross(v2, v3));
  return (1.0 / vol) * (cross(v2, v3) + cross(v3, v1) + cross(v1, v2));
}

double IdealTetrahedron::face_radius(int f) const {
  const Vec3 c = face_center(f);
  return std::sqrt(dot(c, c) - 1.0);
}

IdealTetrahedron regular_ideal_tetrahedron(std::string name,
                                           std::array<std::string, 4> face_labels) {
  const double s = 1.0 / std::sqrt(3.0);
  return {std::move(name),
          {Vec3{s, s, s}, Vec3{s, -s, -s}, Vec3{-s, s, -s}, Vec3{-s, -s, s}},
          std::move(face_labels)};
}

FacePairing figure_eight_pairing() {
  FacePairing p;
  p.gluings = {FaceGluing{0, {0, 1, 3, 2}}, FaceGluing{1, {1, 2, 3, 0}},
               FaceGluing{2, {2, 3, 1, 0}}, FaceGluing{3, {2, 1, 0, 3}}};
  return p;
}

TetrahedralComplex build_complex() { return build_complex(figure_eight_pairing()); }

TetrahedralComplex build_complex(const FacePairing& pairing) {
  std::array<int, 4> sources{};
  std::array<int, 4> targets{};
  for (const FaceGluing& g : pairing.gluings) {
    if (g.source < 0 || g.source > 3) throw InvalidPairingError("face index out of range");
    std::array<int, 4> seen{};
    for (int v : g.vertex_map) {
      if (v < 0 || v > 3 || seen[static_cast<std::size_t>(v)]++) {
        throw InvalidPairingError("vertex map is not a permutation");
      }
    }
    ++sources[static_cast<std::size_t>(g.source)];
    ++targets[static_cast<std::size_t>(g.target())];
  }
  for (int f = 0; f < 4; ++f) {
    if (sources[static_cast<std::size_t>(f)] != 1 || targets[static_cast<std::size_t>(f)] != 1) {
      throw InvalidPairingError("face pairing is not a bijection");
    }
  }
  return {regular_ideal_tetrahedron("T1", {"A", "C", "B", "D"}),
          regular_ideal_tetrahedron("T2", {"A'", "B'", "C'", "D'"}), pairing};
}

std::string to_string(const TetrahedralComplex& K, const EdgeRef& e) {
  return K.tet(e.tet).name + ":" + std::to_string(e.a) + std::to_string(e.b);
}

std::vector<EdgeClass> edge_cycles(const TetrahedralComplex& K) {
  // glue[t][f]: the tetrahedron, face and vertex map across face f of t.
  struct Across {
    int tet = -1;
    std::array<int, 4> map{};
  };
  std::array<std::array<Across, 4>, 2> glue{};
  for (const FaceGluing& g : K.pairing.gluings) {
    Across& fwd = glue[1][static_cast<std::size_t>(g.source)];
    Across& back = glue[0][static_cast<std::size_t>(g.target())];
    if (fwd.tet >= 0 || back.tet >= 0) throw InvalidPairingError("face glued twice");
    fwd = {0, g.vertex_map};
    back.tet = 1;
    for (int v = 0; v < 4; ++v) back.map[static_cast<std::size_t>(g.vertex_map[static_cast<std::size_t>(v)])] = v;
  }

  auto other_face = [](int a, int b, int f) {
    for (int g = 0; g < 4; ++g) {
      if (g != a && g != b && g != f) return g;
    }
    return -1;
  };

  std::array<std::array<bool, 16>, 2> assigned{};
  std::vector<EdgeClass> classes;
  for (int t = 0; t < 2; ++t) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        if (assigned[static_cast<std::size_t>(t)][static_cast<std::size_t>(4 * a + b)]) continue;
        EdgeClass cls;
        int ct = t, ca = a, cb = b;
        int cf = other_face(a, b, -1);
        const int start_f = cf;
        for (int step = 0;; ++step) {
          if (step >= 24) throw InvalidPairingError("edge cycle does not close");
          cls.members.push_back({ct, std::min(ca, cb), std::max(ca, cb)});
          assigned[static_cast<std::size_t>(ct)][static_cast<std::size_t>(4 * std::min(ca, cb) + std::max(ca, cb))] = true;
          const Across& x = glue[static_cast<std::size_t>(ct)][static_cast<std::size_t>(cf)];
          if (x.tet < 0) throw InvalidPairingError("face " + K.tet(ct).face_labels[static_cast<std::size_t>(cf)] + " is not glued");
          const int na = x.map[static_cast<std::size_t>(ca)];
          const int nb = x.map[static_cast<std::size_t>(cb)];
          const int nf = x.map[static_cast<std::size_t>(cf)];
          ct = x.tet;
          ca = na;
          cb = nb;
          cf = other_face(na, nb, nf);
          if (ct == t && std::min(ca, cb) == a && std::max(ca, cb) == b && cf == start_f) break;
        }
        classes.push_back(std::move(cls));
      }
    }
  }
  return classes;
}

double ideal_dihedral_angle(const IdealTetrahedron& tet, int a, int b) {
  int faces[2];
  int k = 0;
  for (int f = 0; f < 4; ++f) {
    if (f != a && f != b) faces[k++] = f;
  }
  const Vec3 c1 = tet.face_center(faces[0]);
  const Vec3 c2 = tet.face_center(faces[1]);
  const double r1 = tet.face_radius(faces[0]);
  const double r2 = tet.face_radius(faces[1]);
  const double d = norm(c1 - c2);
  const double cosine = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
  return pi - std::acos(std::clamp(cosine, -1.0, 1.0));
}

bool DihedralReport::proper() const {
  return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.proper; });
}

std::string DihedralReport::to_text() const {
  std::ostringstream os;
  char buf[128];
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "edge class %zu: %zu edges, angle sum %.12f (2pi = %.12f) %s\n",
                  i, classes[i].length, classes[i].angle_sum, 2 * pi,
                  classes[i].proper ? "ok" : "NOT 2pi");
    os << buf;
  }
  os << (proper() ? "pairing proper\n" : "pairing NOT proper\n");
  return os.str();
}

DihedralReport dihedral_check(const TetrahedralComplex& K, const std::vector<EdgeClass>& cycles,
                              double tol) {
  DihedralReport r;
  for (const EdgeClass& c : cycles) {
    DihedralClassReport cr;
    cr.length = c.members.size();
    for (const EdgeRef& e : c.members) cr.angle_sum += ideal_dihedral_angle(K.tet(e.tet), e.a, e.b);
    cr.proper = std::abs(cr.angle_sum - 2 * pi) <= tol;
    r.classes.push_back(cr);
  }
  return r;
}

Vec3 ball_to_upper(const Vec3& x) {
  const Vec3 y = x - kPole;
  return kPole + (2.0 / dot(y, y)) * y;
}

Complex boundary_coordinate(const Vec3& x) {
  if (1.0 + x[2] <= 1e-14) throw DomainError("boundary point at the inversion pole");
  return Complex{x[0], x[1]} / (1.0 + x[2]);
}

Vec3 boundary_point(const ExtPoint& w) {
  if (w.infinite) return kPole;
  const double n2 = w.p.x * w.p.x + w.p.y * w.p.y;
  return {2.0 * w.p.x / (1.0 + n2), 2.0 * w.p.y / (1.0 + n2), (1.0 - n2) / (1.0 + n2)};
}

Vec3 BallIsometry::apply(const Vec3& x) const {
  const Vec3 u = ball_to_upper(x);
  const HPoint image = h3flow::apply(upper, HPoint{u[0], u[1], u[2]});
  return ball_to_upper({image.x, image.y, image.r});
}

Vec3 BallIsometry::apply_boundary(const Vec3& x) const {
  const Complex z = boundary_coordinate(x);
  return boundary_point(h3flow::apply(upper, ExtPoint::at({z.real(), z.imag(), 0.0})));
}

Vec3 BallIsometry::push_vector(const Vec3& x, const Vec3& v) const {
  const Vec3 u = ball_to_upper(x);
  const Vec3 du = inversion_push(x, v);
  const HPoint p{u[0], u[1], u[2]};
  const Vec3 dm = differential(upper, p, du);
  const HPoint q = h3flow::apply(upper, p);
  return inversion_push({q.x, q.y, q.r}, dm);
}

BallIsometry BallIsometry::inverse() const { return {h3flow::inverse(upper)}; }

BallIsometry face_isometry(const TetrahedralComplex& K, const FaceGluing& g) {
  const auto idx = K.second.face_vertices(g.source);
  Complex z[3], w[3];
  for (int k = 0; k < 3; ++k) {
    const auto v = static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
    z[k] = boundary_coordinate(K.second.vertices[v]);
    w[k] = boundary_coordinate(K.first.vertices[static_cast<std::size_t>(g.vertex_map[v])]);
  }
  const MoebiusMap Mz = three_point_map(z[0], z[1], z[2]);
  const MoebiusMap Mw = three_point_map(w[0], w[1], w[2]);
  return {compose(inverse(Mw), Mz)};
}

std::vector<Vec3> sample_ball_face(const IdealTetrahedron& tet, int f, std::size_t count,
                                   std::uint64_t seed) {
  const auto idx = tet.face_vertices(f);
  Complex z[3];
  for (int k = 0; k < 3; ++k) z[k] = boundary_coordinate(tet.vertices[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]);
  // In coordinates where the face is the ideal triangle 0, 1, infinity.
  const MoebiusMap back = inverse(three_point_map(z[0], z[1], z[2]));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    const double t = unit(rng);
    const double lift = -0.5 * std::log(1.0 - unit(rng));
    if (t <= 0.0) continue;
    const HPoint p{t, 0.0, std::sqrt(t * (1.0 - t)) + lift};
    if (!(p.r > 0.0)) continue;
    const HPoint q = apply(back, p);
    pts.push_back(ball_to_upper({q.x, q.y, q.r}));
  }
  return pts;
}

double match_fields(const BallField& F1, const BallField& F2, const TetrahedralComplex& K,
                    std::size_t samples_per_face, std::uint64_t seed) {
  double worst = 0.0;
  for (const FaceGluing& g : K.pairing.gluings) {
    const BallIsometry phi = face_isometry(K, g);
    for (const Vec3& x : sample_ball_face(K.second, g.source, samples_per_face,
                                          seed + static_cast<std::uint64_t>(g.source))) {
      const Vec3 pushed = phi.push_vector(x, F2(x));
      const Vec3 target = F1(phi.apply(x));
      worst = std::max(worst, norm(pushed - target) / (1.0 + norm(pushed)));
    }
  }
  return worst;
}

BallField pullback_field(const BallField& F1, const TetrahedralComplex& K) {
  std::array<BallIsometry, 4> phi;
  for (const FaceGluing& g : K.pairing.gluings) phi[static_cast<std::size_t>(g.source)] = face_isometry(K, g);
  const IdealTetrahedron T2 = K.second;
  return [F1, phi, T2](const Vec3& x) {
    int nearest = 0;
    double best = INFINITY;
    for (int f = 0; f < 4; ++f) {
      const double gap = std::abs(norm(x - T2.face_center(f)) - T2.face_radius(f));
      if (gap < best) {
        best = gap;
        nearest = f;
      }
    }
    const BallIsometry& P = phi[static_cast<std::size_t>(nearest)];
    const Vec3 y = P.apply(x);
    return P.inverse().push_vector(y, F1(y));
  };
}

}  // namespace h3flow
