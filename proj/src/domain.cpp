#include "h3flow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

HPoint as_hpoint(const Vec3& p) { return {p[0], p[1], p[2]}; }
Vec3 as_vec(const HPoint& p) { return {p.x, p.y, p.r}; }

}  // namespace

double signed_distance(const Constraint& c, const Vec3& p) {
  return std::visit(
      overloaded{
          [&](const HalfSpace& h) { return dot(h.normal, p) - h.offset; },
          [&](const Hemisphere& s) {
            const double dist = norm(Vec3{p[0] - s.cx, p[1] - s.cy, p[2]});
            return s.outside ? s.radius - dist : dist - s.radius;
          }},
      c);
}

Vec3 project_to_face(const Constraint& c, const Vec3& p) {
  return std::visit(
      overloaded{
          [&](const HalfSpace& h) {
            return p - (dot(h.normal, p) - h.offset) * h.normal;
          },
          [&](const Hemisphere& s) {
            const Vec3 centre{s.cx, s.cy, 0.0};
            Vec3 d = p - centre;
            d[2] = std::abs(d[2]);
            const double n = norm(d);
            if (n == 0.0) return centre + Vec3{0.0, 0.0, s.radius};
            return centre + (s.radius / n) * d;
          }},
      c);
}

AffineIsometry AffineIsometry::translation(const Vec3& t) {
  AffineIsometry T;
  T.shift = t;
  return T;
}

Vec3 AffineIsometry::apply_linear(const Vec3& v) const {
  return {dot(linear[0], v), dot(linear[1], v), dot(linear[2], v)};
}

Vec3 AffineIsometry::apply(const Vec3& p) const { return apply_linear(p) + shift; }

AffineIsometry compose(const AffineIsometry& S, const AffineIsometry& T) {
  AffineIsometry out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += S.linear[i][k] * T.linear[k][j];
      out.linear[i][j] = acc;
    }
  }
  out.shift = S.apply(T.shift);
  return out;
}

AffineIsometry inverse(const AffineIsometry& T) {
  // Orthogonal linear part: inverse is the transpose.
  AffineIsometry out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.linear[i][j] = T.linear[j][i];
  }
  out.shift = -1.0 * out.apply_linear(T.shift);
  return out;
}

Vec3 apply(const SideMap& m, const Vec3& p) {
  return std::visit(
      overloaded{[&](const MoebiusMap& T) { return as_vec(apply(T, as_hpoint(p))); },
                 [&](const AffineIsometry& A) { return A.apply(p); }},
      m);
}

Vec3 push_vector(const SideMap& m, const Vec3& p, const Vec3& v) {
  return std::visit(
      overloaded{[&](const MoebiusMap& T) { return differential(T, as_hpoint(p), v); },
                 [&](const AffineIsometry& A) { return A.apply_linear(v); }},
      m);
}

SideMap inverse(const SideMap& m) {
  return std::visit([](const auto& T) -> SideMap { return inverse(T); }, m);
}

bool is_inverse_pair(const SideMap& m, const SideMap& n, double tol) {
  if (m.index() != n.index()) return false;
  if (const auto* T = std::get_if<MoebiusMap>(&m)) {
    return equal_up_to_scalar(compose(*T, std::get<MoebiusMap>(n)),
                              MoebiusMap::identity(), tol);
  }
  const AffineIsometry id = compose(std::get<AffineIsometry>(m), std::get<AffineIsometry>(n));
  double err = norm(id.shift);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(id.linear[i][j] - (i == j ? 1.0 : 0.0)));
  }
  return err <= tol;
}

double FundamentalDomain::violation(const Vec3& p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Side& s : sides) worst = std::max(worst, signed_distance(s.constraint, p));
  if (geometry == Geometry::upper_half_space) worst = std::max(worst, -p[2]);
  return worst;
}

bool FundamentalDomain::contains(const Vec3& p, double tol) const {
  if (geometry == Geometry::upper_half_space && !(p[2] > 0.0)) return false;
  for (const Side& s : sides) {
    if (signed_distance(s.constraint, p) > tol) return false;
  }
  return true;
}

std::size_t FundamentalDomain::side_index(const std::string& label) const {
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (sides[i].label == label) return i;
  }
  throw ConfigError("no side labelled '" + label + "'");
}

std::vector<Vec3> FundamentalDomain::sample_face(std::size_t side, std::size_t count,
                                                 std::uint64_t seed) const {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> out;
  const Constraint& c = sides.at(side).constraint;
  for (std::size_t attempt = 0; out.size() < count && attempt < 400 * count; ++attempt) {
    Vec3 p;
    for (int i = 0; i < 3; ++i) p[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
    p = project_to_face(c, p);
    if (contains(p, 1e-9)) out.push_back(p);
  }
  return out;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << "sides checked: " << sides_checked << "\n"
     << "points checked: " << points_checked << "\n"
     << "violations: " << violations.size() << "\n";
  for (const Violation& v : violations) {
    os << "  condition " << v.condition << " side " << v.side << ": " << v.message << "\n";
  }
  os << (ok() ? "side pairing valid\n" : "side pairing INVALID\n");
  return os.str();
}

ValidationReport validate_side_pairing(const FundamentalDomain& D,
                                       std::size_t samples_per_face,
                                       std::uint64_t seed, double tol) {
  ValidationReport report;
  std::map<std::string, int> seen_as_partner;
  for (const Side& s : D.sides) seen_as_partner[s.label] = 0;

  for (std::size_t i = 0; i < D.sides.size(); ++i) {
    const Side& s = D.sides[i];
    ++report.sides_checked;
    auto partner_it = seen_as_partner.find(s.partner);
    if (partner_it == seen_as_partner.end()) {
      report.violations.push_back({3, s.label, "partner '" + s.partner + "' does not exist"});
      continue;
    }
    ++partner_it->second;
    const std::size_t pi = D.side_index(s.partner);
    const Side& sp = D.sides[pi];
    if (sp.partner != s.label) {
      report.violations.push_back(
          {3, s.label, "partner of partner is '" + sp.partner + "', not this side"});
    }
    if (!is_inverse_pair(s.map, sp.map, tol)) {
      report.violations.push_back({2, s.label, "tau_{s'} is not the inverse of tau_s"});
    }
    const std::vector<Vec3> pts = D.sample_face(pi, samples_per_face, seed);
    if (pts.empty()) {
      report.violations.push_back({1, s.label, "could not sample the partner face"});
      continue;
    }
    std::size_t bad = 0;
    double worst = 0.0;
    for (const Vec3& p : pts) {
      ++report.points_checked;
      const Vec3 img = apply(s.map, p);
      const double scale = std::max(1.0, norm(img));
      const double off = std::abs(signed_distance(s.constraint, img));
      if (off > tol * scale || !D.contains(img, tol * scale)) {
        ++bad;
        worst = std::max(worst, off);
      }
    }
    if (bad != 0) {
      std::ostringstream msg;
      msg << bad << " of " << pts.size() << " partner-face points do not land on this face"
          << " (max offset " << worst << ")";
      report.violations.push_back({1, s.label, msg.str()});
    }
  }
  for (const auto& [label, count] : seen_as_partner) {
    if (count != 1) {
      report.violations.push_back(
          {3, label, "side is the partner of " + std::to_string(count) + " sides"});
    }
  }
  return report;
}

Located locate(const HPoint& p, const FundamentalDomain& D, const WordBall& ball,
               double tol) {
  if (!p.interior()) throw DomainError("locate: point is not interior");
  for (std::size_t i = 0; i < ball.entries.size(); ++i) {
    const HPoint q = apply(inverse(ball.entries[i].matrix), p);
    if (D.contains(as_vec(q), tol)) return {i, ball.entries[i].word, q};
  }
  throw NotFoundError("locate: no element of the radius-" + std::to_string(ball.radius) +
                      " ball maps the point into the domain");
}

FundamentalDomain cube_torus(double lo, double hi) {
  FundamentalDomain D;
  D.geometry = Geometry::euclidean;
  const double w = hi - lo;
  const char* names[3] = {"x", "y", "z"};
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 n{0.0, 0.0, 0.0};
    n[axis] = 1.0;
    Vec3 t{0.0, 0.0, 0.0};
    t[axis] = w;
    const std::string plus = std::string(names[axis]) + "+";
    const std::string minus = std::string(names[axis]) + "-";
    D.sides.push_back({plus, HalfSpace{n, hi}, minus, AffineIsometry::translation(t), ""});
    D.sides.push_back(
        {minus, HalfSpace{-1.0 * n, -lo}, plus, AffineIsometry::translation(-1.0 * t), ""});
  }
  D.box_lo = {lo, lo, lo};
  D.box_hi = {hi, hi, hi};
  D.outline = {{lo, lo, lo}, {hi, lo, lo}, {hi, hi, lo}, {lo, hi, lo}};
  return D;
}

FundamentalDomain translation_slab(double lo, double hi) {
  FundamentalDomain D;
  D.geometry = Geometry::upper_half_space;
  const double w = hi - lo;
  D.sides.push_back({"right", HalfSpace{{1.0, 0.0, 0.0}, hi}, "left",
                     MoebiusMap::translation(w), ""});
  D.sides.push_back({"left", HalfSpace{{-1.0, 0.0, 0.0}, -lo}, "right",
                     MoebiusMap::translation(-w), ""});
  D.box_lo = {lo, -2.0, 0.05};
  D.box_hi = {hi, 2.0, 4.0};
  D.outline = {{lo, -2.0, 0.0}, {hi, -2.0, 0.0}, {hi, 2.0, 0.0}, {lo, 2.0, 0.0}};
  return D;
}

}  // namespace h3flow
