#include "h3flow/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x);
  return a / (a + bump(1.0 - x));
}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi - 1e-12) r = 0.0;
  return r;
}

// Representative of x - e with components in (-pi, pi].
Vec2 periodic_offset(const Vec2& x, const Vec2& e) {
  Vec2 d = x - e;
  for (double& c : d) c = std::remainder(c, kTwoPi);
  return d;
}

std::array<double, 4> jacobian(const PlanarField& f, const Vec2& x) {
  const double h = 1e-6;
  const Vec2 fu = (1.0 / (2 * h)) * (f({x[0] + h, x[1]}) - f({x[0] - h, x[1]}));
  const Vec2 fv = (1.0 / (2 * h)) * (f({x[0], x[1] + h}) - f({x[0], x[1] - h}));
  return {fu[0], fv[0], fu[1], fv[1]};
}

EquilibriumKind classify_point(const PlanarField& f, const Vec2& x) {
  const auto J = jacobian(f, x);
  const double det = J[0] * J[3] - J[1] * J[2];
  const double tr = J[0] + J[3];
  if (std::abs(det) < 1e-10) return EquilibriumKind::degenerate;
  if (det < 0.0) return EquilibriumKind::saddle;
  if (std::abs(tr) < 1e-8) return EquilibriumKind::center;
  return tr < 0.0 ? EquilibriumKind::sink : EquilibriumKind::source;
}

bool newton(const PlanarField& f, Vec2& x) {
  for (int it = 0; it < 60; ++it) {
    const Vec2 fx = f(x);
    if (norm(fx) < 1e-13) return true;
    const auto J = jacobian(f, x);
    const double det = J[0] * J[3] - J[1] * J[2];
    if (std::abs(det) < 1e-14) return false;
    const Vec2 step{(J[3] * fx[0] - J[1] * fx[1]) / det, (-J[2] * fx[0] + J[0] * fx[1]) / det};
    x = x - step;
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) return false;
    if (norm(step) < 1e-15) break;
  }
  return norm(f(x)) < 1e-10;
}

}  // namespace

PlanarField torus_field() {
  return {[](const Vec2& x) { return Vec2{-std::sin(x[0]), -std::sin(x[1])}; }, true};
}

PlanarField reversed(const PlanarField& f) {
  return {[g = f.eval](const Vec2& x) { return -1.0 * g(x); }, f.periodic};
}

std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::sink: return "sink";
    case EquilibriumKind::source: return "source";
    case EquilibriumKind::saddle: return "saddle";
    case EquilibriumKind::center: return "center";
    case EquilibriumKind::degenerate: return "degenerate";
  }
  return "unknown";
}

std::vector<Equilibrium> find_equilibria(const PlanarField& f, const Vec2& lo, const Vec2& hi,
                                         int n) {
  const bool wrap = f.periodic;
  const int m = wrap ? n : n + 1;
  const double du = (hi[0] - lo[0]) / n;
  const double dv = (hi[1] - lo[1]) / n;
  std::vector<double> mag(static_cast<std::size_t>(m * m));
  auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(j * m + i)]; };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) at(i, j) = norm(f({lo[0] + i * du, lo[1] + j * dv}));
  }

  std::vector<Equilibrium> found;
  auto duplicate = [&](const Vec2& x) {
    for (const Equilibrium& e : found) {
      const Vec2 d = wrap ? periodic_offset(x, e.point) : x - e.point;
      if (norm(d) < 1e-6) return true;
    }
    return false;
  };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          int a = i + di, b = j + dj;
          if (wrap) {
            a = (a + m) % m;
            b = (b + m) % m;
          } else if (a < 0 || b < 0 || a >= m || b >= m) {
            continue;
          }
          if (at(a, b) < at(i, j)) {
            minimum = false;
            break;
          }
        }
      }
      if (!minimum) continue;
      Vec2 x{lo[0] + i * du, lo[1] + j * dv};
      if (!newton(f, x)) continue;
      if (wrap) {
        x = {wrap_angle(x[0]), wrap_angle(x[1])};
      } else if (x[0] < lo[0] - 1e-9 || x[0] > hi[0] + 1e-9 || x[1] < lo[1] - 1e-9 ||
                 x[1] > hi[1] + 1e-9) {
        continue;
      }
      if (duplicate(x)) continue;
      found.push_back({x, classify_point(f, x)});
    }
  }
  std::sort(found.begin(), found.end(), [](const Equilibrium& a, const Equilibrium& b) {
    return a.point < b.point;
  });
  return found;
}

int equilibrium_index(const PlanarField& f, const Vec2& e, double radius, int samples) {
  if (radius <= 0.0) throw DomainError("index circle radius must be positive");
  samples = std::max(samples, 720);
  auto direction = [&](double theta) {
    const Vec2 v = f({e[0] + radius * std::cos(theta), e[1] + radius * std::sin(theta)});
    if (norm(v) < 1e-12) throw DomainError("field vanishes on the index circle");
    return std::atan2(v[1], v[0]);
  };
  // Turning angle over [t0, t1], bisecting while the direction jumps.
  std::function<double(double, double, double, double, int)> turn =
      [&](double t0, double t1, double a0, double a1, int depth) -> double {
    const double d = std::remainder(a1 - a0, kTwoPi);
    if (std::abs(d) <= pi / 4 || depth >= 30) return d;
    const double tm = 0.5 * (t0 + t1);
    const double am = direction(tm);
    return turn(t0, tm, a0, am, depth + 1) + turn(tm, t1, am, a1, depth + 1);
  };
  double total = 0.0;
  double prev_t = 0.0;
  double prev_a = direction(0.0);
  const double first = prev_a;
  for (int k = 1; k <= samples; ++k) {
    const double t = kTwoPi * k / samples;
    const double a = k == samples ? first : direction(t);
    total += turn(prev_t, t, prev_a, a, 0);
    prev_t = t;
    prev_a = a;
  }
  const double winding = total / kTwoPi;
  const long idx = std::lround(winding);
  if (std::abs(winding - static_cast<double>(idx)) > 1e-6) {
    throw DomainError("index circle under-resolved");
  }
  return static_cast<int>(idx);
}

double LeafChart::profile(double r) { return std::tan(pi * r * r / 2.0); }

double LeafChart::inverse_profile(double s) { return std::sqrt(2.0 * std::atan(s) / pi); }

Vec3 SolidTorusPoint::cartesian(double major) const {
  const double ring = major + rho * std::cos(alpha);
  return {ring * std::cos(phi), ring * std::sin(phi), rho * std::sin(alpha)};
}

SolidTorusPoint leaf_embed(const LeafChart&, double u, double v) {
  const double s = std::hypot(u, v);
  return {LeafChart::inverse_profile(s), s == 0.0 ? 0.0 : std::atan2(v, u), wrap_angle(s)};
}

Vec2 band_point(int k, double a, double b) {
  const double s = kTwoPi * k + b;
  return {s * std::cos(a), s * std::sin(a)};
}

SolidTorusPoint marked_point() { return {1.0, pi, pi}; }

PlanarField leaf_system(const PlanarField& base, const LeafChart&) {
  const double end = 0.95 * kTwoPi;
  const double width = 0.1 * kTwoPi;
  return {[g = base.eval, end, width](const Vec2& x) {
            const double s = norm(x);
            const double w = smooth_step((s - (end - width)) / width);
            Vec2 out = (1.0 - w) * x;
            if (w > 0.0) {
              const double a = std::atan2(x[1], x[0]);
              const Vec2 polar = g({a, s});  // (da, ds)
              const double c = std::cos(a), sn = std::sin(a);
              out = out + w * Vec2{polar[1] * c - s * polar[0] * sn, polar[1] * sn + s * polar[0] * c};
            }
            return out;
          },
          false};
}

std::vector<Equilibrium> leaf_equilibria(int bands) {
  std::vector<Equilibrium> out{{{0.0, 0.0}, EquilibriumKind::source}};
  for (int k = 1; k <= bands; ++k) {
    out.push_back({band_point(k, 0.0, 0.0), EquilibriumKind::sink});
    out.push_back({band_point(k, pi, 0.0), EquilibriumKind::saddle});
    out.push_back({band_point(k, 0.0, pi), EquilibriumKind::saddle});
    out.push_back({band_point(k, pi, pi), EquilibriumKind::source});
  }
  return out;
}

std::vector<std::pair<int, Equilibrium>> Genus2System::equilibria() const {
  std::vector<std::pair<int, Equilibrium>> out;
  const Vec2 lo{0.0, 0.0}, hi{kTwoPi, kTwoPi};
  for (const Equilibrium& e : find_equilibria(torus1, lo, hi)) {
    if (norm(periodic_offset(e.point, hole1)) >= radius) out.push_back({1, e});
  }
  for (const Equilibrium& e : find_equilibria(torus2, lo, hi)) {
    if (norm(periodic_offset(e.point, hole2)) >= radius) out.push_back({2, e});
  }
  return out;
}

int Genus2System::index_sum(double r) const {
  int sum = 0;
  for (const auto& [chart, e] : equilibria()) {
    sum += equilibrium_index(chart == 1 ? torus1 : torus2, e.point, r);
  }
  return sum;
}

Genus2System connected_sum_field(const PlanarField& sys1, double rho) {
  if (!sys1.periodic) throw DomainError("connected sum needs a torus field");
  if (rho <= 0.0) throw DomainError("disk radius must be positive");
  const Vec2 lo{0.0, 0.0}, hi{kTwoPi, kTwoPi};
  const std::vector<Equilibrium> eq = find_equilibria(sys1, lo, hi);
  const auto sink = std::find_if(eq.begin(), eq.end(),
                                 [](const Equilibrium& e) { return e.kind == EquilibriumKind::sink; });
  if (sink == eq.end()) throw DomainError("sys1 has no sink to remove");
  const Vec2 hole = sink->point;
  for (const Equilibrium& e : eq) {
    if (&e == &*sink) continue;
    if (norm(periodic_offset(e.point, hole)) <= 2.0 * rho) {
      throw DomainError("disk radius exceeds the clearance to the nearest other equilibrium");
    }
  }

  const PlanarField sys2 = reversed(sys1);
  auto blended = [rho](std::function<Vec2(const Vec2&)> g, Vec2 e, double sign) {
    return PlanarField{[g = std::move(g), e, rho, sign](const Vec2& x) {
                         const Vec2 d = periodic_offset(x, e);
                         const double w = 1.0 - smooth_step((norm(d) - rho) / rho);
                         if (w == 0.0) return g(x);
                         return (1.0 - w) * g(x) + (w * sign) * d;
                       },
                       true};
  };

  Genus2System G;
  G.torus1 = blended(sys1.eval, hole, -1.0);
  G.torus2 = blended(sys2.eval, hole, 1.0);
  G.hole1 = hole;
  G.hole2 = hole;
  G.radius = rho;
  G.neck = [](double, double) { return Vec2{1.0, 0.0}; };
  G.singular_line = {{"V1 leaf origin", leaf_embed({}, 0.0, 0.0)},
                     {"V2 leaf origin", leaf_embed({}, 0.0, 0.0)}};
  return G;
}

void HeegaardGluing::validate() const {
  if (genus < 1 || genus > 2) throw DomainError("Heegaard gluing supports genus 1 and 2 only");
  if (std::abs(det()) != 1) throw DomainError("gluing matrix is not unimodular");
}

Vec2 HeegaardGluing::apply(const Vec2& x) const {
  return {psi[0][0] * x[0] + psi[0][1] * x[1], psi[1][0] * x[0] + psi[1][1] * x[1]};
}

Vec2 HeegaardGluing::apply_inverse(const Vec2& x) const {
  const int d = det();
  return {(psi[1][1] * x[0] - psi[0][1] * x[1]) * d, (-psi[1][0] * x[0] + psi[0][0] * x[1]) * d};
}

Vec2 CollarField::operator()(double t, const Vec2& x) const {
  const Vec2 base = x2(x);
  const Vec2 twisted = gluing.apply_inverse(x2(gluing.apply(x)));
  return base + t * (twisted - base);
}

PlanarField CollarField::at(double t) const {
  return {[self = *this, t](const Vec2& x) { return self(t, x); }, x2.periodic};
}

CollarField heegaard_glue(const PlanarField& X1, const PlanarField& X2,
                          const HeegaardGluing& gluing) {
  gluing.validate();
  if (gluing.genus != 1) throw DomainError("genus-2 gluing needs the connected-sum charts");
  return {X1, X2, gluing};
}

std::array<CollarField, 2> heegaard_glue(const Genus2System& X1, const Genus2System& X2,
                                         const HeegaardGluing& gluing) {
  gluing.validate();
  if (gluing.genus != 2) throw DomainError("connected-sum charts need a genus-2 gluing");
  return {CollarField{X1.torus1, X2.torus1, gluing}, CollarField{X1.torus2, X2.torus2, gluing}};
}

PlanarField pullback(const PlanarField& X, const HeegaardGluing& gluing) {
  return {[g = X.eval, gluing](const Vec2& x) { return gluing.apply_inverse(g(gluing.apply(x))); },
          X.periodic};
}

double boundary_matching_residual(const CollarField& glued, int n) {
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 x{kTwoPi * i / n, kTwoPi * j / n};
      const Vec2 target = glued.x1(x);
      worst = std::max(worst, norm(glued(1.0, x) - target) / (1.0 + norm(target)));
    }
  }
  return worst;
}

namespace {

GridSample grid_point(const PlanarField& f, int n, const Vec2& lo, const Vec2& hi, int i, int j) {
  const double u = n > 1 ? lo[0] + (hi[0] - lo[0]) * i / (n - 1) : lo[0];
  const double v = n > 1 ? lo[1] + (hi[1] - lo[1]) * j / (n - 1) : lo[1];
  const Vec2 d = f({u, v});
  return {u, v, d[0], d[1]};
}

}  // namespace

std::vector<GridSample> sample_grid(const PlanarField& f, int n, const Vec2& lo, const Vec2& hi) {
  std::vector<GridSample> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(j * n + i)] = grid_point(f, n, lo, hi, i, j);
  }
  return out;
}

std::vector<GridSample> sample_grid_serial(const PlanarField& f, int n, const Vec2& lo,
                                           const Vec2& hi) {
  std::vector<GridSample> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out.push_back(grid_point(f, n, lo, hi, i, j));
  }
  return out;
}

}  // namespace h3flow
