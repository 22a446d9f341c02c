// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "h3flow/autoform.hpp"
#include "h3flow/ballmodel.hpp"
#include "h3flow/cli.hpp"
#include "h3flow/flow.hpp"
#include "h3flow/moebius.hpp"
#include "h3flow/reeb.hpp"
#include "h3flow/scenarios.hpp"

using namespace h3flow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_err(const HPoint& a, const HPoint& b) {
  const double d = std::hypot(a.x - b.x, a.y - b.y, a.r - b.r);
  return d / std::max(1.0, std::hypot(b.x, b.y, b.r));
}

void ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  const GroupPresentation G = example3::group();
  auto ball = std::make_shared<const WordBall>(enumerate_ball(G, 4));
  const AutomorphicField F = AutomorphicField::make(ball, 2, example3::h1(), example3::h2());
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 3.0), h(0.2, 3.0);
  std::vector<HPoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({u(rng), u(rng), h(rng)});
  const double worst = term_covariance_sweep(G, F, pts);
  const double secs = seconds_since(t0);
  report("AC1", worst < 1e-10 && secs < 10.0,
         "per-term covariance: " + std::to_string(ball->size()) + " words x 5 generators x 50 points, max residual " +
             fmt("%.3e", worst) + " (< 1e-10), " + fmt("%.2f", secs) + " s (< 10 s)");
}

double max_residual(const AutomorphicField& F, const MoebiusMap& T) {
  double worst = 0.0;
  for (const HPoint& p : example3::probe_points()) worst = std::max(worst, covariance_residual(F, T, p));
  return worst;
}

void ac2() {
  const GroupPresentation G = example3::group();
  const MoebiusMap T2 = G.generators[1];
  std::vector<double> trend;
  bool monotone = true;
  std::string detail = "T2 residual at radii 2/4/6:";
  std::vector<double> previous(10, INFINITY);
  for (int r : {2, 4, 6}) {
    const auto F = example3::field(r);
    const auto pts = example3::probe_points();
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double e = covariance_residual(*F, T2, pts[i]);
      monotone = monotone && e <= previous[i];
      previous[i] = e;
      worst = std::max(worst, e);
    }
    detail += " " + fmt("%.4g", worst);
  }
  report("AC2a", monotone, detail + " (non-increasing at each of 10 points)");

  const GroupPresentation single = GroupPresentation::make({T2}, {"T2"});
  auto ball = std::make_shared<const WordBall>(enumerate_ball(single, 12));
  const AutomorphicField F = AutomorphicField::make(ball, 2, example3::h1(), example3::h2());
  const double worst = max_residual(F, T2);
  report("AC2b", worst < 1e-6,
         "{T2} group, m=2, radius 12 (" + std::to_string(ball->size()) + " words): residual " +
             fmt("%.3e", worst) + " (< 1e-6)");
}

void ac3() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(0.1, 3.0);
  auto random_map = [&] {
    for (;;) {
      MoebiusMap T{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
      if (std::abs(T.det()) > 0.1) return T;
    }
  };
  double hom = 0.0, round = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MoebiusMap S = random_map(), T = random_map();
    const HPoint p{u(rng), u(rng), h(rng)};
    hom = std::max(hom, rel_err(apply(compose(S, T), p), apply(S, apply(T, p))));
    round = std::max(round, rel_err(apply(inverse(T), apply(T, p)), p));
  }
  const bool classes = classify({1.0, 2.0, 0.0, 1.0}) == TransformClass::parabolic &&
                       classify({0.0, -1.0, 1.0, 0.0}) == TransformClass::elliptic &&
                       classify(normalize({1.0, 0.0, 0.0, 2.0})) == TransformClass::hyperbolic;
  report("AC3", hom < 1e-10 && round < 1e-10 && classes,
         "1000 samples: homomorphism " + fmt("%.3e", hom) + ", inverse round trip " + fmt("%.3e", round) +
             " (< 1e-10); classification " + (classes ? "parabolic/elliptic/hyperbolic" : "wrong"));
}

void ac4() {
  const auto t0 = std::chrono::steady_clock::now();
  const FundamentalDomain D = klein_bottle_domain();
  IntegratorOptions opts;
  opts.rtol = 1e-9;
  opts.atol = 1e-9;
  const PendulumParams still{9.8, 0.0};
  auto drift_of = [&](const Trajectory& tr, const State& x0) {
    double drift = 0.0;
    for (const Segment& s : tr.segments) {
      for (const Sample& q : s.samples) {
        drift = std::max(drift, std::abs(planar_energy(q.x, still) - planar_energy(x0, still)));
      }
    }
    return drift;
  };
  const State x0{1.0, 0.5, 0.0, 0.0};
  const Trajectory osc = integrate_wrapped(pendulum_vector_field(still), x0, 100.0, D, opts);
  const double drift = drift_of(osc, x0);

  const PendulumParams twisting{9.8, 0.5};
  const VectorField f = pendulum_vector_field(twisting);
  const Trajectory flip = integrate_wrapped(f, {1.0, 0.5, 0.0, 1.3}, 60.0, D, opts);
  std::size_t flips = 0;
  for (const CrossingEvent& ev : flip.events) flips += ev.exit_side[1] == '3';
  const double continuity = continuity_residual(flip, f, D);

  const Trajectory rot = integrate_wrapped(pendulum_vector_field(still), {0.0, 7.0, 0.0, 0.0}, 100.0, D, opts);
  double wrap = 0.0;
  for (const CrossingEvent& ev : rot.events) {
    const double shift = ev.exit_side == "x1+" ? -2 * pi : 2 * pi;
    double d = std::abs(ev.exit_point[0] + shift - ev.entry_point[0]);
    for (std::size_t i = 1; i < 4; ++i) d = std::max(d, std::abs(ev.exit_point[i] - ev.entry_point[i]));
    wrap = std::max(wrap, d);
  }
  const double secs = seconds_since(t0);
  const bool ok = osc.stop == StopReason::reached_end && drift < 1e-6 && flips > 0 && continuity < 1e-9 &&
                  !rot.events.empty() && wrap < 1e-9 && secs < 5.0;
  report("AC4", ok,
         "energy drift " + fmt("%.3e", drift) + " (< 1e-6); " + std::to_string(flips) +
             " x3 flips, continuity " + fmt("%.3e", continuity) + " (< 1e-9); " +
             std::to_string(rot.events.size()) + " x1 wraps, re-entry error " + fmt("%.3e", wrap) +
             " (< 1e-9); " + fmt("%.2f", secs) + " s (< 5 s)");
}

void ac5() {
  const TetrahedralComplex K = build_complex();
  const auto cycles = edge_cycles(K);
  std::map<std::tuple<int, int, int>, int> seen;
  bool sizes = cycles.size() == 2;
  for (const EdgeClass& c : cycles) {
    sizes = sizes && c.members.size() == 6;
    for (const EdgeRef& e : c.members) ++seen[{e.tet, e.a, e.b}];
  }
  bool partition = seen.size() == 12;
  for (const auto& [edge, n] : seen) partition = partition && n == 1;
  const DihedralReport rep = dihedral_check(K, cycles, 1e-6);
  double angle_err = 0.0;
  for (const DihedralClassReport& c : rep.classes) angle_err = std::max(angle_err, std::abs(c.angle_sum - 2 * pi));
  double vertex_err = 0.0;
  for (const FaceGluing& g : K.pairing.gluings) {
    const BallIsometry phi = face_isometry(K, g);
    for (int v = 0; v < 4; ++v) {
      if (v == g.source) continue;
      const auto sv = static_cast<std::size_t>(v);
      vertex_err = std::max(vertex_err, norm(phi.apply_boundary(K.second.vertices[sv]) -
                                             K.first.vertices[static_cast<std::size_t>(g.vertex_map[sv])]));
    }
  }
  report("AC5", sizes && partition && rep.proper() && angle_err < 1e-6 && vertex_err < 1e-9,
         std::to_string(cycles.size()) + " edge classes" + (sizes ? " of 6" : "") +
             (partition ? ", partition of 12 edges" : ", NOT a partition") + "; dihedral sum error " +
             fmt("%.3e", angle_err) + " (< 1e-6); vertex error " + fmt("%.3e", vertex_err) + " (< 1e-9)");
}

void ac6() {
  const PlanarField f = torus_field();
  const auto eq = find_equilibria(f, {0, 0}, {2 * pi, 2 * pi});
  std::vector<int> indices;
  bool stable = eq.size() == 4;
  int sum = 0;
  for (const Equilibrium& e : eq) {
    const int i05 = equilibrium_index(f, e.point, 0.05);
    stable = stable && i05 == equilibrium_index(f, e.point, 0.1) && i05 == equilibrium_index(f, e.point, 0.2);
    indices.push_back(i05);
    sum += i05;
  }
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  const bool pattern = sorted == std::vector<int>{-1, -1, 1, 1};
  const int genus2 = connected_sum_field(f, 0.5).index_sum();
  std::string list;
  for (int i : indices) list += (list.empty() ? "" : ",") + std::to_string(i);
  report("AC6", stable && pattern && sum == 0 && genus2 == -2,
         "torus indices (" + list + ") at radii 0.05/0.1/0.2" + (stable ? "" : " NOT stable") + ", sum " +
             std::to_string(sum) + "; genus-2 index sum " + std::to_string(genus2));
}

void ac7() {
  const PlanarField X2 = torus_field();
  const CollarField id = heegaard_glue(X2, X2, HeegaardGluing{});
  const int n = 64;
  std::size_t mismatches = 0;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto a = sample_grid_serial(id.at(t), n, {0, 0}, {2 * pi, 2 * pi});
    const auto b = sample_grid_serial(X2, n, {0, 0}, {2 * pi, 2 * pi});
    for (std::size_t i = 0; i < a.size(); ++i) mismatches += a[i].du != b[i].du || a[i].dv != b[i].dv;
  }
  const HeegaardGluing swap{1, {{{0, 1}, {1, 0}}}};
  const PlanarField X2b{[](const Vec2& x) {
                          return Vec2{std::sin(x[0]) + 0.3 * std::cos(2 * x[1]), std::cos(x[0] + x[1]) - 0.2};
                        },
                        true};
  const CollarField glued = heegaard_glue(pullback(X2b, swap), X2b, swap);
  const double match = boundary_matching_residual(glued, n);
  std::size_t t0_mismatch = 0;
  const auto y0 = sample_grid_serial(glued.at(0.0), n, {0, 0}, {2 * pi, 2 * pi});
  const auto x2 = sample_grid_serial(X2b, n, {0, 0}, {2 * pi, 2 * pi});
  for (std::size_t i = 0; i < y0.size(); ++i) t0_mismatch += y0[i].du != x2[i].du || y0[i].dv != x2[i].dv;
  report("AC7", mismatches == 0 && match < 1e-9 && t0_mismatch == 0,
         "identity gluing: " + std::to_string(mismatches) + " differing grid values; swap boundary residual " +
             fmt("%.3e", match) + " (< 1e-9); t=0 differing values " + std::to_string(t0_mismatch));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string invoke(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "h3flow");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

void ac8() {
  const fs::path dir = fs::temp_directory_path() / "h3flow_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.json";
  int code = 0;
  invoke({"--seed", "11", "--radius", "3", "--dump-config", cfg.string(), "validate"}, code);
  bool ok = code == 0;
  std::vector<std::string> cov, integ;
  for (const char* threads : {"1", "1", "4"}) {
    cov.push_back(invoke({"--config", cfg.string(), "--threads", threads, "covariance", "--radii", "2,4"}, code));
    ok = ok && code == 0;
    const fs::path csv = dir / "t.csv", ev = dir / "t.events", svg = dir / "t.svg";
    std::string text = invoke({"--config", cfg.string(), "--threads", threads, "integrate", "--count", "4",
                               "--t", "2", "--out", csv.string(), "--events", ev.string(), "--svg", svg.string()},
                              code);
    ok = ok && code == 0;
    integ.push_back(text + slurp(csv) + slurp(ev) + slurp(svg));
  }
  const bool same = cov[0] == cov[1] && cov[1] == cov[2] && integ[0] == integ[1] && integ[1] == integ[2];
  report("AC8", ok && same,
         std::string("covariance and integrate outputs across repeated runs and 1/4 threads: ") +
             (same ? "byte-identical" : "DIFFER"));
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
