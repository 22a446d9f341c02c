#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <omp.h>

#include "h3flow/errors.hpp"
#include "h3flow/flow.hpp"
#include "h3flow/scenarios.hpp"

using namespace h3flow;
using std::numbers::pi;

namespace {

VectorField constant_field(State v) {
  return [v](const State&) { return v; };
}

double dist(const State& a, const State& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

IntegratorOptions tight() {
  IntegratorOptions o;
  o.rtol = 1e-9;
  o.atol = 1e-9;
  return o;
}

}  // namespace

TEST_CASE("straight line on the 3-torus") {
  const FundamentalDomain D = cube_torus(-pi, pi);
  const VectorField f = constant_field({1, 0, 0, 0});
  const Trajectory tr = integrate_wrapped(f, {0, 0, 0, 0}, 2 * pi, D);
  CHECK(tr.stop == StopReason::reached_end);
  REQUIRE(tr.events.size() == 1);
  CHECK(tr.events[0].exit_side == "x+");
  CHECK(tr.events[0].entry_side == "x-");
  CHECK(tr.events[0].entry_point[0] == doctest::Approx(-pi).epsilon(1e-9));
  CHECK(std::abs(tr.back().x[0]) < 1e-9);
  CHECK(tr.back().t == 2 * pi);
  CHECK(tr.segments.size() == 2);
  CHECK(tr.segments[1].word == "x-");
  CHECK(continuity_residual(tr, f, D) == 0.0);
  CHECK(segment_link_error(tr, D) < 1e-12);
}

TEST_CASE("zero field") {
  const Trajectory tr =
      integrate_wrapped(constant_field({0, 0, 0, 0}), {0.1, 0.2, 0.3, 0}, 5.0, cube_torus(-1, 1));
  CHECK(tr.stop == StopReason::equilibrium);
  CHECK(tr.segments.size() == 1);
  CHECK(tr.segments[0].samples.size() == 1);
  CHECK(tr.events.empty());
}

TEST_CASE("start outside the domain") {
  CHECK_THROWS_AS(integrate_wrapped(constant_field({1, 0, 0, 0}), {2, 0, 0, 0}, 1.0, cube_torus(-1, 1)),
                  DomainError);
}

TEST_CASE("mismatched faces trap the curve") {
  const VectorField outward = [](const State& x) { return State{x[0], 0.0, 0.0, 0.0}; };
  const Trajectory tr = integrate_wrapped(outward, {0.5, 0, 0, 0}, 10.0, cube_torus(-1, 1));
  CHECK(tr.stop == StopReason::face_trap);
  CHECK(tr.events.size() == 1);
}

TEST_CASE("escape box") {
  IntegratorOptions o;
  o.escape_box = std::make_pair(Vec3{-10, -10, -10}, Vec3{10, 2, 10});
  const Trajectory tr =
      integrate_wrapped(constant_field({0, 1, 0, 0}), {0, 0, 0, 0}, 10.0, klein_bottle_domain(), o);
  CHECK(tr.stop == StopReason::escaped);
  CHECK(tr.back().x[1] > 2.0);
  CHECK(tr.back().x[1] < 2.6);
}

TEST_CASE("step budget") {
  IntegratorOptions o;
  o.max_steps = 10;
  o.max_step = 0.01;
  const Trajectory tr = integrate_wrapped(constant_field({0.01, 0, 0, 0}), {0, 0, 0, 0}, 10.0, cube_torus(-1, 1), o);
  CHECK(tr.stop == StopReason::budget);
}

TEST_CASE("pendulum field") {
  const PendulumParams p{9.8, 0.5};
  const State rest = pendulum_field({0, 0, 0, 0.7}, p);
  CHECK(rest == State{0, 0, 0.5, 0});
  const State side = pendulum_field({pi / 2, 0, 0, 3.0}, p);
  CHECK(side[0] == 0.0);
  CHECK(side[1] == doctest::Approx(-9.8).epsilon(1e-15));
  CHECK(side[2] == 0.5);
  const State v = pendulum_field({pi / 4, 1, 0, 2}, p);
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(v[0] == 1.0);
  CHECK(v[1] == doctest::Approx(4.0 * h * h - 9.8 * h).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(2.0 - 6.929646455628166).epsilon(1e-14));
  CHECK(v[3] == 0.0);
}

TEST_CASE("solid Klein bottle pairing") {
  const FundamentalDomain D = klein_bottle_domain();
  CHECK(validate_side_pairing(D).ok());

  const Trajectory up = integrate_wrapped(constant_field({0, 0, 1, 0}), {1, 0.5, pi - 0.1, 0}, 0.2, D);
  REQUIRE(up.events.size() == 1);
  CHECK(up.events[0].exit_side == "x3+");
  const State e = up.events[0].entry_point;
  CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(-pi).epsilon(1e-9));

  const Trajectory across = integrate_wrapped(constant_field({1, 0, 0, 0}), {pi - 0.1, 0.5, 0, 0}, 0.2, D);
  REQUIRE(across.events.size() == 1);
  const State a = across.events[0].entry_point;
  CHECK(a[0] == doctest::Approx(-pi).epsilon(1e-9));
  CHECK(a[1] == 0.5);
  CHECK(a[2] == 0.0);
}

TEST_CASE("pendulum energy and continuity") {
  const FundamentalDomain D = klein_bottle_domain();
  SUBCASE("oscillation") {
    const PendulumParams p{9.8, 0.0};
    const State x0{1.0, 0.5, 0.0, 0.0};
    const Trajectory tr = integrate_wrapped(pendulum_vector_field(p), x0, 100.0, D, tight());
    CHECK(tr.stop == StopReason::reached_end);
    double drift = 0.0;
    for (const Segment& s : tr.segments) {
      for (const Sample& q : s.samples) {
        drift = std::max(drift, std::abs(planar_energy(q.x, p) - planar_energy(x0, p)));
      }
    }
    CHECK(drift < 1e-6);
  }
  SUBCASE("rotation wraps x1") {
    const PendulumParams p{9.8, 0.0};
    const State x0{0.0, 7.0, 0.0, 0.0};
    const Trajectory tr = integrate_wrapped(pendulum_vector_field(p), x0, 100.0, D, tight());
    CHECK(tr.events.size() > 50);
    double drift = 0.0;
    for (const Segment& s : tr.segments) {
      for (const Sample& q : s.samples) {
        drift = std::max(drift, std::abs(planar_energy(q.x, p) - planar_energy(x0, p)));
      }
    }
    CHECK(drift < 1e-6);
    for (const CrossingEvent& ev : tr.events) {
      const State image{ev.exit_point[0] - 2 * pi, ev.exit_point[1], ev.exit_point[2], ev.exit_point[3]};
      CHECK(dist(image, ev.entry_point) < 1e-9);
    }
    CHECK(segment_link_error(tr, D) < 1e-12);
  }
  SUBCASE("flip continuity") {
    const PendulumParams p{9.8, 0.5};
    const VectorField f = pendulum_vector_field(p);
    const Trajectory tr = integrate_wrapped(f, {1.0, 0.5, 0.0, 1.3}, 60.0, D, tight());
    bool flipped = false;
    for (const CrossingEvent& ev : tr.events) flipped |= ev.exit_side[1] == '3';
    CHECK(flipped);
    CHECK(continuity_residual(tr, f, D) < 1e-9);
    CHECK(segment_link_error(tr, D) < 1e-12);
  }
}

TEST_CASE("time reversal") {
  const FundamentalDomain D = klein_bottle_domain();
  const PendulumParams p{9.8, 0.5};
  const State x0{0.4, 1.0, 0.2, 0.8};
  IntegratorOptions o = tight();
  o.rtol = o.atol = 1e-11;
  const Trajectory fwd = integrate_wrapped(pendulum_vector_field(p), x0, 10.0, D, o);
  REQUIRE(fwd.stop == StopReason::reached_end);
  CHECK(fwd.events.size() >= 1);
  const Trajectory back = integrate_wrapped(reversed(pendulum_vector_field(p)), fwd.back().x, 10.0, D, o);
  CHECK(back.events.size() == fwd.events.size());
  CHECK(dist(back.back().x, x0) < 1e-6);
}

TEST_CASE("worked-example field") {
  const auto F = example3::field(4);
  const VectorField f = automorphic_vector_field(F);
  const FundamentalDomain D = example3::domain();
  const Trajectory tr = integrate_wrapped(f, {0.3, 0.2, 1.0, 0.0}, 5.0, D, IntegratorOptions{1e-8, 1e-8});
  // Regression anchors from the first run at radius 4.
  REQUIRE(tr.events.size() == 2);
  CHECK(tr.events[0].exit_side == "t1");
  CHECK(tr.events[1].exit_side == "s1");
  CHECK(tr.stop == StopReason::face_trap);
  CHECK(tr.back().t == doctest::Approx(2.438072).epsilon(1e-5));
  CHECK(tr.back().x[2] == doctest::Approx(14.974903).epsilon(1e-5));
  CHECK(segment_link_error(tr, D) < 1e-12);

  // Across a slanted face the map is a translation, so the continuity
  // mismatch is the covariance residual of the applied element.
  const CrossingEvent& ev = tr.events[1];
  const HPoint exit{ev.exit_point[0], ev.exit_point[1], ev.exit_point[2]};
  const MoebiusMap applied = std::get<MoebiusMap>(D.side(ev.entry_side).map);
  Trajectory single = tr;
  single.events = {ev};
  CHECK(continuity_residual(single, f, D) <= covariance_residual(*F, applied, exit) * (1 + 1e-9) + 1e-12);
}

TEST_CASE("batch integration is thread-count independent") {
  const FundamentalDomain D = klein_bottle_domain();
  const VectorField f = pendulum_vector_field({9.8, 0.5});
  std::vector<State> starts;
  for (int i = 0; i < 8; ++i) starts.push_back({-2.5 + 0.6 * i, 0.3 * i - 1.0, 0.1 * i, 0.5});
  const std::vector<Trajectory> ref = integrate_batch_serial(f, starts, 20.0, D);
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const std::vector<Trajectory> par = integrate_batch(f, starts, 20.0, D);
    REQUIRE(par.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(par[k].events.size() == ref[k].events.size());
      CHECK(par[k].back().x == ref[k].back().x);
      CHECK(par[k].back().t == ref[k].back().t);
    }
  }
}
