#include "h3flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "h3flow/errors.hpp"

namespace h3flow {

namespace {

using std::numbers::pi;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (int i = 0; i < 4; ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

double state_norm(const State& s) {
  return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3]);
}

struct StepResult {
  State y;
  double err = 0.0;  // max componentwise scaled error; accept when <= 1
};

// Dormand-Prince 4(5). Returns nullopt if a stage point is outside the
// field's domain (DomainError); PoleError propagates.
std::optional<StepResult> dp45_step(const VectorField& f, const State& y, const State& k1,
                                    double h, const IntegratorOptions& o) {
  try {
    const State k2 = f(axpy(y, h, {{1.0 / 5, &k1}}));
    const State k3 = f(axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const State k4 = f(axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const State k5 = f(axpy(y, h,
                            {{19372.0 / 6561, &k1},
                             {-25360.0 / 2187, &k2},
                             {64448.0 / 6561, &k3},
                             {-212.0 / 729, &k4}}));
    const State k6 = f(axpy(y, h,
                            {{9017.0 / 3168, &k1},
                             {-355.0 / 33, &k2},
                             {46732.0 / 5247, &k3},
                             {49.0 / 176, &k4},
                             {-5103.0 / 18656, &k5}}));
    StepResult r;
    r.y = axpy(y, h,
               {{35.0 / 384, &k1},
                {500.0 / 1113, &k3},
                {125.0 / 192, &k4},
                {-2187.0 / 6784, &k5},
                {11.0 / 84, &k6}});
    const State k7 = f(r.y);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double e = h * (71.0 / 57600 * k1[i] - 71.0 / 16695 * k3[i] + 71.0 / 1920 * k4[i] -
                            17253.0 / 339200 * k5[i] + 22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
      const double scale = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(r.y[i]));
      acc = std::max(acc, std::abs(e) / scale);
    }
    r.err = acc;
    if (!std::isfinite(r.err)) return std::nullopt;
    return r;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double side_violation(const FundamentalDomain& D, const Vec3& p, std::size_t* which = nullptr) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < D.sides.size(); ++i) {
    const double g = signed_distance(D.sides[i].constraint, p);
    if (g > worst) {
      worst = g;
      if (which) *which = i;
    }
  }
  return worst;
}

bool valid_point(const FundamentalDomain& D, const State& y) {
  for (double v : y) {
    if (!std::isfinite(v)) return false;
  }
  return D.geometry != Geometry::upper_half_space || y[2] > 0.0;
}

bool escaped(const IntegratorOptions& o, const State& y) {
  if (!o.escape_box) return false;
  const auto& [lo, hi] = *o.escape_box;
  for (int i = 0; i < 3; ++i) {
    if (y[i] < lo[i] || y[i] > hi[i]) return true;
  }
  return false;
}

State map_state(const SideMap& m, const State& y) {
  const Vec3 p = h3flow::apply(m, spatial(y));
  return {p[0], p[1], p[2], y[3]};
}

class Integrator {
 public:
  Integrator(const VectorField& f, const FundamentalDomain& D, const IntegratorOptions& o)
      : f_(f), D_(D), o_(o) {}

  Trajectory run(const State& x0, double t_end) {
    if (!valid_point(D_, x0) || !D_.contains(spatial(x0), 1e-9)) {
      throw DomainError("initial point is outside the fundamental domain");
    }
    traj_.segments.push_back({"I", {{0.0, x0}}});
    double t = 0.0;
    State y = x0;
    double h = std::min(o_.initial_step, o_.max_step);
    try {
      State k1 = f_(y);
      while (t < t_end) {
        if (state_norm(k1) < o_.equilibrium_threshold) {
          return finish(StopReason::equilibrium, "field vanishes: equilibrium reached");
        }
        if (traj_.steps + traj_.rejected >= o_.max_steps) {
          return finish(StopReason::budget, "step budget exhausted");
        }
        h = std::min({h, t_end - t, o_.max_step});
        const auto step = dp45_step(f_, y, k1, h, o_);
        const bool ok = step && valid_point(D_, step->y) && step->err <= 1.0;
        if (!ok) {
          ++traj_.rejected;
          const double factor =
              step && std::isfinite(step->err) && step->err > 0.0
                  ? std::clamp(0.9 * std::pow(step->err, -0.2), 0.1, 0.5)
                  : 0.25;
          h *= factor;
          if (h < o_.min_step) {
            return finish(step ? StopReason::budget : StopReason::escaped,
                          step ? "step size underflow" : "trajectory left the model space");
          }
          continue;
        }
        ++traj_.steps;
        const double grow =
            step->err > 0.0 ? std::clamp(0.9 * std::pow(step->err, -0.2), 0.2, 5.0) : 5.0;

        if (side_violation(D_, spatial(step->y)) <= o_.face_tol) {
          t = (h == t_end - t) ? t_end : t + h;
          y = step->y;
          traj_.segments.back().samples.push_back({t, y});
        } else {
          auto [theta, yc] = locate_crossing(y, k1, h);
          t += theta * h;
          y = yc;
          traj_.segments.back().samples.push_back({t, y});
          if (escaped(o_, y)) return finish(StopReason::escaped, "left the escape box");
          y = wrap(t, y);
          if (traj_.events.size() >= o_.max_crossings) {
            return finish(StopReason::budget, "crossing budget exhausted");
          }
          if (escaped(o_, y)) return finish(StopReason::escaped, "left the escape box");
          k1 = f_(y);
          if (leaves_through(traj_.events.back().entry_side, y, k1)) {
            return finish(StopReason::face_trap,
                          "field points out of entry face " + traj_.events.back().entry_side);
          }
          h *= grow;
          continue;
        }
        if (escaped(o_, y)) return finish(StopReason::escaped, "left the escape box");
        h *= grow;
        k1 = f_(y);
      }
    } catch (const PoleError& e) {
      return finish(StopReason::pole, pole_message(e.what(), y));
    } catch (const OverflowError& e) {
      return finish(StopReason::pole, pole_message(e.what(), y));
    }
    return finish(StopReason::reached_end, "");
  }

 private:
  // Bisection on the step fraction until the exit face distance is within
  // face_tol. Keeps `hi` outside, `lo` inside.
  std::pair<double, State> locate_crossing(const State& y, const State& k1, double h) {
    double lo = 0.0;
    double hi = 1.0;
    State y_hi{};
    bool have_hi = false;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const auto s = dp45_step(f_, y, k1, mid * h, o_);
      if (!s || !valid_point(D_, s->y)) {
        hi = mid;
        continue;
      }
      const double g = side_violation(D_, spatial(s->y));
      if (std::abs(g) <= o_.face_tol) return {mid, s->y};
      if (g > 0.0) {
        hi = mid;
        y_hi = s->y;
        have_hi = true;
      } else {
        lo = mid;
      }
      if ((hi - lo) * h < 1e-16) break;
    }
    if (have_hi) return {hi, y_hi};
    const auto s = dp45_step(f_, y, k1, hi * h, o_);
    return {hi, s ? s->y : y};
  }

  bool leaves_through(const std::string& label, const State& y, const State& v) const {
    const Constraint& c = D_.side(label).constraint;
    const double speed = norm(spatial(v));
    if (speed == 0.0) return false;
    const double delta = 1e-6 / speed;
    const Vec3 ahead = spatial(y) + delta * spatial(v);
    return signed_distance(c, ahead) > signed_distance(c, spatial(y)) + 1e-3 * o_.face_tol;
  }

  // Applies partner maps until the point is back in the closure (corners
  // can need more than one).
  State wrap(double t, State y) {
    for (int pass = 0; pass < 4; ++pass) {
      std::size_t exit = 0;
      const double g = side_violation(D_, spatial(y), &exit);
      if (pass > 0 && g <= 10.0 * o_.face_tol) break;
      const Side& out = D_.sides[exit];
      const Side& in = D_.partner_of(out);
      CrossingEvent ev;
      ev.t = t;
      ev.exit_side = out.label;
      ev.entry_side = in.label;
      ev.exit_point = y;
      ev.entry_point = map_state(in.map, y);
      const std::string prev = traj_.segments.back().word;
      traj_.events.push_back(ev);
      traj_.segments.push_back(
          {prev == "I" ? in.label : prev + " " + in.label, {{t, ev.entry_point}}});
      y = ev.entry_point;
    }
    return y;
  }

  static std::string pole_message(const std::string& what, const State& y) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " near (%.17g, %.17g, %.17g)", y[0], y[1], y[2]);
    return what + buf;
  }

  Trajectory finish(StopReason r, std::string msg) {
    traj_.stop = r;
    traj_.message = std::move(msg);
    return std::move(traj_);
  }

  const VectorField& f_;
  const FundamentalDomain& D_;
  const IntegratorOptions& o_;
  Trajectory traj_;
};

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::reached_end: return "reached_end";
    case StopReason::equilibrium: return "equilibrium";
    case StopReason::pole: return "pole";
    case StopReason::budget: return "budget";
    case StopReason::escaped: return "escaped";
    case StopReason::face_trap: return "face_trap";
  }
  return "unknown";
}

Trajectory integrate_wrapped(const VectorField& f, const State& x0, double t_end,
                             const FundamentalDomain& D, const IntegratorOptions& opts) {
  return Integrator(f, D, opts).run(x0, t_end);
}

std::vector<Trajectory> integrate_batch(const VectorField& f, const std::vector<State>& starts,
                                        double t_end, const FundamentalDomain& D,
                                        const IntegratorOptions& opts) {
  std::vector<Trajectory> out(starts.size());
  std::vector<std::string> errors(starts.size());
  const auto n = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = integrate_wrapped(f, starts[k], t_end, D, opts);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k].empty()) {
      throw DomainError("trajectory " + std::to_string(k) + ": " + errors[k]);
    }
  }
  return out;
}

std::vector<Trajectory> integrate_batch_serial(const VectorField& f,
                                               const std::vector<State>& starts, double t_end,
                                               const FundamentalDomain& D,
                                               const IntegratorOptions& opts) {
  std::vector<Trajectory> out;
  out.reserve(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    try {
      out.push_back(integrate_wrapped(f, starts[k], t_end, D, opts));
    } catch (const std::exception& e) {
      throw DomainError("trajectory " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

VectorField reversed(VectorField f) {
  return [f = std::move(f)](const State& x) {
    State v = f(x);
    for (double& c : v) c = -c;
    return v;
  };
}

double continuity_residual(const Trajectory& traj, const VectorField& f,
                           const FundamentalDomain& D) {
  double worst = 0.0;
  for (const CrossingEvent& ev : traj.events) {
    const SideMap& m = D.side(ev.entry_side).map;
    const State v_in = f(ev.exit_point);
    const Vec3 pushed3 = push_vector(m, spatial(ev.exit_point), spatial(v_in));
    const State pushed{pushed3[0], pushed3[1], pushed3[2], v_in[3]};
    const State v_out = f(ev.entry_point);
    State diff{};
    for (int i = 0; i < 4; ++i) diff[i] = pushed[i] - v_out[i];
    worst = std::max(worst, state_norm(diff) / (1.0 + state_norm(pushed)));
  }
  return worst;
}

double segment_link_error(const Trajectory& traj, const FundamentalDomain& D) {
  double worst = 0.0;
  auto dist = [](const State& a, const State& b) {
    State d{};
    for (int i = 0; i < 4; ++i) d[i] = a[i] - b[i];
    return state_norm(d);
  };
  if (traj.segments.size() != traj.events.size() + 1) {
    return std::numeric_limits<double>::infinity();
  }
  for (std::size_t k = 0; k < traj.events.size(); ++k) {
    const CrossingEvent& ev = traj.events[k];
    const SideMap& m = D.side(ev.entry_side).map;
    worst = std::max(worst, dist(map_state(m, ev.exit_point), ev.entry_point));
    worst = std::max(worst, dist(traj.segments[k].samples.back().x, ev.exit_point));
    worst = std::max(worst, dist(traj.segments[k + 1].samples.front().x, ev.entry_point));
  }
  return worst;
}

VectorField automorphic_vector_field(std::shared_ptr<const AutomorphicField> F) {
  return [F = std::move(F)](const State& s) {
    const Quaternion v = eval_field(*F, HPoint{s[0], s[1], s[2]});
    return State{v.w, v.x, v.y, 0.0};
  };
}

State pendulum_field(const State& x, const PendulumParams& p) {
  const double s = std::sin(x[0]);
  const double c = std::cos(x[0]);
  return {x[1], x[3] * x[3] * s * c - p.g_over_l * s, p.k, 0.0};
}

VectorField pendulum_vector_field(const PendulumParams& params) {
  return [params](const State& x) { return pendulum_field(x, params); };
}

double planar_energy(const State& x, const PendulumParams& p) {
  return 0.5 * x[1] * x[1] - p.g_over_l * std::cos(x[0]);
}

FundamentalDomain klein_bottle_domain(double x2max) {
  FundamentalDomain D;
  D.geometry = Geometry::euclidean;
  const AffineIsometry shift_plus = AffineIsometry::translation({2 * pi, 0.0, 0.0});
  const AffineIsometry shift_minus = AffineIsometry::translation({-2 * pi, 0.0, 0.0});
  AffineIsometry flip_up;
  flip_up.linear = {Vec3{-1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1}};
  flip_up.shift = {0.0, 0.0, 2 * pi};
  AffineIsometry flip_down = flip_up;
  flip_down.shift = {0.0, 0.0, -2 * pi};
  D.sides.push_back({"x1+", HalfSpace{{1, 0, 0}, pi}, "x1-", shift_plus, ""});
  D.sides.push_back({"x1-", HalfSpace{{-1, 0, 0}, pi}, "x1+", shift_minus, ""});
  D.sides.push_back({"x3+", HalfSpace{{0, 0, 1}, pi}, "x3-", flip_up, ""});
  D.sides.push_back({"x3-", HalfSpace{{0, 0, -1}, pi}, "x3+", flip_down, ""});
  D.box_lo = {-pi, -x2max, -pi};
  D.box_hi = {pi, x2max, pi};
  D.outline = {{-pi, -x2max, -pi}, {pi, -x2max, -pi}, {pi, x2max, -pi}, {-pi, x2max, -pi}};
  return D;
}

double compress_x2(double x2) { return 2.0 / pi * std::atan(x2); }

}  // namespace h3flow
