#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "h3flow/autoform.hpp"
#include "h3flow/domain.hpp"

namespace h3flow {

/// Phase point. The first three coordinates live in the fundamental domain;
/// the fourth is a passive parameter carried across faces (zero for
/// three-dimensional fields).
using State = std::array<double, 4>;

/// Autonomous vector field. May throw PoleError.
using VectorField = std::function<State(const State&)>;

inline Vec3 spatial(const State& s) { return {s[0], s[1], s[2]}; }

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  double max_step = 0.5;
  /// Accepted plus rejected steps.
  std::size_t max_steps = 2'000'000;
  std::size_t max_crossings = 100'000;
  /// Face localisation tolerance on the signed face distance.
  double face_tol = 1e-10;
  /// |field| below this ends integration at an equilibrium.
  double equilibrium_threshold = 1e-12;
  /// Integration stops (escaped) once a coordinate leaves [lo, hi]. Used
  /// for directions the domain leaves unbounded.
  std::optional<std::pair<Vec3, Vec3>> escape_box;
};

/// face_trap: after a crossing the field points out of the entry face, so
/// the paired faces push the curve back and forth (a field that does not
/// match across the pairing, e.g. a truncated theta series).
enum class StopReason { reached_end, equilibrium, pole, budget, escaped, face_trap };
std::string to_string(StopReason r);

struct Sample {
  double t = 0.0;
  State x{};
};

/// Stretch of a trajectory between two face crossings.
struct Segment {
  /// Space-separated labels of the side maps applied so far ("I" at start).
  std::string word = "I";
  std::vector<Sample> samples;
};

struct CrossingEvent {
  double t = 0.0;
  std::string exit_side;     // face the curve left through
  std::string entry_side;    // partner face it re-enters from
  State exit_point{};        // on the exit face, before the map
  State entry_point{};       // image under the partner's map
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<CrossingEvent> events;
  StopReason stop = StopReason::reached_end;
  std::string message;
  std::size_t steps = 0;
  std::size_t rejected = 0;

  const Sample& back() const { return segments.back().samples.back(); }
};

/// Dormand-Prince 4(5) integration of x' = f(x) from x0 over [0, t_end]
/// with side-pairing continuation through the faces of D. Throws
/// DomainError if x0 is not in the closure of D. Poles, equilibria,
/// escapes and budget exhaustion end the trajectory and are reported in
/// `stop`.
Trajectory integrate_wrapped(const VectorField& f, const State& x0, double t_end,
                             const FundamentalDomain& D, const IntegratorOptions& opts = {});

/// Independent trajectories; runs in parallel, output order follows input.
std::vector<Trajectory> integrate_batch(const VectorField& f, const std::vector<State>& starts,
                                        double t_end, const FundamentalDomain& D,
                                        const IntegratorOptions& opts = {});
std::vector<Trajectory> integrate_batch_serial(const VectorField& f,
                                               const std::vector<State>& starts, double t_end,
                                               const FundamentalDomain& D,
                                               const IntegratorOptions& opts = {});

/// Negated field, for backward integration.
VectorField reversed(VectorField f);

/// Largest |dtau(f(exit)) - f(entry)| / (1 + |dtau(f(exit))|) over the
/// crossing events; zero when there are none.
double continuity_residual(const Trajectory& traj, const VectorField& f,
                           const FundamentalDomain& D);

/// Link check: every entry point is the partner map image of the exit point
/// and starts the next segment. Returns the largest mismatch.
double segment_link_error(const Trajectory& traj, const FundamentalDomain& D);

/// Field p -> F(p) of an automorphic field on (x, y, r), fourth slot zero.
VectorField automorphic_vector_field(std::shared_ptr<const AutomorphicField> F);

struct PendulumParams {
  double g_over_l = 9.8;
  double k = 0.0;
};

/// (x1, x2, x3, x4) -> (x2, x4^2 sin x1 cos x1 - (g/l) sin x1, k, 0).
State pendulum_field(const State& x, const PendulumParams& params);
VectorField pendulum_vector_field(const PendulumParams& params);

/// Planar energy 1/2 x2^2 - (g/l) cos x1, conserved when x4 = 0.
double planar_energy(const State& x, const PendulumParams& params);

/// Cube [-pi, pi] x [-x2max, x2max] x [-pi, pi]. The x1 faces are paired by
/// translation, the x3 faces by (x1, x2, x3) -> (-x1, -x2, x3 -+ 2 pi).
/// The x2 faces are not paired: x2 is unbounded and `x2max` only sets the
/// box used for sampling and escape.
FundamentalDomain klein_bottle_domain(double x2max = 10.0);

/// Compresses x2 to (-1, 1) for display.
double compress_x2(double x2);

}  // namespace h3flow
