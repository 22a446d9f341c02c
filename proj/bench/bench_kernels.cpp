// Serial reference vs OpenMP kernels. Usage: bench_kernels [threads] [repeats]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <omp.h>

#include "h3flow/autoform.hpp"
#include "h3flow/flow.hpp"
#include "h3flow/reeb.hpp"
#include "h3flow/scenarios.hpp"

using namespace h3flow;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  omp_set_num_threads(threads);
  std::printf("threads %d, best of %d\n", threads, repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  const GroupPresentation G = example3::group();
  WordBall bs, bp;
  const double s_ball = best_of(repeats, [&] { bs = enumerate_ball_serial(G, 6); });
  const double p_ball = best_of(repeats, [&] { bp = enumerate_ball(G, 6); });
  row("enumerate_ball N=6", s_ball, p_ball, bs.size() == bp.size());

  const auto F = example3::field(6);
  const auto pts = example3::probe_points();
  Quaternion qs, qp;
  const double s_eval = best_of(repeats, [&] {
    for (const HPoint& p : pts) qs = eval_field_serial(*F, p);
  });
  const double p_eval = best_of(repeats, [&] {
    for (const HPoint& p : pts) qp = eval_field(*F, p);
  });
  row("eval_field N=6 x10", s_eval, p_eval, qs == qp);

  const auto F4 = example3::field(4);
  double ws = 0, wp = 0;
  const double s_sweep = best_of(repeats, [&] { ws = term_covariance_sweep_serial(G, *F4, pts); });
  const double p_sweep = best_of(repeats, [&] { wp = term_covariance_sweep(G, *F4, pts); });
  row("covariance sweep N=4", s_sweep, p_sweep, ws == wp);

  const FundamentalDomain D = klein_bottle_domain();
  std::vector<State> starts;
  for (int i = 0; i < 32; ++i) starts.push_back({-3.0 + 0.19 * i, 0.5 + 0.1 * i, 0.0, 0.3});
  const VectorField f = pendulum_vector_field({9.8, 0.5});
  std::vector<Trajectory> ts, tp;
  const double s_batch = best_of(repeats, [&] { ts = integrate_batch_serial(f, starts, 50.0, D); });
  const double p_batch = best_of(repeats, [&] { tp = integrate_batch(f, starts, 50.0, D); });
  bool same = ts.size() == tp.size();
  for (std::size_t i = 0; same && i < ts.size(); ++i) same = ts[i].back().x == tp[i].back().x;
  row("pendulum batch x32", s_batch, p_batch, same);

  const PlanarField leaf = leaf_system(torus_field());
  std::vector<GridSample> gs, gp;
  const double s_grid = best_of(repeats, [&] { gs = sample_grid_serial(leaf, 600, {-40, -40}, {40, 40}); });
  const double p_grid = best_of(repeats, [&] { gp = sample_grid(leaf, 600, {-40, -40}, {40, 40}); });
  same = gs.size() == gp.size();
  for (std::size_t i = 0; same && i < gs.size(); ++i) same = gs[i].du == gp[i].du && gs[i].dv == gp[i].dv;
  row("leaf grid 600x600", s_grid, p_grid, same);
  return 0;
}
