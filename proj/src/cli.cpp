#include "h3flow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <omp.h>
#include <random>
#include <sstream>

#include "h3flow/ballmodel.hpp"
#include "h3flow/config.hpp"
#include "h3flow/errors.hpp"
#include "h3flow/export.hpp"
#include "h3flow/reeb.hpp"
#include "h3flow/scenarios.hpp"

namespace h3flow {

namespace {

using std::numbers::pi;

struct Overrides {
  std::string config_path;
  std::string scenario;
  std::string dump_path;
  std::uint64_t seed = 0;
  int threads = 0;
  int radius = -1;
  int m = 0;
  double t_end = -1.0;
  double k = 0.0;
  int count = -1;
  std::string csv, svg, events;
  std::vector<int> radii;
  std::string generator;
  std::vector<std::string> points;
  int random_points = 0;
  std::vector<int> projection{0, 1};
  double neck_radius = 0.0;
  int bands = 0;
  int genus = 0;
  std::vector<int> psi;
  std::string grid_out;
};

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

std::shared_ptr<const AutomorphicField> build_field(const RunConfig& cfg, int radius) {
  auto ball = std::make_shared<const WordBall>(enumerate_ball(cfg.group(), radius));
  return std::make_shared<const AutomorphicField>(AutomorphicField::make(ball, cfg.m, cfg.h1, cfg.h2));
}

FundamentalDomain build_domain(const RunConfig& cfg) {
  if (cfg.domain == "klein-bottle") return klein_bottle_domain(cfg.x2max);
  return example3::domain();
}

std::vector<State> random_points(const FundamentalDomain& D, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<State> out;
  std::size_t attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1'000'000) throw DomainError("could not sample interior start points");
    State s{};
    for (std::size_t i = 0; i < 3; ++i) {
      const double u = std::generate_canonical<double, 53>(rng);
      s[i] = D.box_lo[i] + (D.box_hi[i] - D.box_lo[i]) * u;
    }
    if (D.geometry == Geometry::upper_half_space) s[2] = std::max(s[2], 0.3);
    if (D.contains(spatial(s), -1e-6)) out.push_back(s);
  }
  return out;
}

std::string point_text(const State& x, int n) {
  std::string s = "(";
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + format_double(x[static_cast<std::size_t>(i)]);
  return s + ")";
}

bool report_trajectories(Context& ctx, const std::vector<Trajectory>& trajs, int dims) {
  bool failed = false;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const Trajectory& T = trajs[k];
    ctx.out << "traj " << k << ": stop=" << to_string(T.stop) << " t=" << format_double(T.back().t)
            << " segments=" << T.segments.size() << " events=" << T.events.size()
            << " steps=" << T.steps << " final=" << point_text(T.back().x, dims) << '\n';
    if (T.stop == StopReason::pole || T.stop == StopReason::budget) {
      failed = true;
      ctx.err << "traj " << k << ": " << to_string(T.stop) << ": " << T.message << '\n';
    } else if (T.stop != StopReason::reached_end) {
      ctx.err << "note: traj " << k << " stopped early (" << to_string(T.stop) << ")"
              << (T.message.empty() ? "" : ": " + T.message) << '\n';
    }
  }
  return failed;
}

void write_outputs(const RunConfig& cfg, const std::vector<Trajectory>& trajs,
                   const FundamentalDomain& D, Projection proj) {
  if (!cfg.csv.empty()) {
    std::ostringstream os;
    write_trajectory_csv(os, trajs);
    write_file(cfg.csv, os.str());
  }
  if (!cfg.events.empty()) {
    std::ostringstream os;
    write_event_log(os, trajs);
    write_file(cfg.events, os.str());
  }
  if (!cfg.svg.empty()) write_file(cfg.svg, render_portrait(trajs, proj, D));
}

int cmd_validate(Context& ctx) {
  const FundamentalDomain D = build_domain(ctx.cfg);
  const ValidationReport rep = validate_side_pairing(D, 100, ctx.cfg.seed);
  ctx.out << rep.to_text();
  return rep.ok() ? 0 : 1;
}

int cmd_field_eval(Context& ctx, const Overrides& o) {
  std::vector<HPoint> pts;
  for (const std::string& s : o.points) {
    HPoint p;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> p.x >> c1 >> p.y >> c2 >> p.r) || c1 != ',' || c2 != ',') {
      throw ConfigError("points are given as x,y,r: '" + s + "'");
    }
    pts.push_back(p);
  }
  if (pts.empty()) pts = example3::probe_points();
  const auto F = build_field(ctx.cfg, ctx.cfg.radius);
  ctx.out << "x,y,r,f0,f1,f2,f3\n";
  for (const HPoint& p : pts) {
    const Quaternion q = eval_field(*F, p);
    ctx.out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.r) << ','
            << format_double(q.w) << ',' << format_double(q.x) << ',' << format_double(q.y) << ','
            << format_double(q.z) << '\n';
  }
  return 0;
}

int cmd_covariance(Context& ctx, const Overrides& o) {
  const RunConfig& cfg = ctx.cfg;
  const GroupPresentation G = cfg.group();
  const MoebiusMap T = G.letter_matrix(G.letter(cfg.generator));
  std::vector<HPoint> pts = example3::probe_points();
  if (o.random_points > 0) {
    for (const State& s : random_points(example3::domain(), o.random_points, cfg.seed)) {
      pts.push_back({s[0], s[1], s[2]});
    }
  }
  ctx.out << "radius,ball_size,max_residual,mean_residual\n";
  for (int r : cfg.radii) {
    const auto F = build_field(cfg, r);
    double worst = 0.0, sum = 0.0;
    for (const HPoint& p : pts) {
      const double e = covariance_residual(*F, T, p);
      worst = std::max(worst, e);
      sum += e;
    }
    ctx.out << r << ',' << F->ball().size() << ',' << format_double(worst) << ','
            << format_double(sum / static_cast<double>(pts.size())) << '\n';
  }
  return 0;
}

std::vector<State> start_points(const RunConfig& cfg, const FundamentalDomain& D) {
  std::vector<State> starts = cfg.starts;
  const auto extra = random_points(D, cfg.random_starts, cfg.seed);
  starts.insert(starts.end(), extra.begin(), extra.end());
  if (starts.empty()) throw ConfigError("no start points: set integration.starts or random_starts");
  return starts;
}

int cmd_integrate(Context& ctx, const Overrides& o) {
  const RunConfig& cfg = ctx.cfg;
  const FundamentalDomain D = build_domain(cfg);
  const bool pendulum = cfg.domain == "klein-bottle";
  const VectorField f = pendulum ? pendulum_vector_field(cfg.pendulum)
                                 : automorphic_vector_field(build_field(cfg, cfg.radius));
  const auto trajs = integrate_batch(f, start_points(cfg, D), cfg.t_end, D, cfg.integrator());
  const bool failed = report_trajectories(ctx, trajs, pendulum ? 4 : 3);
  if (o.projection.size() != 2) throw ConfigError("projection takes two coordinate indices");
  write_outputs(cfg, trajs, D, {o.projection[0], o.projection[1]});
  return failed ? 1 : 0;
}

int cmd_demo_pendulum(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const FundamentalDomain D = klein_bottle_domain(cfg.x2max);
  const State x0 = cfg.starts.empty() ? State{1.0, 0.5, 0.0, 0.0} : cfg.starts.front();
  IntegratorOptions opts = cfg.integrator();
  const Trajectory T = integrate_wrapped(pendulum_vector_field(cfg.pendulum), x0, cfg.t_end, D, opts);
  const double e0 = planar_energy(x0, cfg.pendulum);
  double drift = 0.0;
  for (const Segment& s : T.segments) {
    for (const Sample& q : s.samples) drift = std::max(drift, std::abs(planar_energy(q.x, cfg.pendulum) - e0));
  }
  const bool failed = report_trajectories(ctx, {T}, 4);
  ctx.out << "k=" << format_double(cfg.pendulum.k) << " energy_drift=" << format_double(drift)
          << " continuity=" << format_double(continuity_residual(T, pendulum_vector_field(cfg.pendulum), D))
          << '\n';
  if (!cfg.csv.empty()) {
    std::ostringstream os;
    write_pendulum_csv(os, T);
    write_file(cfg.csv, os.str());
  }
  if (!cfg.events.empty()) {
    std::ostringstream os;
    write_event_log(os, {T});
    write_file(cfg.events, os.str());
  }
  if (!cfg.svg.empty()) write_file(cfg.svg, render_portrait({T}, {0, 1}, D));
  return failed ? 1 : 0;
}

int cmd_demo_example3(Context& ctx, const Overrides& o) {
  RunConfig& cfg = ctx.cfg;
  const FundamentalDomain D = example3::domain();
  if (cfg.random_starts == 0 && o.count < 0) cfg.random_starts = 20;
  if (o.count >= 0) cfg.random_starts = o.count;
  if (o.count >= 0 || cfg.random_starts > 0) cfg.starts.clear();
  const auto F = build_field(cfg, cfg.radius);
  const auto trajs = integrate_batch(automorphic_vector_field(F), start_points(cfg, D), cfg.t_end, D,
                                     cfg.integrator());
  ctx.out << "ball radius " << cfg.radius << " (" << F->ball().size() << " words), m=" << cfg.m << '\n';
  const bool failed = report_trajectories(ctx, trajs, 3);
  write_outputs(cfg, trajs, D, {0, 1});
  return failed ? 1 : 0;
}

int cmd_ball_check(Context& ctx) {
  const TetrahedralComplex K = build_complex();
  const auto cycles = edge_cycles(K);
  ctx.out << "edge classes: " << cycles.size() << '\n';
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    ctx.out << "  class " << i << ':';
    for (const EdgeRef& e : cycles[i].members) ctx.out << ' ' << to_string(K, e);
    ctx.out << '\n';
  }
  const DihedralReport rep = dihedral_check(K, cycles);
  ctx.out << rep.to_text();
  double worst = 0.0;
  for (const FaceGluing& g : K.pairing.gluings) {
    const BallIsometry phi = face_isometry(K, g);
    for (int v = 0; v < 4; ++v) {
      if (v == g.source) continue;
      const auto sv = static_cast<std::size_t>(v);
      const auto tv = static_cast<std::size_t>(g.vertex_map[sv]);
      worst = std::max(worst, norm(phi.apply_boundary(K.second.vertices[sv]) - K.first.vertices[tv]));
    }
  }
  ctx.out << "pairing vertex error: " << format_double(worst) << '\n';
  return rep.proper() && worst < 1e-9 ? 0 : 1;
}

int cmd_reeb_indices(Context& ctx, const Overrides& o) {
  const RunConfig& cfg = ctx.cfg;
  const PlanarField torus = torus_field();
  const auto eq = find_equilibria(torus, {0, 0}, {2 * pi, 2 * pi});
  ctx.out << "torus field equilibria:\n";
  int sum = 0;
  for (const Equilibrium& e : eq) {
    ctx.out << "  " << point_text({e.point[0], e.point[1], 0, 0}, 2) << ' ' << to_string(e.kind)
            << " index";
    for (double r : {0.05, 0.1, 0.2}) ctx.out << ' ' << equilibrium_index(torus, e.point, r);
    sum += equilibrium_index(torus, e.point, 0.1);
    ctx.out << '\n';
  }
  ctx.out << "  index sum " << sum << '\n';

  const PlanarField leaf = leaf_system(torus);
  int leaf_sum = 0;
  for (const Equilibrium& e : leaf_equilibria(cfg.bands)) leaf_sum += equilibrium_index(leaf, e.point, 0.1);
  ctx.out << "leaf system (" << cfg.bands << " bands): " << 1 + 4 * cfg.bands
          << " equilibria, index sum " << leaf_sum << '\n';

  const Genus2System G = connected_sum_field(torus, cfg.neck_radius);
  ctx.out << "genus-2 connected sum (rho " << format_double(cfg.neck_radius) << "):\n";
  for (const auto& [chart, e] : G.equilibria()) {
    const PlanarField& f = chart == 1 ? G.torus1 : G.torus2;
    ctx.out << "  chart " << chart << ' ' << point_text({e.point[0], e.point[1], 0, 0}, 2) << ' '
            << to_string(e.kind) << " index " << equilibrium_index(f, e.point, 0.1) << '\n';
  }
  ctx.out << "  index sum " << G.index_sum() << '\n';
  ctx.out << "singular line:";
  for (const auto& [label, p] : G.singular_line) ctx.out << " [" << label << ']';
  ctx.out << '\n';
  if (!o.grid_out.empty()) {
    std::ostringstream os;
    write_grid_table(os, sample_grid(cfg.genus == 2 ? G.torus1 : torus, cfg.grid, {0, 0}, {2 * pi, 2 * pi}));
    write_file(o.grid_out, os.str());
  }
  return G.index_sum() == -2 && sum == 0 ? 0 : 1;
}

int cmd_reeb_glue(Context& ctx, const Overrides& o) {
  const RunConfig& cfg = ctx.cfg;
  const HeegaardGluing g{cfg.genus, cfg.psi};
  g.validate();
  ctx.out << "genus " << g.genus << " psi ((" << g.psi[0][0] << ',' << g.psi[0][1] << "),("
          << g.psi[1][0] << ',' << g.psi[1][1] << ")) det " << g.det() << '\n';
  std::vector<CollarField> charts;
  if (g.genus == 1) {
    const PlanarField X2 = torus_field();
    charts.push_back(heegaard_glue(pullback(X2, g), X2, g));
  } else {
    const Genus2System X2 = connected_sum_field(torus_field(), cfg.neck_radius);
    Genus2System X1 = X2;
    X1.torus1 = pullback(X2.torus1, g);
    X1.torus2 = pullback(X2.torus2, g);
    const auto both = heegaard_glue(X1, X2, g);
    charts.assign(both.begin(), both.end());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < charts.size(); ++i) {
    const CollarField& c = charts[i];
    double t0 = 0.0;
    for (const GridSample& s : sample_grid(c.at(0.0), cfg.grid, {0, 0}, {2 * pi, 2 * pi})) {
      t0 = std::max(t0, norm(Vec2{s.du, s.dv} - c.x2({s.u, s.v})));
    }
    const double match = boundary_matching_residual(c, cfg.grid);
    worst = std::max(worst, match);
    ctx.out << "chart " << i + 1 << ": boundary matching residual " << format_double(match)
            << ", t=0 deviation " << format_double(t0) << '\n';
  }
  const PlanarField unit{[](const Vec2&) { return Vec2{1.0, 0.0}; }, true};
  const Vec2 img = heegaard_glue(unit, unit, HeegaardGluing{1, g.psi})(1.0, {0.0, 0.0});
  ctx.out << "constant (1,0) at t=1 -> " << point_text({img[0], img[1], 0, 0}, 2) << '\n';
  if (!o.grid_out.empty()) {
    std::ostringstream os;
    write_grid_table(os, sample_grid(charts.front().at(1.0), cfg.grid, {0, 0}, {2 * pi, 2 * pi}));
    write_file(o.grid_out, os.str());
  }
  return worst < 1e-9 ? 0 : 1;
}

void apply_overrides(RunConfig& cfg, const CLI::App& app, const Overrides& o) {
  if (app.count("--seed")) cfg.seed = o.seed;
  if (app.count("--radius")) cfg.radius = o.radius;
  if (app.count("--m")) cfg.m = o.m;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamical systems on hyperbolic and Heegaard-split 3-manifolds"};
  app.fallthrough();
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "JSON run config");
  app.add_option("--scenario", o.scenario, "Built-in preset")
      ->check(CLI::IsMember(scenario_names()));
  app.add_option("--dump-config", o.dump_path, "Write the effective config here");
  app.add_option("--seed", o.seed, "Seed for all random sampling");
  app.add_option("--threads", o.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  app.add_option("--radius", o.radius, "Word-ball radius N");
  app.add_option("--m", o.m, "Automorphic weight m");

  auto outputs = [&](CLI::App* sub, bool events) {
    sub->add_option("--out", o.csv, "CSV output");
    sub->add_option("--svg", o.svg, "SVG portrait output");
    if (events) sub->add_option("--events", o.events, "Crossing event log");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Side-pairing report");
  CLI::App* field_cmd = app.add_subcommand("field-eval", "Field values at points");
  field_cmd->add_option("--point", o.points, "x,y,r (repeatable)");
  CLI::App* cov_cmd = app.add_subcommand("covariance", "Covariance residual per ball radius");
  cov_cmd->add_option("--radii", o.radii, "Ball radii")->delimiter(',');
  cov_cmd->add_option("--generator", o.generator, "Generator label");
  cov_cmd->add_option("--random-points", o.random_points, "Extra seeded probe points");
  CLI::App* int_cmd = app.add_subcommand("integrate", "Wrapped trajectories");
  int_cmd->add_option("--t", o.t_end, "End time");
  int_cmd->add_option("--count", o.count, "Seeded random start points");
  int_cmd->add_option("--projection", o.projection, "Coordinate pair for the SVG")->delimiter(',');
  outputs(int_cmd, true);

  CLI::App* demo = app.add_subcommand("demo", "Worked scenarios");
  demo->require_subcommand(1);
  CLI::App* pend_cmd = demo->add_subcommand("pendulum", "Pendulum on the Klein bottle times a circle");
  pend_cmd->add_option("--k", o.k, "Damping");
  pend_cmd->add_option("--t", o.t_end, "End time");
  outputs(pend_cmd, true);
  CLI::App* ex3_cmd = demo->add_subcommand("example3", "Automorphic flow batch");
  ex3_cmd->add_option("--count", o.count, "Number of seeded start points");
  ex3_cmd->add_option("--t", o.t_end, "End time");
  outputs(ex3_cmd, true);

  CLI::App* ball = app.add_subcommand("ball", "Conformal ball model");
  ball->require_subcommand(1);
  CLI::App* ball_cmd = ball->add_subcommand("check", "Edge cycles and dihedral sums");

  CLI::App* reeb = app.add_subcommand("reeb", "Reeb and Heegaard constructions");
  reeb->require_subcommand(1);
  CLI::App* idx_cmd = reeb->add_subcommand("indices", "Equilibria and index sums");
  idx_cmd->add_option("--rho", o.neck_radius, "Connected-sum disk radius");
  idx_cmd->add_option("--bands", o.bands, "Leaf bands");
  idx_cmd->add_option("--grid-out", o.grid_out, "Grid table output");
  CLI::App* glue_cmd = reeb->add_subcommand("glue", "Heegaard gluing");
  glue_cmd->add_option("--psi", o.psi, "a,b,c,d")->delimiter(',');
  glue_cmd->add_option("--genus", o.genus, "1 or 2");
  glue_cmd->add_option("--grid-out", o.grid_out, "Grid table at t=1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::string scenario = o.scenario;
    if (scenario.empty()) {
      if (pend_cmd->parsed()) scenario = "pendulum";
      else if (ball_cmd->parsed()) scenario = "figure8";
      else if (idx_cmd->parsed()) scenario = "reeb-genus2";
      else if (glue_cmd->parsed()) scenario = "heegaard-s3";
      else scenario = "example3";
    }
    Context ctx{o.config_path.empty() ? preset(scenario) : load_config(o.config_path), out, err};
    RunConfig& cfg = ctx.cfg;
    apply_overrides(cfg, app, o);
    if (!o.radii.empty()) cfg.radii = o.radii;
    if (!o.generator.empty()) cfg.generator = o.generator;
    if (o.t_end >= 0.0) cfg.t_end = o.t_end;
    if (pend_cmd->count("--k")) cfg.pendulum.k = o.k;
    if (!o.csv.empty()) cfg.csv = o.csv;
    if (!o.svg.empty()) cfg.svg = o.svg;
    if (!o.events.empty()) cfg.events = o.events;
    if (int_cmd->count("--count")) cfg.random_starts = o.count;
    if (o.neck_radius > 0.0) cfg.neck_radius = o.neck_radius;
    if (o.bands > 0) cfg.bands = o.bands;
    if (o.genus != 0) cfg.genus = o.genus;
    if (!o.psi.empty()) {
      if (o.psi.size() != 4) throw ConfigError("--psi takes four integers a,b,c,d");
      cfg.psi = {{{o.psi[0], o.psi[1]}, {o.psi[2], o.psi[3]}}};
    }
    if (pend_cmd->parsed() && cfg.domain != "klein-bottle") {
      throw ConfigError("demo pendulum needs the klein-bottle domain");
    }
    validate(cfg);
    if (!o.dump_path.empty()) save_config(cfg, o.dump_path);
    if (o.threads > 0) omp_set_num_threads(o.threads);

    if (validate_cmd->parsed()) return cmd_validate(ctx);
    if (field_cmd->parsed()) return cmd_field_eval(ctx, o);
    if (cov_cmd->parsed()) return cmd_covariance(ctx, o);
    if (int_cmd->parsed()) return cmd_integrate(ctx, o);
    if (pend_cmd->parsed()) return cmd_demo_pendulum(ctx);
    if (ex3_cmd->parsed()) return cmd_demo_example3(ctx, o);
    if (ball_cmd->parsed()) return cmd_ball_check(ctx);
    if (idx_cmd->parsed()) return cmd_reeb_indices(ctx, o);
    if (glue_cmd->parsed()) return cmd_reeb_glue(ctx, o);
    err << "error: no command\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PoleError& e) {
    err << "pole: " << e.what() << (e.word().empty() ? "" : " (word " + e.word() + ")") << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace h3flow
