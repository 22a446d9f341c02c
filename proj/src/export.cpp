#include "h3flow/export.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "h3flow/errors.hpp"

namespace h3flow {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

}  // namespace

void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajs) {
  os << "traj,t,x,y,r,segment,word\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const auto& segs = trajs[k].segments;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      for (const Sample& q : segs[s].samples) {
        os << k << ',' << format_double(q.t) << ',' << format_double(q.x[0]) << ','
           << format_double(q.x[1]) << ',' << format_double(q.x[2]) << ',' << s << ','
           << segs[s].word << '\n';
      }
    }
  }
}

void write_pendulum_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x1,x2,x3,x4,segment,event\n";
  for (std::size_t s = 0; s < traj.segments.size(); ++s) {
    bool first = true;
    for (const Sample& q : traj.segments[s].samples) {
      os << format_double(q.t);
      for (double c : q.x) os << ',' << format_double(c);
      os << ',' << s << ',';
      if (first && s > 0 && s - 1 < traj.events.size()) {
        os << traj.events[s - 1].exit_side << "->" << traj.events[s - 1].entry_side;
      }
      os << '\n';
      first = false;
    }
  }
}

void write_event_log(std::ostream& os, const std::vector<Trajectory>& trajs) {
  os << "traj,t,exit,entry,exit_x,exit_y,exit_z,entry_x,entry_y,entry_z\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    for (const CrossingEvent& e : trajs[k].events) {
      os << k << ',' << format_double(e.t) << ',' << e.exit_side << ',' << e.entry_side;
      for (int i = 0; i < 3; ++i) os << ',' << format_double(e.exit_point[i]);
      for (int i = 0; i < 3; ++i) os << ',' << format_double(e.entry_point[i]);
      os << '\n';
    }
  }
}

void write_grid_table(std::ostream& os, const std::vector<GridSample>& grid) {
  os << "u,v,du,dv\n";
  for (const GridSample& g : grid) {
    os << format_double(g.u) << ',' << format_double(g.v) << ',' << format_double(g.du) << ','
       << format_double(g.dv) << '\n';
  }
}

std::string render_portrait(const std::vector<Trajectory>& trajs, Projection proj,
                            const FundamentalDomain& D) {
  std::size_t samples = 0;
  for (const Trajectory& t : trajs) {
    for (const Segment& s : t.segments) samples += s.samples.size();
  }
  if (samples == 0) throw DomainError("no trajectory samples to render");
  if (proj.first < 0 || proj.first > 3 || proj.second < 0 || proj.second > 3 ||
      proj.first == proj.second) {
    throw DomainError("projection needs two distinct coordinates in 0..3");
  }

  const auto a = static_cast<std::size_t>(proj.first);
  const auto b = static_cast<std::size_t>(proj.second);
  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  auto extend = [&](double u, double v) {
    lo[0] = std::min(lo[0], u);
    hi[0] = std::max(hi[0], u);
    lo[1] = std::min(lo[1], v);
    hi[1] = std::max(hi[1], v);
  };
  for (const Trajectory& t : trajs) {
    for (const Segment& s : t.segments) {
      for (const Sample& q : s.samples) extend(q.x[a], q.x[b]);
    }
  }
  const bool outline = !D.outline.empty() && a < 3 && b < 3;
  if (outline) {
    for (const Vec3& p : D.outline) extend(p[a], p[b]);
  }
  const double size = 600.0, margin = 20.0;
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
  const double scale = (size - 2 * margin) / span;
  auto px = [&](double u) { return fixed(margin + (u - lo[0]) * scale); };
  auto py = [&](double v) { return fixed(size - margin - (v - lo[1]) * scale); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size
     << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (outline) {
    os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (const Vec3& p : D.outline) os << px(p[a]) << ',' << py(p[b]) << ' ';
    os << "\"/>\n";
  }
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    const auto& segs = trajs[k].segments;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
      for (const Sample& q : segs[s].samples) os << px(q.x[a]) << ',' << py(q.x[b]) << ' ';
      os << "\"/>\n";
      if (s + 1 < segs.size() && !segs[s].samples.empty()) {
        const Sample& q = segs[s].samples.back();
        os << "<circle class=\"wrap\" cx=\"" << px(q.x[a]) << "\" cy=\"" << py(q.x[b])
           << "\" r=\"3\" fill=\"none\" stroke=\"" << color << "\"/>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace h3flow
