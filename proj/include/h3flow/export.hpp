#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "h3flow/domain.hpp"
#include "h3flow/flow.hpp"
#include "h3flow/reeb.hpp"

namespace h3flow {

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

/// Header traj,t,x,y,r,segment,word. One row per sample.
void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajs);

/// Header t,x1,x2,x3,x4,segment,event. `event` is "exit->entry" on the first
/// sample of a segment entered through a face, empty otherwise.
void write_pendulum_csv(std::ostream& os, const Trajectory& traj);

/// Header traj,t,exit,entry,exit_x,exit_y,exit_z,entry_x,entry_y,entry_z.
void write_event_log(std::ostream& os, const std::vector<Trajectory>& trajs);

/// Header u,v,du,dv.
void write_grid_table(std::ostream& os, const std::vector<GridSample>& grid);

struct Projection {
  int first = 0;
  int second = 1;
};

/// SVG 1.1 portrait of the trajectories projected on the coordinate pair
/// `proj`: one polyline per segment, a marker at each wrap, and the domain
/// outline when it has one. Throws DomainError for empty input.
std::string render_portrait(const std::vector<Trajectory>& trajs, Projection proj,
                            const FundamentalDomain& D);

}  // namespace h3flow
