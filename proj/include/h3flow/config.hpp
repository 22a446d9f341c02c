#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "h3flow/autoform.hpp"
#include "h3flow/flow.hpp"
#include "h3flow/group.hpp"

namespace h3flow {

/// Everything a CLI run needs. Built from a named preset and optionally
/// overridden by a JSON file; see docs/config.md for the schema.
struct RunConfig {
  std::string scenario = "example3";

  // Group and field.
  std::vector<MoebiusMap> generators;
  std::vector<std::string> labels;
  RationalMap h1;
  RationalMap h2;
  int m = 2;
  int radius = 4;

  // "example3-prism" or "klein-bottle".
  std::string domain = "example3-prism";
  double x2max = 10.0;

  // Integration.
  double t_end = 4.0;
  double rtol = 1e-8;
  double atol = 1e-8;
  std::size_t max_steps = 2'000'000;
  std::size_t max_crossings = 100'000;
  std::vector<State> starts;
  int random_starts = 0;
  std::uint64_t seed = 1;
  PendulumParams pendulum;

  // Covariance table.
  std::vector<int> radii{2, 4, 6};
  std::string generator = "T2";

  // Reeb and Heegaard scenarios.
  double neck_radius = 0.5;
  int bands = 5;
  int genus = 1;
  std::array<std::array<int, 2>, 2> psi{{{0, 1}, {1, 0}}};
  int grid = 32;

  // Outputs; empty means not written.
  std::string csv;
  std::string svg;
  std::string events;

  IntegratorOptions integrator() const;
  GroupPresentation group() const;
};

const std::vector<std::string>& scenario_names();
/// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& scenario);

nlohmann::json to_json(const RunConfig& cfg);
/// Keys absent from `j` keep the value of the preset named by j["scenario"]
/// (default example3). Throws ConfigError on malformed input.
RunConfig from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

/// Throws ConfigError naming the first broken requirement.
void validate(const RunConfig& cfg);

}  // namespace h3flow
