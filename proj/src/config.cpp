#include "h3flow/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "h3flow/errors.hpp"
#include "h3flow/scenarios.hpp"

namespace h3flow {

using nlohmann::json;

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json quaternion_to_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

Quaternion quaternion_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.size() != 4) throw ConfigError("quaternions are 4-arrays [w, x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const Quaternion& c : p.coeffs) out.push_back(quaternion_to_json(c));
  return out;
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("polynomials are non-empty coefficient arrays");
  Polynomial p;
  for (const json& c : j) p.coeffs.push_back(quaternion_from_json(c));
  return p;
}

json rational_to_json(const RationalMap& h) {
  return {{"num", polynomial_to_json(h.num)}, {"den", polynomial_to_json(h.den)}};
}

RationalMap rational_from_json(const json& j) {
  RationalMap h;
  h.num = polynomial_from_json(j.at("num"));
  if (j.contains("den")) h.den = polynomial_from_json(j.at("den"));
  return h;
}

void fill_example3(RunConfig& c) {
  const GroupPresentation G = example3::group();
  c.generators = G.generators;
  c.labels = {"T1", "T2", "T3", "T4", "T5"};
  c.h1 = example3::h1();
  c.h2 = example3::h2();
  c.m = example3::kDefaultWeight;
}

template <class T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

IntegratorOptions RunConfig::integrator() const {
  IntegratorOptions o;
  o.rtol = rtol;
  o.atol = atol;
  o.max_steps = max_steps;
  o.max_crossings = max_crossings;
  return o;
}

GroupPresentation RunConfig::group() const { return GroupPresentation::make(generators, labels); }

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"example3", "pendulum", "figure8", "reeb-genus2",
                                              "heegaard-s3"};
  return names;
}

RunConfig preset(const std::string& scenario) {
  RunConfig c;
  c.scenario = scenario;
  fill_example3(c);
  if (scenario == "example3") {
    c.starts = {{0.3, 0.2, 1.0, 0.0}, {1.0, 0.5, 0.5, 0.0}};
  } else if (scenario == "pendulum") {
    c.domain = "klein-bottle";
    c.t_end = 100.0;
    c.rtol = 1e-9;
    c.atol = 1e-9;
    c.starts = {{1.0, 0.5, 0.0, 0.0}};
  } else if (scenario == "figure8") {
  } else if (scenario == "reeb-genus2") {
    c.genus = 2;
    c.psi = {{{1, 0}, {0, 1}}};
  } else if (scenario == "heegaard-s3") {
    c.genus = 1;
    c.psi = {{{0, 1}, {1, 0}}};
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  return c;
}

json to_json(const RunConfig& c) {
  json gens = json::array();
  for (const MoebiusMap& T : c.generators) {
    gens.push_back({{"a", complex_to_json(T.a)},
                    {"b", complex_to_json(T.b)},
                    {"c", complex_to_json(T.c)},
                    {"d", complex_to_json(T.d)}});
  }
  json starts = json::array();
  for (const State& s : c.starts) starts.push_back(s);
  return {
      {"scenario", c.scenario},
      {"group", {{"generators", gens}, {"labels", c.labels}}},
      {"h1", rational_to_json(c.h1)},
      {"h2", rational_to_json(c.h2)},
      {"m", c.m},
      {"radius", c.radius},
      {"domain", {{"kind", c.domain}, {"x2max", c.x2max}}},
      {"integration",
       {{"t_end", c.t_end},
        {"rtol", c.rtol},
        {"atol", c.atol},
        {"max_steps", c.max_steps},
        {"max_crossings", c.max_crossings},
        {"starts", starts},
        {"random_starts", c.random_starts}}},
      {"seed", c.seed},
      {"pendulum", {{"g_over_l", c.pendulum.g_over_l}, {"k", c.pendulum.k}}},
      {"covariance", {{"radii", c.radii}, {"generator", c.generator}}},
      {"reeb",
       {{"neck_radius", c.neck_radius},
        {"bands", c.bands},
        {"genus", c.genus},
        {"psi", c.psi},
        {"grid", c.grid}}},
      {"outputs", {{"csv", c.csv}, {"svg", c.svg}, {"events", c.events}}},
  };
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    RunConfig c = preset(j.value("scenario", std::string("example3")));
    if (j.contains("group")) {
      const json& g = j.at("group");
      c.generators.clear();
      for (const json& T : g.at("generators")) {
        c.generators.push_back({complex_from_json(T.at("a")), complex_from_json(T.at("b")),
                                complex_from_json(T.at("c")), complex_from_json(T.at("d"))});
      }
      c.labels.clear();
      read(g, "labels", c.labels);
    }
    if (j.contains("h1")) c.h1 = rational_from_json(j.at("h1"));
    if (j.contains("h2")) c.h2 = rational_from_json(j.at("h2"));
    read(j, "m", c.m);
    read(j, "radius", c.radius);
    if (j.contains("domain")) {
      const json& d = j.at("domain");
      if (d.is_string()) {
        c.domain = d.get<std::string>();
      } else {
        read(d, "kind", c.domain);
        read(d, "x2max", c.x2max);
      }
    }
    if (j.contains("integration")) {
      const json& in = j.at("integration");
      read(in, "t_end", c.t_end);
      read(in, "rtol", c.rtol);
      read(in, "atol", c.atol);
      read(in, "max_steps", c.max_steps);
      read(in, "max_crossings", c.max_crossings);
      read(in, "random_starts", c.random_starts);
      if (in.contains("starts")) {
        c.starts.clear();
        for (const json& s : in.at("starts")) {
          if (!s.is_array() || s.size() < 3 || s.size() > 4) {
            throw ConfigError("start points are [x, y, r] or 4-arrays");
          }
          State x{};
          for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i].get<double>();
          c.starts.push_back(x);
        }
      }
    }
    read(j, "seed", c.seed);
    if (j.contains("pendulum")) {
      read(j.at("pendulum"), "g_over_l", c.pendulum.g_over_l);
      read(j.at("pendulum"), "k", c.pendulum.k);
    }
    if (j.contains("covariance")) {
      read(j.at("covariance"), "radii", c.radii);
      read(j.at("covariance"), "generator", c.generator);
    }
    if (j.contains("reeb")) {
      const json& r = j.at("reeb");
      read(r, "neck_radius", c.neck_radius);
      read(r, "bands", c.bands);
      read(r, "genus", c.genus);
      read(r, "psi", c.psi);
      read(r, "grid", c.grid);
    }
    if (j.contains("outputs")) {
      read(j.at("outputs"), "csv", c.csv);
      read(j.at("outputs"), "svg", c.svg);
      read(j.at("outputs"), "events", c.events);
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << to_json(cfg).dump(2) << '\n';
}

void validate(const RunConfig& c) {
  preset(c.scenario);
  if (c.m < 2) {
    throw ConfigError("m = " + std::to_string(c.m) +
                      ": the automorphic weight requires m >= 2");
  }
  if (c.radius < 0) throw ConfigError("ball radius N must be >= 0");
  for (int r : c.radii) {
    if (r < 0) throw ConfigError("covariance radii must be >= 0");
  }
  if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw ConfigError("tolerances must be > 0");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw ConfigError("t_end must be finite and >= 0");
  if (c.max_steps == 0 || c.max_crossings == 0) throw ConfigError("budgets must be positive");
  if (c.random_starts < 0) throw ConfigError("random_starts must be >= 0");
  if (c.generators.empty()) throw ConfigError("group needs at least one generator");
  if (!c.labels.empty() && c.labels.size() != c.generators.size()) {
    throw ConfigError("group labels must match the generator count");
  }
  for (const MoebiusMap& T : c.generators) {
    if (std::abs(T.det()) == 0.0) throw ConfigError("generator with zero determinant");
  }
  c.group().letter(c.generator);
  if (c.h1.den.is_zero() || c.h2.den.is_zero()) throw ConfigError("H-function with zero denominator");
  if (c.domain != "example3-prism" && c.domain != "klein-bottle") {
    throw ConfigError("unknown domain kind '" + c.domain + "'");
  }
  if (!(c.x2max > 0.0)) throw ConfigError("x2max must be > 0");
  if (!(c.neck_radius > 0.0)) throw ConfigError("neck_radius must be > 0");
  if (c.bands < 1) throw ConfigError("bands must be >= 1");
  if (c.grid < 2) throw ConfigError("grid must be >= 2");
  if (c.genus < 1 || c.genus > 2) throw ConfigError("genus must be 1 or 2");
  const int det = c.psi[0][0] * c.psi[1][1] - c.psi[0][1] * c.psi[1][0];
  if (det != 1 && det != -1) throw ConfigError("psi must be unimodular");
  for (const std::string* p : {&c.csv, &c.svg, &c.events}) {
    if (p->empty()) continue;
    const std::filesystem::path parent = std::filesystem::path(*p).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw ConfigError("output directory '" + parent.string() + "' does not exist");
    }
  }
}

}  // namespace h3flow
