#include "conedecay/harness.hpp"

#include "conedecay/types.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace conedecay::harness {

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {"C1",        "C2",        "D1",       "d3_saddle", "lower_cone",
                                               "lower_cyl", "identity", "morse",    "statphase", "all"};
  return ids;
}

ScenarioConfig ScenarioConfig::preset(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  if (scenario == "C1" || scenario == "C2" || scenario == "D1") {
    c.family = scenario == "C1" ? "cone_parabola" : scenario == "C2" ? "cone_perturbed" : "cyl_parabola";
    c.surface = scenario == "C2" ? "perturbed_parabola" : "parabola";
    // C1/C2: 0.9 * (1/2) b^{-1/2} with b = 2; D1: 0.9 * (1/2)
    c.floor_min = scenario == "D1" ? 0.45 : 0.9 * 0.5 / std::sqrt(2.0);
  } else if (scenario == "d3_saddle") {
    c.family = "cone_general:saddle";
    c.surface = "saddle";
    c.k_max = 256.0;
    c.nodes_x = 6;
    c.nodes_h = 6;
    c.exponent_tol = 0.1;
    c.directions = 128;
    c.d3 = true;
  } else if (scenario == "lower_cone" || scenario == "lower_cyl") {
    c.family = scenario == "lower_cone" ? "cone" : "cylinder";
    c.k_max = 512.0;
    c.nodes_x = 0;
    c.nodes_h = 0;
  } else if (scenario != "identity" && scenario != "morse" && scenario != "statphase" && scenario != "all") {
    throw ConfigError("unknown scenario id '" + scenario + "'");
  }
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"scenario", scenario},
          {"surface", surface},
          {"family", family},
          {"k_min", k_min},
          {"k_max", k_max},
          {"points_per_octave", points_per_octave},
          {"nodes_x", nodes_x},
          {"nodes_h", nodes_h},
          {"nodes_t", nodes_t},
          {"directions", directions},
          {"out_dir", out_dir},
          {"seed", seed},
          {"radius", radius},
          {"floor_min", floor_min},
          {"exponent_tol", exponent_tol},
          {"s_margin", s_margin},
          {"generic_min", generic_min},
          {"generic_max", generic_max},
          {"axis_min", axis_min},
          {"t_cycles_per_panel", t_cycles_per_panel},
          {"pullback_k_max", pullback_k_max},
          {"threads", threads},
          {"d3", d3}};
}

namespace {

template <class T>
void take(const nlohmann::json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j, const std::string& fallback_scenario) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::string id = fallback_scenario;
  take(j, "scenario", id);
  ScenarioConfig c = preset(id);
  const nlohmann::json known = c.to_json();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) throw ConfigError("unknown config field '" + it.key() + "'");
  }
  take(j, "surface", c.surface);
  take(j, "family", c.family);
  take(j, "k_min", c.k_min);
  take(j, "k_max", c.k_max);
  take(j, "points_per_octave", c.points_per_octave);
  take(j, "nodes_x", c.nodes_x);
  take(j, "nodes_h", c.nodes_h);
  take(j, "nodes_t", c.nodes_t);
  take(j, "directions", c.directions);
  take(j, "out_dir", c.out_dir);
  take(j, "seed", c.seed);
  take(j, "radius", c.radius);
  take(j, "floor_min", c.floor_min);
  take(j, "exponent_tol", c.exponent_tol);
  take(j, "s_margin", c.s_margin);
  take(j, "generic_min", c.generic_min);
  take(j, "generic_max", c.generic_max);
  take(j, "axis_min", c.axis_min);
  take(j, "t_cycles_per_panel", c.t_cycles_per_panel);
  take(j, "pullback_k_max", c.pullback_k_max);
  take(j, "threads", c.threads);
  take(j, "d3", c.d3);
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path, const std::string& scenario_override) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config " + path + ": " + e.what());
    }
  }
  if (!scenario_override.empty()) j["scenario"] = scenario_override;
  return from_json(j);
}

void ScenarioConfig::validate() const {
  preset(scenario);
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  };
  auto non_negative = [](int v, const char* what) {
    if (v < 0) throw ConfigError(std::string(what) + " must be positive (0 selects automatically)");
  };
  positive(k_min, "k_min");
  positive(k_max, "k_max");
  if (k_max < 8.0 * k_min) throw ConfigError("k grid must span at least 3 octaves");
  positive(points_per_octave, "points_per_octave");
  positive(directions, "directions");
  positive(radius, "radius");
  positive(exponent_tol, "exponent_tol");
  positive(t_cycles_per_panel, "t_cycles_per_panel");
  positive(pullback_k_max, "pullback_k_max");
  non_negative(nodes_x, "nodes_x");
  non_negative(nodes_h, "nodes_h");
  non_negative(nodes_t, "nodes_t");
  non_negative(threads, "threads");
  if ((nodes_x > 0 && nodes_x < 4) || (nodes_h > 0 && nodes_h < 4)) throw ConfigError("node counts must be >= 4");
  if (generic_min > generic_max) throw ConfigError("generic_min exceeds generic_max");
  if (scenario == "lower_cone" || scenario == "lower_cyl") {
    if (family != "cone" && family != "cylinder") throw ConfigError("lower scenarios take family 'cone' or 'cylinder'");
  }
}

}  // namespace conedecay::harness
