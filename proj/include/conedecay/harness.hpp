#pragma once

#include "conedecay/fourier.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

namespace conedecay::harness {

// Scenario ids: C1, C2, D1 and d3_saddle (upper bound), lower_cone and
// lower_cyl (lower bound), identity, morse, statphase, all.
struct ScenarioConfig {
  std::string scenario = "C1";
  std::string surface = "parabola";
  std::string family = "cone_parabola";
  double k_min = 16.0;
  double k_max = 4096.0;
  int points_per_octave = 8;
  // Node counts; 0 picks a count that resolves the phase up to k_max.
  int nodes_x = 16;
  int nodes_h = 8;
  int nodes_t = 0;
  int directions = 32;
  std::string out_dir = "conedecay_out";
  std::uint64_t seed = 1;

  // lower: half-width of the parameter box of mu^(S)
  double radius = 0.25;
  // upper: floor min_k k^{(d-1)/2} |nu^(k e_d)| must reach this (0 = report only)
  double floor_min = 0.0;
  double exponent_tol = 0.05;
  double s_margin = 0.1;
  // lower: required blockmax exponent window for conormal directions and
  // minimum for near-axis directions
  double generic_min = 0.45;
  double generic_max = 0.60;
  double axis_min = 3.0;
  double t_cycles_per_panel = 2.0;
  double pullback_k_max = 1024.0;
  int threads = 0;
  bool d3 = false;

  static ScenarioConfig preset(const std::string& scenario);
  // Preset for j["scenario"] (or `fallback_scenario`), overlaid with j.
  static ScenarioConfig from_json(const nlohmann::json& j, const std::string& fallback_scenario = "C1");
  static ScenarioConfig load(const std::string& path, const std::string& scenario_override = "");
  nlohmann::json to_json() const;
  void validate() const;
};

const std::vector<std::string>& scenario_ids();

enum class Status { Pass, Fail, Warn };
std::string to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::Pass;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double lo = -std::numeric_limits<double>::infinity();  // accepted range
  double hi = std::numeric_limits<double>::infinity();
  double runtime_s = 0.0;
  std::string detail;
};

struct FitRow {
  std::string scenario;
  std::string profile;
  Envelope mode = Envelope::Raw;
  FitResult fit;
};

class VerificationReport {
 public:
  // Each name may be added once.
  Check& add(Check c);
  Check& check_le(const std::string& name, double measured, double tol, double runtime_s = 0.0,
                  const std::string& detail = "");
  Check& check_ge(const std::string& name, double measured, double tol, double runtime_s = 0.0,
                  const std::string& detail = "");
  Check& check_within(const std::string& name, double measured, double lo, double hi, double runtime_s = 0.0,
                      const std::string& detail = "");
  Check& warn(const std::string& name, const std::string& detail, double measured = std::numeric_limits<double>::quiet_NaN());
  Check& fail(const std::string& name, const std::string& detail, double runtime_s = 0.0);

  void add_fit(FitRow row) { fits_.push_back(std::move(row)); }
  void merge(const VerificationReport& other);

  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<FitRow>& fits() const { return fits_; }
  const Check* find(const std::string& name) const;
  std::size_t count(Status s) const;
  // No FAIL entries (warnings do not fail a run).
  bool all_pass() const { return count(Status::Fail) == 0; }

  nlohmann::json to_json() const;
  // report.json and fits.csv
  void write(const std::string& dir) const;
  void print(std::ostream& os) const;

 private:
  std::vector<Check> checks_;
  std::vector<FitRow> fits_;
};

// Writes profiles to <out_dir>/profiles/<name>.csv.
void save_profile(const ScenarioConfig& cfg, const DecayProfile& p, const std::string& name);

VerificationReport run_identity_suite(const ScenarioConfig& cfg);
VerificationReport run_morse_suite(const ScenarioConfig& cfg);
VerificationReport run_lower(const ScenarioConfig& cfg);
VerificationReport run_upper(const ScenarioConfig& cfg);
VerificationReport run_statphase(const ScenarioConfig& cfg);
// Identity and Morse suites, lower and upper scenarios, statphase; d3 only
// with cfg.d3. A suite that throws becomes a FAIL entry and the run goes on.
VerificationReport run_all(const ScenarioConfig& cfg);
// Dispatch on cfg.scenario.
VerificationReport run_scenario(const ScenarioConfig& cfg);

}  // namespace conedecay::harness
