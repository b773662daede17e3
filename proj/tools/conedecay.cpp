#include "conedecay/harness.hpp"
#include "conedecay/types.hpp"

#include <omp.h>

#include <iostream>

#include "CLI11.hpp"

using namespace conedecay;

namespace {

int finish(const harness::VerificationReport& rep, const std::string& dir) {
  rep.write(dir);
  rep.print(std::cout);
  std::cout << "report: " << dir << "/report.json\n";
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier decay experiments for cones and cylinders over curved surfaces"};
  app.require_subcommand(1);

  std::string scenario, config, out;
  double k_max = 0.0;
  int threads = 0;
  bool d3 = false;
  auto* run = app.add_subcommand("run", "run a scenario (C1, C2, D1, d3_saddle, lower_cone, lower_cyl, identity, "
                                        "morse, statphase, all)");
  run->add_option("--scenario", scenario, "scenario id")->required();
  run->add_option("--config", config, "JSON config overriding the scenario preset");
  run->add_option("--out", out, "output directory");
  run->add_option("--k-max", k_max, "largest frequency")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
  run->add_flag("--d3", d3, "enable the d = 3 run");

  std::string vconfig;
  auto* verify = app.add_subcommand("verify", "identity and Morse suites");
  verify->add_option("--config", vconfig, "JSON config");
  std::string sconfig;
  auto* stat = app.add_subcommand("statphase", "Gaussian identities and stationary-phase error scans");
  stat->add_option("--config", sconfig, "JSON config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      harness::ScenarioConfig cfg = harness::ScenarioConfig::load(config, scenario);
      if (!out.empty()) cfg.out_dir = out;
      if (k_max > 0.0) cfg.k_max = k_max;
      if (threads > 0) cfg.threads = threads;
      if (d3) cfg.d3 = true;
      cfg.validate();
      if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
      return finish(harness::run_scenario(cfg), cfg.out_dir);
    }
    if (*verify) {
      harness::ScenarioConfig cfg = harness::ScenarioConfig::load(vconfig, "identity");
      harness::VerificationReport rep = harness::run_identity_suite(cfg);
      rep.merge(harness::run_morse_suite(cfg));
      return finish(rep, cfg.out_dir);
    }
    if (*stat) {
      harness::ScenarioConfig cfg = harness::ScenarioConfig::load(sconfig, "statphase");
      return finish(harness::run_statphase(cfg), cfg.out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
