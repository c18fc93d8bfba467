#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hermes/sim/sim.hpp"

using namespace hermes;

int main(int argc, char** argv) {
  CLI::App app{"Broadcast simulation of proof packages"};
  std::string templ = "occluded-stop-sign";
  std::optional<std::string> file, nodes_csv, deliveries_csv;
  std::vector<std::string> sets;
  std::uint64_t env_seed = 1;
  std::size_t seeds = 1;
  std::optional<std::uint64_t> seed;
  app.add_option("--template", templ, "occluded-stop-sign, replay-storm or mixed-fleet")->capture_default_str();
  app.add_option("--scenario", file, "Scenario file (overrides --template)");
  app.add_option("--set", sets, "Template override key=value");
  app.add_option("--seed", seed, "Run seed");
  app.add_option("--seeds", seeds, "Run this many consecutive seeds and print one summary each")->capture_default_str();
  app.add_option("--env-seed", env_seed, "Seed for keys and circuit setup")->capture_default_str();
  app.add_option("--nodes-csv", nodes_csv, "Write per-node statistics here");
  app.add_option("--deliveries-csv", deliveries_csv, "Write per-delivery records here");
  CLI11_PARSE(app, argc, argv);

  try {
    sim::SimScenario base;
    if (file) {
      std::ifstream in(*file);
      if (!in) throw UsageError("cannot read " + *file);
      std::stringstream text;
      text << in.rdbuf();
      base = sim::parse_scenario(text.str());
    } else {
      std::map<std::string, std::string> overrides;
      for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set needs key=value");
        overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      base = sim::make_scenario(templ, overrides);
    }
    if (seed) base.seed = *seed;
    sim::SimEnvironment env(env_seed);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < seeds; ++i) {
      sim::SimScenario s = base;
      s.seed = base.seed + i;
      sim::SimReport r = sim::run_scenario(s, env);
      std::cout << r.summary() << '\n';
      failures += r.attack_successes + r.honest_failures + r.wrong_reasons + (r.balanced() ? 0 : 1);
      if (i + 1 == seeds) {
        if (nodes_csv) std::ofstream(*nodes_csv) << r.nodes_csv();
        if (deliveries_csv) std::ofstream(*deliveries_csv) << r.deliveries_csv();
        if (seeds == 1) std::cout << r.nodes_csv();
      }
    }
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
