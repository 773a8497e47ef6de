#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdots/error.hpp"
#include "qdots/scenario.hpp"

namespace sc = qdots::scenario;

namespace {

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qdots::Error(qdots::ErrorKind::Config, path + ": cannot open config file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw qdots::Error(qdots::ErrorKind::Config, path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw qdots::Error(qdots::ErrorKind::Config, out_path + ": cannot open output file");
  out << text;
  if (!out) throw qdots::Error(qdots::ErrorKind::Config, out_path + ": write failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-based qubit simulator"};
  app.require_subcommand(1);

  bool paper_factorized = false;
  std::uint64_t seed = 0;
  app.add_flag("--paper-factorized", paper_factorized,
               "Use the factorized exp(int Hdec) exp(int H0) propagator (decoherence only)");
  app.add_option("--seed", seed, "Reserved; every scenario is deterministic");

  std::string config_path;
  std::string out_path;
  std::string format = "csv";

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its time series");
  simulate->add_option("--config", config_path, "Scenario file")->required();
  simulate->add_option("--out", out_path, "Output file (stdout when omitted)");
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string axis;
  std::string values;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over values of one numeric parameter");
  sweep->add_option("--config", config_path, "Scenario file")->required();
  sweep->add_option("--axis", axis, "Dotted parameter path, e.g. params.ts")->required();
  sweep->add_option("--values", values, "Comma list or lo:hi:count")->required();
  sweep->add_option("--out", out_path, "Output file (stdout when omitted)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");

  auto* eigens = app.add_subcommand("eigens", "Compare closed-form and numeric eigen data");
  eigens->add_option("--config", config_path, "Scenario file")->required();

  for (auto* sub : {simulate, sweep, eigens}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  sc::RunOptions opts;
  opts.paper_factorized = paper_factorized;
  if (app.count("--seed") > 0) opts.seed = seed;

  try {
    const nlohmann::json config = load_config(config_path);
    if (simulate->parsed()) {
      const sc::RunResult r = sc::run_scenario(sc::parse_scenario(config, opts));
      emit(format == "json" ? sc::to_json(r).dump(2) + "\n" : sc::to_csv(r), out_path);
    } else if (sweep->parsed()) {
      const auto rows = sc::sweep(config, axis, sc::parse_values(values), opts, threads);
      emit(format == "json" ? sc::sweep_json(axis, rows).dump(2) + "\n" : sc::sweep_csv(axis, rows), out_path);
    } else {
      std::cout << sc::eigen_report(sc::parse_scenario(config, opts)).dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "qdots: " << e.what() << "\n";
    return sc::exit_code_for(e);
  }
  return 0;
}
