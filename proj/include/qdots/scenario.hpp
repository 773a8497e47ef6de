#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qdots::scenario {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kOutputVersion = 1;

struct TimeSpec {
  double t0 = 0.0;
  double t_max = 0.0;
  double dt = 0.0;
  int sample_stride = 1;
};

struct Scenario {
  std::string kind;  // single-qubit, rabi, swap, cnot, decoherence, spectral
  nlohmann::json params = nlohmann::json::object();
  TimeSpec time;
  std::vector<std::string> outputs;  // empty keeps every column
  bool paper_factorized = false;
  std::uint64_t seed = 0;  // reserved
};

struct RunOptions {
  bool paper_factorized = false;
  std::optional<std::uint64_t> seed;
};

// Throws Error(Config) whose message starts with the offending field path.
Scenario parse_scenario(const nlohmann::json& config, const RunOptions& opts = {});

struct TimeSeries {
  std::vector<std::string> names;           // names[0] == "t"
  std::vector<std::vector<double>> columns;  // columns[k].size() == rows()

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

struct RunResult {
  std::string kind;
  TimeSeries series;
  nlohmann::ordered_json summary;
};

RunResult run_scenario(const Scenario& s);

// Angular frequency from linearly interpolated rising zero crossings of p - mean(p).
std::optional<double> oscillation_omega(const std::vector<double>& t, const std::vector<double>& p);

std::string to_csv(const RunResult& r);
nlohmann::ordered_json to_json(const RunResult& r);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  nlohmann::ordered_json summary;
};

// Values like "0.1,0.2,0.5" or an inclusive range "lo:hi:count".
std::vector<double> parse_values(const std::string& text);

// Rows follow the order of values whatever the thread count.
std::vector<SweepRow> sweep(const nlohmann::json& config, const std::string& axis, const std::vector<double>& values,
                            const RunOptions& opts = {}, unsigned threads = 0);

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows);
nlohmann::ordered_json sweep_json(const std::string& axis, const std::vector<SweepRow>& rows);

// Closed-form against numeric eigen data at t0.
nlohmann::ordered_json eigen_report(const Scenario& s);

// 0 success, 2 configuration problem, 3 numerical failure.
int exit_code_for(const std::exception& e);

}  // namespace qdots::scenario
