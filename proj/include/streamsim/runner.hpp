#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "streamsim/engine.hpp"
#include "streamsim/scenario.hpp"

namespace streamsim {

struct PointResult {
  std::string policy;
  std::optional<double> sweep_value;
  SimulationReport report;
};

struct MatrixResult {
  std::vector<PointResult> points;  // sweep-major, policy-minor order
};

// One simulation per (sweep value x policy), common seed per sweep point.
MatrixResult run_matrix(const Scenario& sc, std::ostream* trace = nullptr);

// CSV in the result schema: per point, one row per batch then a summary row
// carrying the batch-means CI half-width.
void write_results_csv(std::ostream& os, const Scenario& sc,
                       const MatrixResult& matrix);

// Python script that renders the CSV: revenue vs swept parameter with CI
// error bars, or per-batch rates when the scenario has no sweep.
std::string plot_script(const Scenario& sc, const std::string& csv_name);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<int> batches;
  std::optional<EstimationMode> estimation;
  std::optional<bool> preemptive;
  std::string out_dir = ".";
  bool trace = false;
  bool plot = false;
};

void apply_overrides(Scenario& sc, const RunOverrides& ov);

// Load, validate, run, and write outputs for one scenario file.
// Returns 0 on success, 1 on parse/validation failure, 2 on runtime failure.
int run_scenario_file(const std::string& path, const RunOverrides& ov,
                      std::ostream& out, std::ostream& err);

// Validate only; prints every issue. Returns 0 (clean or warnings) or 1.
int validate_scenario_file(const std::string& path, std::ostream& out,
                           std::ostream& err);

// Preset catalog: name -> scenario files shipped with the project.
std::string preset_dir();
std::vector<std::string> preset_files(const std::string& name);

}  // namespace streamsim
