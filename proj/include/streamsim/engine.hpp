#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "streamsim/accounting.hpp"
#include "streamsim/domain.hpp"
#include "streamsim/policies.hpp"

namespace streamsim {

struct EngineConfig {
  double horizon = 0.0;
  int batches = 1;
  std::uint64_t seed = 1;
  EstimationMode estimation = EstimationMode::oracle;
  bool preemptive = false;
  std::vector<int> initial_streams;  // active at time 0, counted as accepted
  double smoothing = 0.2;            // window-to-window estimate blending
  int min_window_samples = 10;
};

struct ClassReport {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t completed = 0;
  std::int64_t penalized = 0;
  std::int64_t active_at_horizon = 0;
  std::int64_t jobs_arrived = 0;
  std::int64_t jobs_completed = 0;
  std::int64_t jobs_delayed = 0;  // completed jobs that waited
  double job_wait_sum = 0.0;      // over completed jobs
};

struct SimulationReport {
  RevenueLedger ledger;
  std::vector<ClassReport> classes;
  std::vector<double> batch_rates;
  BatchStats stats;
  Allocation final_alloc;
  std::int64_t events_processed = 0;
  double final_time = 0.0;
};

// One full discrete-event run: Poisson stream submissions, per-stream renewal
// job arrivals, FCFS service in per-class pools, policy-driven admission and
// reallocation at stream arrival/completion instants. Deterministic for a
// fixed (classes, policy, config) tuple. `trace`, when given, receives one
// line per event.
SimulationReport run_simulation(const std::vector<ServiceClass>& classes,
                                int total_servers, const PolicyConfig& policy,
                                const EngineConfig& cfg,
                                std::ostream* trace = nullptr);

// Smoothed (mean, scv) tracker for one sample kind. A window with fewer than
// min_samples entries leaves the previous state untouched; the first full
// window is taken as-is, later ones blend in with weight alpha.
struct MomentEstimate {
  double mean = 0.0;
  double scv = 0.0;
  bool valid = false;
};

MomentEstimate update_moment_estimate(const MomentEstimate& prev,
                                      const std::vector<double>& window,
                                      double alpha, int min_samples);

struct WindowSamples {
  std::vector<double> interarrivals;
  std::vector<double> services;
};

// Demand 4-tuple for one class from one observation window. Oracle mode
// returns the oracle values; measured mode updates each side (arrival,
// service) that has enough samples and keeps `previous` (or falls back to
// oracle) for the side that does not.
ClassEstimate estimate_demand(const WindowSamples& window, EstimationMode mode,
                              const ClassEstimate& oracle,
                              const ClassEstimate* previous,
                              double alpha = 0.2, int min_samples = 10);

}  // namespace streamsim
