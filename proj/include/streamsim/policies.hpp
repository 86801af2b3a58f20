#pragma once

#include <optional>
#include <vector>

#include "streamsim/domain.hpp"

namespace streamsim {

enum class AllocationRule { offered_loads, potential_loads_static };
enum class AdmissionRule { admit_all, current_state, current_state_optimized, threshold };
enum class WeightRule { ratio_r_over_c, unit };

struct PolicyConfig {
  AllocationRule allocation = AllocationRule::offered_loads;
  AdmissionRule admission = AdmissionRule::current_state;
  WeightRule weight = WeightRule::ratio_r_over_c;
  // Revenue model for the admission threshold: when false, the blocked state
  // (as many active streams as the threshold allows) contributes nothing,
  // since no stream is accepted there.
  bool include_blocked_state = true;
  double threshold_epsilon = 0.0;  // <= 0 selects 1e-6 * delta * charge
  int threshold_cap = 0;           // <= 0 selects ceil(10 * sigma) + 100
  double drift_threshold = 0.10;   // fractional change that forces a rebuild
};

// alpha_i: server-allocation weight of a class.
double class_weight(double charge, double penalty, WeightRule rule);

// Proportional split of total_servers by rho_i * alpha_i, rounded, then
// patched to sum exactly and to give every floored class at least one server.
Allocation offered_loads_allocation(const std::vector<double>& rho,
                                    const std::vector<double>& alpha,
                                    int total_servers,
                                    const std::vector<bool>& floored);

// Expected revenue still to come from the active streams of one class when it
// holds n servers and sees aggregate arrival rate lambda.
double expected_revenue_current(const ClassSnapshot& cls, double lambda, int n);

// Expected revenue change from accepting one stream of class `incoming` and
// moving from allocation prev to next. The incoming class is evaluated at its
// post-acceptance arrival rate.
double revenue_delta_accept(const SystemSnapshot& s, int incoming,
                            const Allocation& next, const Allocation& prev);

// Expected revenue change from a pure reallocation (no admission), prev to
// next, with all arrival rates unchanged.
double revenue_delta_realloc(const SystemSnapshot& s, const Allocation& next,
                             const Allocation& prev);

enum class DeltaMode { arrival, completion };

struct ClimbResult {
  Allocation alloc;
  double delta = 0.0;
};

// Hill climbing over single-server moves between `pivot` and every other
// class, maximizing the revenue delta against `baseline`. Only strict
// improvements are taken; ties keep the earlier candidate (toward pivot
// first, then lowest class index). Moves that would strip a floored class of
// its last server are skipped.
ClimbResult improve_allocation(const SystemSnapshot& s, const Allocation& start,
                               int pivot, DeltaMode mode,
                               const Allocation& baseline,
                               const std::vector<bool>& floored);

struct AdmissionDecision {
  bool accept = false;
  Allocation alloc;  // allocation to install when accepted; prev otherwise
  double delta = 0.0;
};

// Admission rule: recompute the allocation as if the stream were accepted,
// optionally hill-climb it, then accept only on a strictly positive revenue
// delta. Rejection leaves the allocation untouched.
AdmissionDecision current_state_admission(const SystemSnapshot& s, int incoming,
                                          const Allocation& current,
                                          WeightRule weight, bool optimize);

// Allocation from potential loads phi_i = delta_i * k_i * b_i; static.
Allocation potential_loads_allocation(const std::vector<ServiceClass>& classes,
                                      const std::vector<ClassEstimate>& est,
                                      int total_servers, WeightRule rule);

// Stationary distribution of the active-stream count in a loss system with M
// slots and offered stream load sigma.
std::vector<double> erlang_loss_pmf(double sigma, int M);

// Long-run revenue per unit time of one class under admission threshold M
// and n assigned servers.
double threshold_revenue_rate(const ServiceClass& cls, const ClassEstimate& est,
                              double delta, int n, int M,
                              bool include_blocked_state);

// Scan M = 1, 2, ... for the revenue-maximizing threshold. Stops at the first
// decrease and reports the previous M; a positive increment below epsilon, or
// reaching the cap, means no finite threshold helps (nullopt = unbounded).
std::optional<int> compute_threshold(const ServiceClass& cls,
                                     const ClassEstimate& est, double delta,
                                     int n, double epsilon, int cap,
                                     bool include_blocked_state);

struct ThresholdEntry {
  std::optional<int> limit;  // nullopt = admit regardless of count
  int servers = 0;
  double sigma = 0.0;
};

struct ThresholdTable {
  std::vector<ThresholdEntry> entries;
  Allocation alloc;
};

// Static allocation plus per-class thresholds for the given parameters.
ThresholdTable build_threshold_table(const std::vector<ServiceClass>& classes,
                                     const std::vector<ClassEstimate>& est,
                                     const std::vector<double>& deltas,
                                     int total_servers,
                                     const PolicyConfig& cfg);

bool threshold_admission(std::int64_t active_count, const ThresholdEntry& entry);

double default_threshold_epsilon(double delta, double charge);
int default_threshold_cap(double sigma);

}  // namespace streamsim
