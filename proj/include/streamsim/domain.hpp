#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "streamsim/stochastic.hpp"

namespace streamsim {

// Static description of one service type: demand side (gamma, k, arrival and
// service distributions, submission rate delta) and contract side (charge per
// stream, obligation on the stream's average wait, penalty on violation).
struct ServiceClass {
  int index = 0;
  double gamma = 1.0;  // job arrival rate within one stream
  int k = 1;           // jobs per stream
  Distribution service_dist = Distribution::exponential(1.0);
  Distribution job_interarrival_dist = Distribution::exponential(1.0);
  double delta = 0.0;      // stream submission rate
  double charge = 0.0;     // earned per completed stream
  double obligation = 0.0; // bound on the stream's average wait
  double penalty = 0.0;    // forfeited when the bound is exceeded
};

// Live state of one accepted stream. mean_wait is kept as an exact running
// sum so the arithmetic mean is reproducible from the event log.
struct StreamRecord {
  std::int64_t id = 0;
  int class_index = 0;
  int k = 1;
  double gamma = 1.0;
  int jobs_arrived = 0;
  int jobs_completed = 0;
  double wait_sum = 0.0;
  double admitted_at = 0.0;

  double mean_wait() const {
    return jobs_completed == 0 ? 0.0 : wait_sum / jobs_completed;
  }
};

// Server counts per class; always sums to the cluster size.
using Allocation = std::vector<int>;

enum class EstimationMode { oracle, measured };

// The per-class demand 4-tuple every policy consumes.
struct ClassEstimate {
  double lambda = 0.0;
  double ca2 = 1.0;
  double b = 1.0;
  double cb2 = 1.0;
};

struct DemandEstimate {
  std::vector<ClassEstimate> per_class;
  EstimationMode source = EstimationMode::oracle;
};

// Remaining slack on the stream's average-wait obligation given l of k waits
// already observed with mean u. May be negative once the obligation is
// unsalvageable.
inline double residual_obligation(double q, int k, int l, double u) {
  if (l < 0 || l >= k) throw std::domain_error("residual_obligation: need 0 <= l < k");
  return (q * static_cast<double>(k) - u * static_cast<double>(l)) /
         static_cast<double>(k - l);
}

// Snapshot views handed to the decision rules. Policies never see engine
// internals, only these value types.
struct StreamSnapshot {
  int remaining = 1;        // jobs not yet completed
  double residual_q = 0.0;  // residual_obligation for this stream
};

struct ClassSnapshot {
  double charge = 0.0;
  double penalty = 0.0;
  double obligation = 0.0;
  int k = 1;
  double gamma = 1.0;
  ClassEstimate est;
  std::vector<StreamSnapshot> streams;  // active streams only

  bool has_streams() const { return !streams.empty(); }
};

struct SystemSnapshot {
  int total_servers = 0;
  std::vector<ClassSnapshot> classes;
};

}  // namespace streamsim
