#pragma once

#include <stdexcept>

namespace streamsim {

// One server pool as seen by the waiting-time model: n identical servers fed
// by job arrivals of rate lambda, mean service time b, and squared
// coefficients of variation ca2 (interarrivals) and cb2 (service times).
// Offered load rho = lambda*b is always derived, never stored.
struct QueueParams {
  int n = 0;
  double lambda = 0.0;
  double b = 1.0;
  double ca2 = 1.0;
  double cb2 = 1.0;

  double rho() const { return lambda * b; }
};

// Probability that an arriving job finds all n servers busy in an M/M/n
// queue (Erlang delay function). Requires n >= 1 and 0 <= rho < n.
// Stable for n up to at least 1e4: built from the term recurrence
// term_j = term_{j-1} * rho / j, never from raw factorials.
double erlang_c(int n, double rho);

// Mean M/M/n queueing delay: b/(n - rho) * erlang_c(n, rho).
double mmn_wait(int n, double rho, double b);

// Mean queueing delay for a GI/G/n pool: the M/M/n value scaled by
// (ca2 + cb2)/2. Identical to mmn_wait when ca2 = cb2 = 1.
double gign_wait(const QueueParams& p);

// Standard normal CDF, absolute error well under 1e-7.
double std_normal_cdf(double x);

// Probability that the average wait of the next k jobs exceeds x, treating
// that average as normal with mean beta = gign_wait(p) and variance beta/k.
// Total function: a saturated pool (rho >= n, or n == 0) yields exactly 1;
// beta == 0 yields 0 for x > 0 and 1 otherwise; x <= 0 with beta > 0 yields 1
// (callers may pass negative residual obligations).
double penalty_probability(double x, const QueueParams& p, int k);

}  // namespace streamsim
