#include "streamsim/queue_math.hpp"

#include <cmath>

namespace streamsim {

double erlang_c(int n, double rho) {
  if (n < 1) throw std::domain_error("erlang_c: n must be >= 1");
  if (!(rho >= 0.0) || rho >= static_cast<double>(n))
    throw std::domain_error("erlang_c: need 0 <= rho < n");
  if (rho == 0.0) return 0.0;
  // ratio = sum_{j=0}^{s} (rho^j/j!) / (rho^s/s!), accumulated by dividing
  // the term recurrence through by the newest term. Every intermediate stays
  // >= 1, so nothing can overflow for realistic n; ratio -> inf at rho << n
  // just drives the result to 0, which is the right limit.
  double ratio = 1.0;
  for (int j = 1; j < n; ++j) ratio = 1.0 + ratio * static_cast<double>(j) / rho;
  const double tail = rho / (static_cast<double>(n) - rho);
  return tail / (ratio + tail);
}

double mmn_wait(int n, double rho, double b) {
  if (!(b > 0.0)) throw std::domain_error("mmn_wait: b must be > 0");
  const double c = erlang_c(n, rho);
  return b / (static_cast<double>(n) - rho) * c;
}

double gign_wait(const QueueParams& p) {
  return 0.5 * (p.ca2 + p.cb2) * mmn_wait(p.n, p.rho(), p.b);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Upper tail 1 - Phi(z), computed directly so tiny probabilities survive.
double normal_upper_tail(double z) {
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double penalty_probability(double x, const QueueParams& p, int k) {
  if (k < 1) throw std::domain_error("penalty_probability: k must be >= 1");
  if (p.n < 0) throw std::domain_error("penalty_probability: n must be >= 0");
  if (p.n == 0 || p.rho() >= static_cast<double>(p.n)) return 1.0;
  const double beta = gign_wait(p);
  if (beta == 0.0) return x > 0.0 ? 0.0 : 1.0;
  if (x <= 0.0) return 1.0;
  return normal_upper_tail((x - beta) / std::sqrt(beta / static_cast<double>(k)));
}

}  // namespace streamsim
