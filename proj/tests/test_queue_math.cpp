#include "doctest.h"
#include "streamsim/queue_math.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace streamsim;

namespace {

// Oracle: stationary P(J >= n) of the M/M/n birth-death chain, truncated at
// n + 2000 states. Independent of the closed form under test; the geometric
// tail beyond the truncation contributes < 2e-9 relative error even at
// rho/n = 0.99.
double bd_delay_probability(int n, double rho) {
  const int cap = n + 2000;
  std::vector<long double> pi(static_cast<size_t>(cap) + 1);
  pi[0] = 1.0L;
  for (int j = 0; j < cap; ++j) {
    const int servers = std::min(j + 1, n);
    pi[static_cast<size_t>(j) + 1] =
        pi[static_cast<size_t>(j)] * static_cast<long double>(rho) / servers;
  }
  long double total = 0.0L, tail = 0.0L;
  for (int j = cap; j >= 0; --j) {
    total += pi[static_cast<size_t>(j)];
    if (j >= n) tail += pi[static_cast<size_t>(j)];
  }
  return static_cast<double>(tail / total);
}

// Oracle: composite Simpson integration of the standard normal density from
// 0 to x. Error term is O(h^4), far below the 1e-7 contract at this grid.
double phi_by_integration(double x) {
  const double a = 0.0;
  const double b = std::fabs(x);
  const int intervals = 40000;  // even
  const double h = (b - a) / intervals;
  auto density = [](double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
  };
  double sum = density(a) + density(b);
  for (int i = 1; i < intervals; ++i)
    sum += density(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  const double half_mass = sum * h / 3.0;
  return x >= 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

}  // namespace

TEST_CASE("erlang_c matches hand values") {
  CHECK(erlang_c(1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(erlang_c(2, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(erlang_c(5, 0.0) == 0.0);
}

TEST_CASE("erlang_c agrees with the birth-death oracle") {
  for (int n = 1; n <= 20; ++n) {
    for (double u : {0.1, 0.5, 0.9, 0.99}) {
      const double rho = u * n;
      const double expect = bd_delay_probability(n, rho);
      const double got = erlang_c(n, rho);
      CHECK(std::fabs(got - expect) / expect <= 1e-8);
    }
  }
}

TEST_CASE("erlang_c is stable at large n") {
  const double p = erlang_c(10000, 9900.0);
  CHECK(p > 0.0);
  CHECK(p < 1.0);
  CHECK(std::isfinite(p));
  CHECK(erlang_c(10000, 10.0) == 0.0);  // deep underflow collapses to 0
}

TEST_CASE("erlang_c monotonicity") {
  for (int n = 1; n <= 16; n += 3) {
    double prev = -1.0;
    for (double u = 0.05; u < 1.0; u += 0.05) {
      const double v = erlang_c(n, u * n);
      CHECK(v >= prev);
      prev = v;
    }
  }
  const double rho = 3.5;
  double prev = 2.0;
  for (int n = 4; n <= 30; ++n) {
    const double v = erlang_c(n, rho);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("erlang_c domain errors") {
  CHECK_THROWS_AS(erlang_c(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(erlang_c(4, 4.0), std::domain_error);
  CHECK_THROWS_AS(erlang_c(4, 5.0), std::domain_error);
  CHECK_THROWS_AS(erlang_c(4, -0.1), std::domain_error);
}

TEST_CASE("mmn_wait hand values") {
  CHECK(mmn_wait(1, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mmn_wait(2, 1.0, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(mmn_wait(3, 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(mmn_wait(2, 1.0, 0.0), std::domain_error);
}

TEST_CASE("gign_wait reduces to mmn_wait for ca2=cb2=1, bit for bit") {
  for (int n : {1, 3, 7, 19}) {
    for (double u : {0.2, 0.6, 0.95}) {
      QueueParams p;
      p.n = n;
      p.b = 2.5;
      p.lambda = u * n / p.b;
      p.ca2 = 1.0;
      p.cb2 = 1.0;
      CHECK(gign_wait(p) == mmn_wait(n, p.rho(), p.b));
    }
  }
}

TEST_CASE("gign_wait scales by the variability factor") {
  QueueParams p;
  p.n = 1;
  p.lambda = 0.5;
  p.b = 1.0;
  p.ca2 = 1.0;
  p.cb2 = 0.0;
  CHECK(gign_wait(p) == doctest::Approx(0.5).epsilon(1e-15));
  p.cb2 = 6.12;
  CHECK(gign_wait(p) == doctest::Approx(3.56).epsilon(1e-12));
}

TEST_CASE("std_normal_cdf against the integration oracle") {
  for (double x : {0.0, 0.25, -0.25, 0.5, -1.0, 1.0, 1.959964, -1.959964, 3.0,
                   -3.0, 5.0, -5.0, 7.5}) {
    CHECK(std::fabs(std_normal_cdf(x) - phi_by_integration(x)) <= 1e-7);
  }
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(std_normal_cdf(-10.0) < 1e-20);
  for (double x = -6.0; x <= 6.0; x += 0.37)
    CHECK(std_normal_cdf(-x) + std_normal_cdf(x) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("penalty_probability saturation and exact cases") {
  QueueParams p;
  p.n = 4;
  p.b = 1.0;
  p.lambda = 4.0;  // rho == n
  CHECK(penalty_probability(3.0, p, 10) == 1.0);
  p.lambda = 9.0;
  CHECK(penalty_probability(3.0, p, 10) == 1.0);
  p.n = 0;
  p.lambda = 0.0;
  CHECK(penalty_probability(3.0, p, 10) == 1.0);

  // zero load: certain compliance for positive x, certain violation otherwise
  p.n = 3;
  p.lambda = 0.0;
  CHECK(penalty_probability(2.0, p, 10) == 0.0);
  CHECK(penalty_probability(0.0, p, 10) == 1.0);
  CHECK(penalty_probability(-1.0, p, 10) == 1.0);

  // negative residual obligation with positive load
  p.lambda = 1.0;
  CHECK(penalty_probability(-2.0, p, 10) == 1.0);
  CHECK(penalty_probability(0.0, p, 10) == 1.0);
}

TEST_CASE("penalty_probability is 0.5 at x = beta") {
  QueueParams p;
  p.n = 2;
  p.lambda = 0.7;
  p.b = 1.3;
  p.ca2 = 1.0;
  p.cb2 = 2.0;
  const double beta = gign_wait(p);
  for (int k : {1, 7, 50})
    CHECK(penalty_probability(beta, p, k) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("penalty_probability composes prior operations") {
  QueueParams p;
  p.n = 1;
  p.lambda = 0.5;
  p.b = 1.0;
  const double g = penalty_probability(2.0, p, 100);
  // beta = 1, sd = 0.1: the tail beyond ten standard deviations
  CHECK(g <= 1e-20);
  CHECK(g >= 0.0);
}

TEST_CASE("penalty_probability monotonicity") {
  QueueParams p;
  p.n = 5;
  p.lambda = 3.5;
  p.b = 1.0;
  const int k = 40;

  double prev = 1.5;
  for (double x = 0.1; x <= 4.0; x += 0.1) {
    const double v = penalty_probability(x, p, k);
    CHECK(v <= prev);
    prev = v;
  }

  const double x = 0.8;
  prev = 1.5;
  for (int n = 4; n <= 14; ++n) {
    QueueParams q = p;
    q.n = n;
    const double v = penalty_probability(x, q, k);
    CHECK(v <= prev);
    prev = v;
  }

  prev = -1.0;
  for (double lam = 0.5; lam <= 4.9; lam += 0.2) {
    QueueParams q = p;
    q.lambda = lam;
    const double v = penalty_probability(x, q, k);
    CHECK(v >= prev);
    prev = v;
  }

  // k concentrates the average around beta: pushes the probability up when
  // x < beta and down when x > beta
  QueueParams q = p;
  q.lambda = 4.6;
  const double beta = gign_wait(q);
  double below = penalty_probability(0.5 * beta, q, 2);
  double above = penalty_probability(2.0 * beta, q, 2);
  for (int kk : {8, 32, 128}) {
    const double vb = penalty_probability(0.5 * beta, q, kk);
    const double va = penalty_probability(2.0 * beta, q, kk);
    CHECK(vb >= below);
    CHECK(va <= above);
    below = vb;
    above = va;
  }

  CHECK_THROWS_AS(penalty_probability(1.0, p, 0), std::domain_error);
}
