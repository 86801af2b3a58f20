#include "streamsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "streamsim/queue_math.hpp"

namespace streamsim {

double class_weight(double charge, double penalty, WeightRule rule) {
  if (rule == WeightRule::unit) return 1.0;
  return charge > 0.0 ? penalty / charge : 1.0;
}

namespace {

// Order used when trimming/padding the rounded shares: the lowest index is
// favored, i.e. it keeps its server on removal ties and receives first on
// addition ties.
struct ShareRank {
  double remainder;
  int index;
};

}  // namespace

Allocation offered_loads_allocation(const std::vector<double>& rho,
                                    const std::vector<double>& alpha,
                                    int total_servers,
                                    const std::vector<bool>& floored) {
  const std::size_t m = rho.size();
  if (m == 0) throw std::invalid_argument("offered_loads_allocation: no classes");
  if (alpha.size() != m || floored.size() != m)
    throw std::invalid_argument("offered_loads_allocation: size mismatch");
  if (total_servers < 0)
    throw std::invalid_argument("offered_loads_allocation: negative server count");

  Allocation n(m, 0);
  double total_weight = 0.0;
  for (std::size_t i = 0; i < m; ++i) total_weight += rho[i] * alpha[i];

  if (total_weight <= 0.0) {
    // Nothing offered anywhere: spread evenly, lowest indices take the extras.
    const int base = total_servers / static_cast<int>(m);
    int extra = total_servers % static_cast<int>(m);
    for (std::size_t i = 0; i < m; ++i) n[i] = base + (extra-- > 0 ? 1 : 0);
  } else {
    std::vector<double> remainder(m, 0.0);
    int sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double share =
          static_cast<double>(total_servers) * rho[i] * alpha[i] / total_weight;
      const double fl = std::floor(share);
      n[i] = static_cast<int>(std::floor(share + 0.5));
      remainder[i] = share - fl;
      sum += n[i];
    }
    if (sum > total_servers) {
      // Remove from the smallest remainders; equal remainders keep the lowest
      // index intact, so the highest tied index loses first.
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (remainder[a] != remainder[b]) return remainder[a] < remainder[b];
        return a > b;
      });
      while (sum > total_servers) {
        bool moved = false;
        for (int idx : order) {
          if (sum == total_servers) break;
          if (n[idx] > 0) {
            --n[idx];
            --sum;
            moved = true;
          }
        }
        if (!moved) break;  // all zero; nothing left to trim
      }
    } else if (sum < total_servers) {
      // Add to the largest remainders, lowest index first on ties.
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a < b;
      });
      while (sum < total_servers) {
        for (int idx : order) {
          if (sum == total_servers) break;
          ++n[idx];
          ++sum;
        }
      }
    }
  }

  // Every floored class keeps at least one server so its accepted work cannot
  // starve; donors are the currently largest pools.
  for (std::size_t i = 0; i < m; ++i) {
    if (!floored[i] || n[i] >= 1) continue;
    int donor = -1;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const bool usable = n[j] >= 2 || (n[j] == 1 && !floored[j]);
      if (!usable) continue;
      if (donor < 0 || n[j] > n[donor]) donor = static_cast<int>(j);
    }
    if (donor < 0) break;  // total too small to honor every floor
    --n[donor];
    ++n[i];
  }
  return n;
}

namespace {

QueueParams class_params(const ClassSnapshot& cls, double lambda, int n) {
  QueueParams p;
  p.n = n;
  p.lambda = lambda;
  p.b = cls.est.b;
  p.ca2 = cls.est.ca2;
  p.cb2 = cls.est.cb2;
  return p;
}

// Sum over active streams of the penalty probability given a hypothetical
// (arrival rate, server count) for the class.
double penalty_mass(const ClassSnapshot& cls, double lambda, int n) {
  double total = 0.0;
  for (const StreamSnapshot& st : cls.streams)
    total += penalty_probability(st.residual_q, class_params(cls, lambda, n),
                                 st.remaining);
  return total;
}

}  // namespace

double expected_revenue_current(const ClassSnapshot& cls, double lambda, int n) {
  return cls.charge * static_cast<double>(cls.streams.size()) -
         cls.penalty * penalty_mass(cls, lambda, n);
}

double revenue_delta_accept(const SystemSnapshot& s, int incoming,
                            const Allocation& next, const Allocation& prev) {
  const auto m = s.classes.size();
  if (next.size() != m || prev.size() != m)
    throw std::invalid_argument("revenue_delta_accept: allocation size mismatch");
  if (incoming < 0 || static_cast<std::size_t>(incoming) >= m)
    throw std::invalid_argument("revenue_delta_accept: bad class index");

  const ClassSnapshot& ci = s.classes[incoming];
  const double lambda_after = ci.est.lambda + ci.gamma;
  double delta =
      ci.charge - ci.penalty * penalty_probability(
                      ci.obligation, class_params(ci, lambda_after, next[incoming]),
                      ci.k);
  for (std::size_t j = 0; j < m; ++j) {
    const ClassSnapshot& cj = s.classes[j];
    if (cj.streams.empty() || cj.penalty == 0.0) continue;
    const double lambda_new =
        static_cast<int>(j) == incoming ? cj.est.lambda + cj.gamma : cj.est.lambda;
    const double g_new = penalty_mass(cj, lambda_new, next[j]);
    const double g_old = penalty_mass(cj, cj.est.lambda, prev[j]);
    delta -= cj.penalty * (g_new - g_old);
  }
  return delta;
}

double revenue_delta_realloc(const SystemSnapshot& s, const Allocation& next,
                             const Allocation& prev) {
  const auto m = s.classes.size();
  if (next.size() != m || prev.size() != m)
    throw std::invalid_argument("revenue_delta_realloc: allocation size mismatch");
  double delta = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const ClassSnapshot& cj = s.classes[j];
    if (cj.streams.empty() || cj.penalty == 0.0 || next[j] == prev[j]) continue;
    delta -= cj.penalty * (penalty_mass(cj, cj.est.lambda, next[j]) -
                           penalty_mass(cj, cj.est.lambda, prev[j]));
  }
  return delta;
}

ClimbResult improve_allocation(const SystemSnapshot& s, const Allocation& start,
                               int pivot, DeltaMode mode,
                               const Allocation& baseline,
                               const std::vector<bool>& floored) {
  const int m = static_cast<int>(s.classes.size());
  if (pivot < 0 || pivot >= m)
    throw std::invalid_argument("improve_allocation: bad pivot class");
  auto objective = [&](const Allocation& a) {
    return mode == DeltaMode::arrival ? revenue_delta_accept(s, pivot, a, baseline)
                                      : revenue_delta_realloc(s, a, baseline);
  };

  Allocation cur = start;
  double cur_value = objective(cur);
  for (;;) {
    Allocation best_alloc;
    double best_value = cur_value;
    bool improved = false;
    // Moves toward the pivot are tried first, then away from it, each in
    // ascending class order; later ties never displace an earlier winner.
    for (int dir = 0; dir < 2; ++dir) {
      for (int j = 0; j < m; ++j) {
        if (j == pivot) continue;
        const int from = dir == 0 ? j : pivot;
        const int to = dir == 0 ? pivot : j;
        if (cur[from] == 0) continue;
        if (floored[from] && cur[from] == 1) continue;
        Allocation neighbor = cur;
        --neighbor[from];
        ++neighbor[to];
        const double value = objective(neighbor);
        if (value > best_value) {
          best_alloc = std::move(neighbor);
          best_value = value;
          improved = true;
        }
      }
    }
    if (!improved) break;
    cur = std::move(best_alloc);
    cur_value = best_value;
  }
  return {cur, cur_value};
}

AdmissionDecision current_state_admission(const SystemSnapshot& s, int incoming,
                                          const Allocation& current,
                                          WeightRule weight, bool optimize) {
  const std::size_t m = s.classes.size();
  std::vector<double> rho(m), alpha(m);
  std::vector<bool> floored(m);
  for (std::size_t j = 0; j < m; ++j) {
    const ClassSnapshot& cj = s.classes[j];
    double lambda = cj.est.lambda;
    if (static_cast<int>(j) == incoming) lambda += cj.gamma;
    rho[j] = lambda * cj.est.b;
    alpha[j] = class_weight(cj.charge, cj.penalty, weight);
    floored[j] = cj.has_streams() || static_cast<int>(j) == incoming;
  }
  Allocation candidate =
      offered_loads_allocation(rho, alpha, s.total_servers, floored);

  double delta;
  if (optimize) {
    ClimbResult climbed = improve_allocation(s, candidate, incoming,
                                             DeltaMode::arrival, current, floored);
    candidate = std::move(climbed.alloc);
    delta = climbed.delta;
  } else {
    delta = revenue_delta_accept(s, incoming, candidate, current);
  }
  if (delta > 0.0) return {true, std::move(candidate), delta};
  return {false, current, delta};
}

namespace {

Allocation potential_allocation_impl(const std::vector<ServiceClass>& classes,
                                     const std::vector<ClassEstimate>& est,
                                     const std::vector<double>& deltas,
                                     int total_servers, WeightRule rule) {
  const std::size_t m = classes.size();
  std::vector<double> phi(m), alpha(m);
  std::vector<bool> floored(m);
  for (std::size_t i = 0; i < m; ++i) {
    phi[i] = deltas[i] * static_cast<double>(classes[i].k) * est[i].b;
    alpha[i] = class_weight(classes[i].charge, classes[i].penalty, rule);
    floored[i] = phi[i] > 0.0;
  }
  return offered_loads_allocation(phi, alpha, total_servers, floored);
}

}  // namespace

Allocation potential_loads_allocation(const std::vector<ServiceClass>& classes,
                                      const std::vector<ClassEstimate>& est,
                                      int total_servers, WeightRule rule) {
  std::vector<double> deltas(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) deltas[i] = classes[i].delta;
  return potential_allocation_impl(classes, est, deltas, total_servers, rule);
}

std::vector<double> erlang_loss_pmf(double sigma, int M) {
  if (M < 0) throw std::domain_error("erlang_loss_pmf: M must be >= 0");
  if (!(sigma >= 0.0)) throw std::domain_error("erlang_loss_pmf: sigma must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(M) + 1);
  p[0] = 1.0;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j <= M; ++j) {
    term *= sigma / static_cast<double>(j);
    if (term > 1e280) {
      // Rescale everything so the running terms stay finite; only ratios
      // matter once normalized.
      for (int t = 0; t < j; ++t) p[t] *= 1e-280;
      sum *= 1e-280;
      term *= 1e-280;
    }
    p[j] = term;
    sum += term;
  }
  for (double& v : p) v /= sum;
  return p;
}

double threshold_revenue_rate(const ServiceClass& cls, const ClassEstimate& est,
                              double delta, int n, int M,
                              bool include_blocked_state) {
  if (M < 0) throw std::domain_error("threshold_revenue_rate: M must be >= 0");
  if (!(cls.gamma > 0.0))
    throw std::domain_error("threshold_revenue_rate: gamma must be > 0");
  const double sigma = delta * static_cast<double>(cls.k) / cls.gamma;
  const std::vector<double> p = erlang_loss_pmf(sigma, M);
  const int top = include_blocked_state ? M : M - 1;
  double penalty_sum = 0.0;
  double accept_mass = 0.0;
  for (int j = 0; j <= top; ++j) {
    QueueParams qp;
    qp.n = n;
    qp.lambda = static_cast<double>(j) * cls.gamma;
    qp.b = est.b;
    qp.ca2 = est.ca2;
    qp.cb2 = est.cb2;
    const double g = penalty_probability(cls.obligation, qp, cls.k);
    penalty_sum += p[j] * g;
    accept_mass += p[j];
  }
  if (include_blocked_state)
    return delta * (cls.charge - cls.penalty * penalty_sum);
  return delta * (cls.charge * accept_mass - cls.penalty * penalty_sum);
}

double default_threshold_epsilon(double delta, double charge) {
  return 1e-6 * delta * charge;
}

int default_threshold_cap(double sigma) {
  return static_cast<int>(std::ceil(10.0 * sigma)) + 100;
}

std::optional<int> compute_threshold(const ServiceClass& cls,
                                     const ClassEstimate& est, double delta,
                                     int n, double epsilon, int cap,
                                     bool include_blocked_state) {
  const double sigma = delta * static_cast<double>(cls.k) / cls.gamma;
  if (epsilon <= 0.0) epsilon = default_threshold_epsilon(delta, cls.charge);
  if (cap <= 0) cap = default_threshold_cap(sigma);
  double prev =
      threshold_revenue_rate(cls, est, delta, n, 1, include_blocked_state);
  for (int M = 2; M <= cap; ++M) {
    const double cur =
        threshold_revenue_rate(cls, est, delta, n, M, include_blocked_state);
    const double inc = cur - prev;
    // A drop of any size ends the climb; the previous M was the peak. A
    // positive crawl below epsilon means the revenue keeps inching upward
    // forever, so no finite threshold is worth imposing. An exactly flat
    // step is a plateau that may still end in a drop, so the scan goes on.
    if (inc < 0.0) return M - 1;
    if (inc > 0.0 && inc < epsilon) return std::nullopt;
    prev = cur;
  }
  return std::nullopt;
}

ThresholdTable build_threshold_table(const std::vector<ServiceClass>& classes,
                                     const std::vector<ClassEstimate>& est,
                                     const std::vector<double>& deltas,
                                     int total_servers,
                                     const PolicyConfig& cfg) {
  const std::size_t m = classes.size();
  if (est.size() != m || deltas.size() != m)
    throw std::invalid_argument("build_threshold_table: size mismatch");
  ThresholdTable table;
  table.alloc =
      potential_allocation_impl(classes, est, deltas, total_servers, cfg.weight);
  table.entries.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ThresholdEntry& e = table.entries[i];
    e.servers = table.alloc[i];
    e.sigma = deltas[i] * static_cast<double>(classes[i].k) / classes[i].gamma;
    e.limit = compute_threshold(classes[i], est[i], deltas[i], e.servers,
                                cfg.threshold_epsilon, cfg.threshold_cap,
                                cfg.include_blocked_state);
  }
  return table;
}

bool threshold_admission(std::int64_t active_count, const ThresholdEntry& entry) {
  if (!entry.limit.has_value()) return true;
  return active_count < static_cast<std::int64_t>(*entry.limit);
}

}  // namespace streamsim
