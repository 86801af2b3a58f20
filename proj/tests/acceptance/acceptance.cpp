// Acceptance gate: every check runs against the shipped presets or against
// independent oracles (birth-death chains, exhaustive enumeration, direct
// factorial sums). Each criterion prints supporting detail lines and exactly
// one final verdict line; the process exits nonzero if any selected
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "streamsim/engine.hpp"
#include "streamsim/policies.hpp"
#include "streamsim/queue_math.hpp"
#include "streamsim/runner.hpp"
#include "streamsim/scenario.hpp"

using namespace streamsim;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Scenario load_checked(const std::string& path) {
  Scenario sc = load_scenario(path);
  for (const ValidationIssue& i : validate_scenario(sc)) {
    if (i.error)
      throw std::runtime_error("preset " + path + " invalid: " + i.where + ": " +
                               i.message);
  }
  return sc;
}

struct Series {
  std::vector<double> value;
  std::vector<double> mean;
  std::vector<double> hw;
};

std::map<std::string, Series> by_policy(const MatrixResult& m) {
  std::map<std::string, Series> out;
  for (const PointResult& p : m.points) {
    Series& s = out[p.policy];
    s.value.push_back(p.sweep_value.value_or(0.0));
    s.mean.push_back(p.report.stats.mean);
    s.hw.push_back(p.report.stats.half_width);
  }
  return out;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---- criterion 1: simulated M/M/n mean wait ------------------------------

Verdict criterion_wait_accuracy() {
  const auto t0 = std::chrono::steady_clock::now();
  ServiceClass cls;
  cls.index = 0;
  cls.gamma = 4.0;
  cls.k = 2000000000;  // never finishes inside the horizon
  cls.service_dist = Distribution::exponential(1.0);
  cls.job_interarrival_dist = Distribution::exponential(4.0);
  cls.delta = 0.0;
  cls.charge = 0.0;
  cls.obligation = 1.0;
  cls.penalty = 0.0;

  PolicyConfig policy;
  policy.allocation = AllocationRule::potential_loads_static;
  policy.admission = AdmissionRule::admit_all;

  // Waits in a busy queue are heavily autocorrelated, so the sample mean
  // converges far slower than iid counting suggests; 20M jobs keep the
  // statistical error comfortably inside the 2% band.
  EngineConfig cfg;
  cfg.horizon = 5000000.0;
  cfg.batches = 1;
  cfg.seed = 1;
  cfg.initial_streams = {1};

  const SimulationReport rep = run_simulation({cls}, 5, policy, cfg);
  const double jobs = static_cast<double>(rep.classes[0].jobs_completed);
  const double sim_mean = rep.classes[0].job_wait_sum / jobs;
  const double model_mean = mmn_wait(5, 4.0, 1.0);
  const double rel = std::abs(sim_mean - model_mean) / model_mean;
  const double elapsed = seconds_since(t0);
  std::printf("  served=%.0f sim_mean=%.6f model_mean=%.6f rel_err=%.4f%% "
              "elapsed=%.1fs\n",
              jobs, sim_mean, model_mean, 100.0 * rel, elapsed);
  Verdict v;
  v.pass = jobs >= 1e6 && rel <= 0.02 && elapsed < 60.0;
  v.detail = fmt("mean wait within %.2f%% over %.2gM jobs in %.1fs", 100.0 * rel,
                 jobs / 1e6, elapsed);
  return v;
}

// ---- criterion 2: delay probability vs birth-death chain -----------------

Verdict criterion_delay_probability() {
  double worst = 0.0;
  int worst_n = 0;
  double worst_f = 0.0;
  for (int n = 1; n <= 20; ++n) {
    for (const double f : {0.1, 0.5, 0.9, 0.99}) {
      const double rho = f * static_cast<double>(n);
      long double term = 1.0L, total = 1.0L, above = 0.0L;
      for (int j = 1; j <= n + 4000; ++j) {
        term *= static_cast<long double>(rho) /
                static_cast<long double>(std::min(j, n));
        total += term;
        if (j >= n) above += term;
      }
      const double oracle = static_cast<double>(above / total);
      const double got = erlang_c(n, rho);
      const double rel = std::abs(got - oracle) / oracle;
      if (rel > worst) {
        worst = rel;
        worst_n = n;
        worst_f = f;
      }
    }
  }
  std::printf("  80 grid points, worst rel err %.3g at n=%d rho/n=%.2f\n", worst,
              worst_n, worst_f);
  Verdict v;
  v.pass = worst <= 1e-8;
  v.detail = fmt("worst relative error %.3g (bound 1e-8)", worst);
  return v;
}

// ---- criterion 3: fig2 preset shape ---------------------------------------

Verdict criterion_fig2_shape() {
  const Scenario sc = load_checked(preset_files("fig2")[0]);
  const auto series = by_policy(run_matrix(sc));
  const Series& aa = series.at("admit_all");
  const Series& cs = series.at("current_state");
  const std::size_t last = aa.mean.size() - 1;

  double peak = aa.mean[0];
  for (double m : aa.mean) peak = std::max(peak, m);
  for (std::size_t i = 0; i < aa.mean.size(); ++i)
    std::printf("  delta2=%.3f admit_all=%.3f+-%.3f current_state=%.3f+-%.3f\n",
                aa.value[i], aa.mean[i], aa.hw[i], cs.mean[i], cs.hw[i]);

  const bool collapse = aa.mean[last] < 0.25 * peak;
  bool monotone = cs.mean[last] > cs.mean[0];
  for (std::size_t i = 1; i < cs.mean.size(); ++i)
    monotone = monotone && cs.mean[i] >= cs.mean[i - 1] - (cs.hw[i] + cs.hw[i - 1]);

  Verdict v;
  v.pass = collapse && monotone;
  v.detail = fmt("admit_all end/peak=%.3f/%.3f=%.1f%% (<25%% %s); "
                 "current_state monotone within CI %s",
                 aa.mean[last], peak, 100.0 * aa.mean[last] / peak,
                 collapse ? "yes" : "NO", monotone ? "yes" : "NO");
  return v;
}

// ---- criterion 4: fig3 preset gap ------------------------------------------

Verdict criterion_fig3_gap() {
  const Scenario sc = load_checked(preset_files("fig3")[0]);
  const auto series = by_policy(run_matrix(sc));
  const Series& cs = series.at("current_state");
  const Series& th = series.at("threshold");
  bool all = true;
  for (std::size_t i = 0; i < cs.mean.size(); ++i) {
    const double gap = std::abs(th.mean[i] - cs.mean[i]);
    const bool within10 = gap <= 0.10 * cs.mean[i];
    const bool ci_overlap = gap <= th.hw[i] + cs.hw[i];
    const bool ok = within10 || ci_overlap;
    all = all && ok;
    std::printf("  delta2=%.3f current_state=%.3f+-%.3f threshold=%.3f+-%.3f "
                "gap=%.1f%% %s\n",
                cs.value[i], cs.mean[i], cs.hw[i], th.mean[i], th.hw[i],
                100.0 * gap / cs.mean[i], ok ? "ok" : "MISS");
  }
  Verdict v;
  v.pass = all;
  v.detail = all ? "threshold within 10% or CI overlap at every point"
                 : "threshold misses the 10%/CI-overlap band at one or more "
                   "points (static split caps its pool revenue; see notes)";
  return v;
}

// ---- criterion 5: fig4 service-variability ordering ------------------------

Verdict criterion_fig4_variability() {
  const auto files = preset_files("fig4");  // deterministic, exponential, hyper
  std::map<std::string, Series> per_file;
  for (const auto& f : files) {
    const Scenario sc = load_checked(f);
    per_file[sc.id] = by_policy(run_matrix(sc)).at("current_state");
  }
  const Series& det = per_file.at("fig4_deterministic");
  const Series& exp_s = per_file.at("fig4_exponential");
  const Series& hyp = per_file.at("fig4_hyperexponential");

  bool det_close = true;
  for (std::size_t i = 0; i < det.mean.size(); ++i) {
    const bool overlap =
        std::abs(det.mean[i] - exp_s.mean[i]) <= det.hw[i] + exp_s.hw[i];
    det_close = det_close && overlap;
    std::printf("  delta2=%.3f exp=%.3f+-%.3f det=%.3f+-%.3f hyper=%.3f+-%.3f%s\n",
                det.value[i], exp_s.mean[i], exp_s.hw[i], det.mean[i], det.hw[i],
                hyp.mean[i], hyp.hw[i], overlap ? "" : "  det-exp GAP");
  }
  bool hyper_lower = true;
  const std::size_t n = hyp.mean.size();
  for (std::size_t i = n - 3; i < n; ++i)
    hyper_lower = hyper_lower && hyp.mean[i] < exp_s.mean[i];

  Verdict v;
  v.pass = det_close && hyper_lower;
  v.detail = fmt("deterministic within CI of exponential everywhere: %s; "
                 "hyperexponential strictly lower at top 3 loads: %s",
                 det_close ? "yes" : "NO", hyper_lower ? "yes" : "NO");
  return v;
}

// ---- criterion 6: fig5 optimization gains and admit-all collapse -----------

Verdict criterion_fig5_gains() {
  const Scenario sc = load_checked(preset_files("fig5")[0]);
  const auto series = by_policy(run_matrix(sc));
  const Series& cs = series.at("current_state");
  const Series& ocs = series.at("current_state_optimized");
  const Series& th = series.at("threshold");
  const Series& aa = series.at("admit_all");
  const std::size_t last = cs.mean.size() - 1;

  bool gains = true;
  for (std::size_t i = 0; i < cs.mean.size(); ++i) {
    const bool ok = ocs.mean[i] >= cs.mean[i] - cs.hw[i];
    gains = gains && ok;
    std::printf("  delta4=%.2f cs=%.3f+-%.3f optimized=%.3f+-%.3f th=%.3f "
                "admit_all=%.3f%s\n",
                cs.value[i], cs.mean[i], cs.hw[i], ocs.mean[i], ocs.hw[i],
                th.mean[i], aa.mean[i], ok ? "" : "  OPT BELOW CI");
  }
  const double best =
      std::max(std::max(cs.mean[last], ocs.mean[last]), th.mean[last]);
  const bool collapse = aa.mean[last] < 0.25 * best;

  Verdict v;
  v.pass = gains && collapse;
  v.detail = fmt("optimized >= current_state - CI everywhere: %s; admit_all at "
                 "top load %.4f < 25%% of best heuristic %.3f: %s",
                 gains ? "yes" : "NO", aa.mean[last], best,
                 collapse ? "yes" : "NO");
  return v;
}

// ---- criterion 7: hill climbing vs exhaustive ridge ------------------------

SystemSnapshot random_state(std::mt19937_64& rng, int total_servers) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SystemSnapshot s;
  s.total_servers = total_servers;
  for (int i = 0; i < 2; ++i) {
    ClassSnapshot c;
    c.charge = 50.0 + 150.0 * u01(rng);
    c.penalty = 50.0 + 150.0 * u01(rng);
    c.k = 20 + i * 30;
    c.gamma = 0.1 + 0.4 * u01(rng);
    c.est.b = 0.5 + 4.0 * u01(rng);
    c.est.ca2 = 0.5 + u01(rng);
    c.est.cb2 = 0.5 + u01(rng);
    c.obligation = c.est.b * (0.5 + u01(rng));
    const int streams = static_cast<int>(u01(rng) * 4.0);
    for (int t = 0; t < streams; ++t) {
      StreamSnapshot st;
      st.remaining = 1 + static_cast<int>(u01(rng) * (c.k - 1));
      st.residual_q = c.obligation * (u01(rng) * 2.0 - 0.5);
      c.streams.push_back(st);
    }
    c.est.lambda = static_cast<double>(c.streams.size()) * c.gamma;
    s.classes.push_back(std::move(c));
  }
  return s;
}

Verdict criterion_climb_oracle() {
  std::mt19937_64 rng(20260819);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int total = 20;
  int mismatches = 0;
  double worst_gap = 0.0;
  // The climb is checked as its callers invoke it: started from the
  // proportional candidate, against an arbitrary baseline split.  The
  // baseline only shifts every value by a constant, so the exhaustive
  // maximum must be reached exactly.
  for (int trial = 0; trial < 100; ++trial) {
    const SystemSnapshot s = random_state(rng, total);
    const int pivot = trial % 2;
    const DeltaMode mode =
        trial % 2 == 0 ? DeltaMode::arrival : DeltaMode::completion;
    std::vector<double> rho(2), alpha(2);
    std::vector<bool> floored(2);
    for (int j = 0; j < 2; ++j) {
      const ClassSnapshot& cj = s.classes[j];
      double lambda = cj.est.lambda;
      if (mode == DeltaMode::arrival && j == pivot) lambda += cj.gamma;
      rho[j] = lambda * cj.est.b;
      alpha[j] = class_weight(cj.charge, cj.penalty, WeightRule::ratio_r_over_c);
      floored[j] =
          cj.has_streams() || (mode == DeltaMode::arrival && j == pivot);
    }
    const Allocation start = offered_loads_allocation(rho, alpha, total, floored);
    const int lo = floored[0] ? 1 : 0;
    const int hi = total - (floored[1] ? 1 : 0);
    const int base0 =
        std::min(std::max(static_cast<int>(u01(rng) * (total + 1)), lo), hi);
    const Allocation baseline = {base0, total - base0};
    auto objective = [&](const Allocation& a) {
      return mode == DeltaMode::arrival
                 ? revenue_delta_accept(s, pivot, a, baseline)
                 : revenue_delta_realloc(s, a, baseline);
    };
    double best = -1e300;
    for (int x = lo; x <= hi; ++x)
      best = std::max(best, objective({x, total - x}));
    const ClimbResult res =
        improve_allocation(s, start, pivot, mode, baseline, floored);
    const double gap = best - res.delta;
    worst_gap = std::max(worst_gap, gap);
    if (!(std::abs(gap) <= 1e-9 * (1.0 + std::abs(best)))) {
      ++mismatches;
      if (mismatches <= 3)
        std::printf("  trial %d: climbed %.12g vs exhaustive %.12g\n", trial,
                    res.delta, best);
    }
  }
  std::printf("  100 snapshots, %d mismatches, worst shortfall %.3g\n",
              mismatches, worst_gap);
  Verdict v;
  v.pass = mismatches == 0;
  v.detail = fmt("%d/100 snapshots match the exhaustive ridge maximum",
                 100 - mismatches);
  return v;
}

// ---- criterion 8: threshold search vs exhaustive argmax --------------------

Verdict criterion_threshold_oracle() {
  struct Family {
    double gamma, b, obligation, charge;
  };
  const Family families[] = {{0.2, 10.0, 10.0, 100.0}, {0.4, 5.0, 5.0, 200.0}};
  int checks = 0, failures = 0;
  for (const Family& f : families) {
    for (int n = 2; n <= 6; ++n) {
      for (const double sigma : {2.0, 4.0}) {
        ServiceClass cls;
        cls.gamma = f.gamma;
        cls.k = 50;
        cls.service_dist = Distribution::exponential(1.0 / f.b);
        cls.job_interarrival_dist = Distribution::exponential(f.gamma);
        cls.charge = f.charge;
        cls.obligation = f.obligation;
        cls.penalty = f.charge;
        const double delta = sigma * cls.gamma / static_cast<double>(cls.k);
        ClassEstimate est;
        est.lambda = 0.0;
        est.ca2 = 1.0;
        est.b = f.b;
        est.cb2 = 1.0;
        for (const bool blocked : {true, false}) {
          ++checks;
          const int cap = default_threshold_cap(sigma);
          const std::optional<int> got =
              compute_threshold(cls, est, delta, n, 0.0, 0, blocked);
          // Exhaustive scan: last M attaining the maximum, plus the
          // unimodality property (no rise after the first genuine fall).
          int best = 1;
          double best_value =
              threshold_revenue_rate(cls, est, delta, n, 1, blocked);
          double scale = std::abs(best_value);
          std::vector<double> curve = {best_value};
          for (int M = 2; M <= cap; ++M) {
            const double r = threshold_revenue_rate(cls, est, delta, n, M, blocked);
            curve.push_back(r);
            scale = std::max(scale, std::abs(r));
            if (r >= best_value) {
              best_value = r;
              best = M;
            }
          }
          const double tol = 1e-9 * std::max(1.0, scale);
          bool fallen = false, unimodal = true;
          for (std::size_t i = 1; i < curve.size(); ++i) {
            if (curve[i] < curve[i - 1] - tol) fallen = true;
            else if (fallen && curve[i] > curve[i - 1] + tol) unimodal = false;
          }
          const bool match = got.has_value() && *got == best;
          if (!match || !unimodal) {
            ++failures;
            std::printf("  MISS gamma=%.1f n=%d sigma=%.0f blocked=%d: "
                        "search=%s exhaustive=%d unimodal=%s\n",
                        f.gamma, n, sigma, blocked ? 1 : 0,
                        got ? std::to_string(*got).c_str() : "unbounded", best,
                        unimodal ? "yes" : "no");
          }
        }
      }
    }
  }
  std::printf("  %d grid checks (20 scenarios x 2 revenue forms), %d failures\n",
              checks, failures);
  Verdict v;
  v.pass = failures == 0;
  v.detail = fmt("threshold search matches the exhaustive argmax and the curve "
                 "is unimodal on all %d checks", checks);
  return v;
}

// ---- criterion 9: byte-identical result files ------------------------------

Verdict criterion_determinism() {
  bool all = true;
  std::string detail;
  for (const char* name : {"fig2", "fig3", "fig4", "fig5"}) {
    for (const std::string& file : preset_files(name)) {
      Scenario sc = load_checked(file);
      // The two heavyweight presets are shortened identically on both runs;
      // determinism is a pipeline property, not a run-length property.
      if (std::strcmp(name, "fig4") == 0 || std::strcmp(name, "fig5") == 0) {
        sc.horizon = 20000.0;
        sc.batches = 4;
      }
      std::ostringstream a, b;
      write_results_csv(a, sc, run_matrix(sc));
      write_results_csv(b, sc, run_matrix(sc));
      const bool same = a.str() == b.str();
      all = all && same;
      std::printf("  %s: %s (%zu bytes)\n", sc.id.c_str(),
                  same ? "byte-identical" : "DIFFERS", a.str().size());
    }
  }
  Verdict v;
  v.pass = all;
  v.detail = all ? "all preset scenario outputs byte-identical across reruns"
                 : "at least one preset output differs between equal-seed runs";
  return v;
}

// ---- criterion 10: module property battery ---------------------------------

Verdict criterion_properties() {
  bool all = true;
  std::mt19937_64 rng(8675309);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  {  // penalty probability: bounds and monotonicity in x, lambda, n.
    bool ok = true;
    for (int trial = 0; trial < 300; ++trial) {
      QueueParams p;
      p.n = 1 + static_cast<int>(u01(rng) * 30.0);
      p.b = 0.2 + 5.0 * u01(rng);
      p.lambda = u01(rng) * static_cast<double>(p.n) / p.b * 1.2;
      p.ca2 = 0.4 + 2.0 * u01(rng);
      p.cb2 = 0.4 + 2.0 * u01(rng);
      const int k = 1 + static_cast<int>(u01(rng) * 80.0);
      const double x1 = (u01(rng) * 2.0 - 0.3) * p.b;
      const double x2 = x1 + u01(rng) * p.b;
      const double g1 = penalty_probability(x1, p, k);
      const double g2 = penalty_probability(x2, p, k);
      ok = ok && g1 >= 0.0 && g1 <= 1.0 && g2 >= 0.0 && g2 <= 1.0 && g2 <= g1;

      QueueParams busier = p;
      busier.lambda = p.lambda * (1.0 + u01(rng));
      ok = ok && penalty_probability(x2, busier, k) >= g2;

      QueueParams wider = p;
      wider.n = p.n + 1 + static_cast<int>(u01(rng) * 10.0);
      ok = ok && penalty_probability(x2, wider, k) <= g2;
    }
    std::printf("  penalty probability bounds and monotonicity: %s\n",
                ok ? "ok" : "FAIL");
    all = all && ok;
  }

  {  // allocation: exact sum, nonnegativity, floors.
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
      const int m = 1 + static_cast<int>(u01(rng) * 6.0);
      const int total = static_cast<int>(u01(rng) * 41.0);
      std::vector<double> rho(m), alpha(m);
      std::vector<bool> floored(m);
      int floors = 0;
      for (int i = 0; i < m; ++i) {
        rho[i] = u01(rng) < 0.2 ? 0.0 : u01(rng) * 5.0;
        alpha[i] = 0.5 + 2.5 * u01(rng);
        floored[i] = u01(rng) < 0.4;
        if (floored[i]) ++floors;
      }
      const Allocation a = offered_loads_allocation(rho, alpha, total, floored);
      int sum = 0;
      for (int i = 0; i < m; ++i) {
        ok = ok && a[i] >= 0;
        if (total >= floors && floored[i]) ok = ok && a[i] >= 1;
        sum += a[i];
      }
      ok = ok && sum == total;
    }
    std::printf("  allocation sum and floor invariants: %s\n", ok ? "ok" : "FAIL");
    all = all && ok;
  }

  {  // ledger conservation on a live run.
    std::vector<ServiceClass> classes(2);
    classes[0].index = 0;
    classes[0].gamma = 0.2;
    classes[0].k = 50;
    classes[0].service_dist = Distribution::exponential(0.1);
    classes[0].job_interarrival_dist = Distribution::exponential(0.2);
    classes[0].delta = 0.02;
    classes[0].charge = 100.0;
    classes[0].obligation = 10.0;
    classes[0].penalty = 100.0;
    classes[1] = classes[0];
    classes[1].index = 1;
    classes[1].gamma = 0.4;
    classes[1].service_dist = Distribution::exponential(0.2);
    classes[1].job_interarrival_dist = Distribution::exponential(0.4);
    classes[1].charge = 200.0;
    classes[1].obligation = 5.0;
    classes[1].penalty = 200.0;
    PolicyConfig policy;
    policy.admission = AdmissionRule::current_state;
    EngineConfig cfg;
    cfg.horizon = 10000.0;
    cfg.batches = 5;
    cfg.seed = 12;
    const SimulationReport rep = run_simulation(classes, 20, policy, cfg);
    bool ok = true;
    double net_total = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const ClassReport& r = rep.classes[i];
      ok = ok && r.accepted == r.completed + r.active_at_horizon;
      ok = ok && r.accepted + r.rejected > 0;
    }
    for (const StreamOutcome& o : rep.ledger.outcomes) {
      const ServiceClass& c = classes[o.class_index];
      ok = ok && (o.net == c.charge || o.net == c.charge - c.penalty);
      net_total += o.net;
    }
    const double rate = revenue_rate(rep.ledger, cfg.horizon);
    ok = ok && std::abs(rate * cfg.horizon - net_total) <=
                   1e-9 * std::max(1.0, std::abs(net_total));
    double sliced = 0.0;
    for (double r : rep.batch_rates) sliced += r * rep.stats.batch_length;
    ok = ok && std::abs(sliced - net_total) <=
                   1e-9 * std::max(1.0, std::abs(net_total));
    std::printf("  ledger conservation (streams, nets, batch slices): %s\n",
                ok ? "ok" : "FAIL");
    all = all && ok;
  }

  {  // loss pmf normalization.
    bool ok = true;
    for (const double sigma : {0.0, 0.5, 2.0, 10.0, 80.0, 600.0}) {
      for (const int M : {0, 1, 7, 40, 300}) {
        const std::vector<double> p = erlang_loss_pmf(sigma, M);
        double sum = 0.0;
        for (double x : p) {
          ok = ok && x >= 0.0 && std::isfinite(x);
          sum += x;
        }
        ok = ok && std::abs(sum - 1.0) <= 1e-12;
      }
    }
    std::printf("  loss pmf normalization: %s\n", ok ? "ok" : "FAIL");
    all = all && ok;
  }

  Verdict v;
  v.pass = all;
  v.detail = all ? "all module property suites hold"
                 : "one or more property suites failed";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* label;
    Verdict (*fn)();
  };
  const Entry entries[] = {
      {1, "simulated mean wait vs analytic M/M/n", criterion_wait_accuracy},
      {2, "delay probability vs birth-death oracle", criterion_delay_probability},
      {3, "fig2 preset: admit-all collapse, current-state growth", criterion_fig2_shape},
      {4, "fig3 preset: threshold tracks current-state", criterion_fig3_gap},
      {5, "fig4 preset: service-variability ordering", criterion_fig4_variability},
      {6, "fig5 preset: optimization gains, admit-all collapse", criterion_fig5_gains},
      {7, "hill climbing vs exhaustive enumeration", criterion_climb_oracle},
      {8, "threshold search vs exhaustive argmax", criterion_threshold_oracle},
      {9, "equal seeds give byte-identical result files", criterion_determinism},
      {10, "module property battery", criterion_properties},
  };

  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > 10) {
      std::fprintf(stderr, "usage: %s [1-10]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  for (const Entry& e : entries) {
    if (selected != 0 && e.id != selected) continue;
    std::printf("criterion %d: %s\n", e.id, e.label);
    Verdict v;
    try {
      v = e.fn();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("exception: ") + ex.what();
    }
    std::printf("criterion %d: %s - %s\n", e.id, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
