#include "streamsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <deque>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace streamsim {

MomentEstimate update_moment_estimate(const MomentEstimate& prev,
                                      const std::vector<double>& window,
                                      double alpha, int min_samples) {
  if (static_cast<int>(window.size()) < std::max(min_samples, 2)) return prev;
  const double n = static_cast<double>(window.size());
  double mean = 0.0;
  for (double x : window) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : window) ss += (x - mean) * (x - mean);
  const double variance = ss / (n - 1.0);
  const double scv = mean > 0.0 ? variance / (mean * mean) : 0.0;
  if (!prev.valid) return {mean, scv, true};
  return {alpha * mean + (1.0 - alpha) * prev.mean,
          alpha * scv + (1.0 - alpha) * prev.scv, true};
}

ClassEstimate estimate_demand(const WindowSamples& window, EstimationMode mode,
                              const ClassEstimate& oracle,
                              const ClassEstimate* previous, double alpha,
                              int min_samples) {
  if (mode == EstimationMode::oracle) return oracle;
  ClassEstimate out = previous ? *previous : oracle;
  if (static_cast<int>(window.interarrivals.size()) >= std::max(min_samples, 2)) {
    MomentEstimate prev_side;
    if (previous && previous->lambda > 0.0)
      prev_side = {1.0 / previous->lambda, previous->ca2, true};
    const MomentEstimate upd =
        update_moment_estimate(prev_side, window.interarrivals, alpha, min_samples);
    out.lambda = upd.mean > 0.0 ? 1.0 / upd.mean : 0.0;
    out.ca2 = upd.scv;
  }
  if (static_cast<int>(window.services.size()) >= std::max(min_samples, 2)) {
    MomentEstimate prev_side;
    if (previous) prev_side = {previous->b, previous->cb2, true};
    const MomentEstimate upd =
        update_moment_estimate(prev_side, window.services, alpha, min_samples);
    out.b = upd.mean;
    out.cb2 = upd.scv;
  }
  return out;
}

namespace {

enum class EventKind { service_completion = 0, stream_submission = 1, job_arrival = 2 };

struct Event {
  double time = 0.0;
  int priority = 0;
  std::int64_t seq = 0;
  EventKind kind = EventKind::stream_submission;
  int cls = 0;
  std::int64_t a = 0;  // server id or stream id
  std::int64_t b = 0;  // busy token
};

// Completions free servers before new work at the same instant is assessed.
struct EventAfter {
  bool operator()(const Event& x, const Event& y) const {
    if (x.time != y.time) return x.time > y.time;
    if (x.priority != y.priority) return x.priority > y.priority;
    return x.seq > y.seq;
  }
};

struct Job {
  std::int64_t stream = 0;
  int cls = 0;
  std::int64_t id = 0;
  double arrival = 0.0;
  double service = 0.0;
  double first_start = -1.0;
};

struct ServerState {
  int assigned = 0;
  bool busy = false;
  std::int64_t token = 0;  // bumps on every (re)assignment; stale completions ignored
  int pending = -1;        // class to join at next completion, -1 = none
  Job job;
};

struct StreamRuntime {
  StreamRecord rec;
  RngStream arrivals{0, 0};
  RngStream services{0, 0};
};

struct ClassRuntime {
  ServiceClass params;
  Distribution submission_gap = Distribution::deterministic(0.0);
  RngStream submissions{0, 0};
  std::deque<Job> queue;
  std::vector<std::int64_t> active;  // stream ids, admission order
  std::int64_t next_serial = 0;      // RNG substream serial, advances on every submission
  // job/wait statistics over completed jobs
  std::int64_t jobs_arrived = 0;
  std::int64_t jobs_completed = 0;
  std::int64_t jobs_delayed = 0;
  double job_wait_sum = 0.0;
  // measured-mode observation windows and smoothed trackers
  std::vector<double> interarrival_window, service_window, submission_window;
  double last_arrival = -1.0, last_submission = -1.0;
  MomentEstimate arrival_est, service_est, submission_est;
};

std::uint64_t substream_id(int purpose, int cls, std::int64_t serial) {
  return (static_cast<std::uint64_t>(purpose) << 56) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cls)) << 40) |
         (static_cast<std::uint64_t>(serial) & 0xFFFFFFFFFFull);
}

class Simulation {
 public:
  Simulation(const std::vector<ServiceClass>& classes, int total_servers,
             const PolicyConfig& policy, const EngineConfig& cfg,
             std::ostream* trace)
      : policy_(policy), cfg_(cfg), trace_(trace), total_(total_servers) {
    if (classes.empty()) throw std::invalid_argument("run_simulation: no classes");
    if (total_servers < 1)
      throw std::invalid_argument("run_simulation: need at least one server");
    if (!(cfg.horizon > 0.0))
      throw std::invalid_argument("run_simulation: horizon must be > 0");
    if (cfg.batches < 1)
      throw std::invalid_argument("run_simulation: batches must be >= 1");
    if (!cfg.initial_streams.empty() && cfg.initial_streams.size() != classes.size())
      throw std::invalid_argument("run_simulation: initial_streams size mismatch");
    if (policy.admission == AdmissionRule::threshold &&
        policy.allocation != AllocationRule::potential_loads_static)
      throw std::invalid_argument(
          "run_simulation: threshold admission requires the static allocation");

    classes_.resize(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      ClassRuntime& c = classes_[i];
      c.params = classes[i];
      c.submissions = RngStream(cfg.seed, substream_id(1, static_cast<int>(i), 0));
      if (c.params.delta > 0.0)
        c.submission_gap = Distribution::exponential(c.params.delta);
    }
    servers_.assign(static_cast<std::size_t>(total_servers), ServerState{});
    ledger_.per_class.resize(classes.size());
  }

  SimulationReport run() {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      const int preload = cfg_.initial_streams.empty()
                              ? 0
                              : cfg_.initial_streams[i];
      for (int s = 0; s < preload; ++s) admit_stream(static_cast<int>(i));
    }
    install_initial_allocation();
    for (std::size_t i = 0; i < classes_.size(); ++i)
      if (classes_[i].params.delta > 0.0)
        schedule_submission(static_cast<int>(i));

    while (!heap_.empty()) {
      const Event e = heap_.top();
      if (e.time > cfg_.horizon) break;
      heap_.pop();
      now_ = e.time;
      ++events_;
      switch (e.kind) {
        case EventKind::service_completion:
          on_completion(static_cast<int>(e.a), e.b);
          break;
        case EventKind::stream_submission:
          on_submission(e.cls);
          break;
        case EventKind::job_arrival:
          on_job_arrival(e.a);
          break;
      }
      check_work_conservation();
    }
    return finalize();
  }

 private:
  // ---- plumbing -----------------------------------------------------------

  void schedule(double time, EventKind kind, int cls, std::int64_t a,
                std::int64_t b) {
    Event e;
    e.time = time;
    e.priority = static_cast<int>(kind);
    e.seq = seq_++;
    e.kind = kind;
    e.cls = cls;
    e.a = a;
    e.b = b;
    heap_.push(e);
  }

  void schedule_submission(int ci) {
    ClassRuntime& c = classes_[ci];
    const double gap = c.submissions.sample(c.submission_gap);
    schedule(now_ + gap, EventKind::stream_submission, ci, 0, 0);
  }

  void tracef(const char* fmt, ...) {
    if (!trace_) return;
    char buf[320];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    *trace_ << buf << '\n';
  }

  std::string alloc_text(const Allocation& a) const {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) out += '|';
      out += std::to_string(a[i]);
    }
    return out;
  }

  // ---- estimates ----------------------------------------------------------

  ClassEstimate oracle_estimate(const ClassRuntime& c) const {
    ClassEstimate e;
    e.lambda = static_cast<double>(c.active.size()) * c.params.gamma;
    e.ca2 = c.params.job_interarrival_dist.scv();
    e.b = c.params.service_dist.mean();
    e.cb2 = c.params.service_dist.scv();
    return e;
  }

  ClassEstimate current_estimate(const ClassRuntime& c) const {
    ClassEstimate e = oracle_estimate(c);
    if (cfg_.estimation == EstimationMode::oracle) return e;
    if (c.arrival_est.valid) {
      e.lambda = c.arrival_est.mean > 0.0 ? 1.0 / c.arrival_est.mean : 0.0;
      e.ca2 = c.arrival_est.scv;
    }
    if (c.service_est.valid) {
      e.b = c.service_est.mean;
      e.cb2 = c.service_est.scv;
    }
    return e;
  }

  double current_delta(const ClassRuntime& c) const {
    if (cfg_.estimation == EstimationMode::measured && c.submission_est.valid &&
        c.submission_est.mean > 0.0)
      return 1.0 / c.submission_est.mean;
    return c.params.delta;
  }

  // Ends the observation window at a policy invocation.
  void close_windows() {
    if (cfg_.estimation != EstimationMode::measured) return;
    for (ClassRuntime& c : classes_) {
      c.arrival_est = update_moment_estimate(c.arrival_est, c.interarrival_window,
                                             cfg_.smoothing, cfg_.min_window_samples);
      c.service_est = update_moment_estimate(c.service_est, c.service_window,
                                             cfg_.smoothing, cfg_.min_window_samples);
      c.submission_est =
          update_moment_estimate(c.submission_est, c.submission_window,
                                 cfg_.smoothing, cfg_.min_window_samples);
      c.interarrival_window.clear();
      c.service_window.clear();
      c.submission_window.clear();
    }
  }

  SystemSnapshot snapshot() const {
    SystemSnapshot snap;
    snap.total_servers = total_;
    snap.classes.resize(classes_.size());
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      const ClassRuntime& c = classes_[i];
      ClassSnapshot& cs = snap.classes[i];
      cs.charge = c.params.charge;
      cs.penalty = c.params.penalty;
      cs.obligation = c.params.obligation;
      cs.k = c.params.k;
      cs.gamma = c.params.gamma;
      cs.est = current_estimate(c);
      cs.streams.reserve(c.active.size());
      for (std::int64_t sid : c.active) {
        const StreamRecord& rec = streams_.at(sid).rec;
        StreamSnapshot st;
        st.remaining = rec.k - rec.jobs_completed;
        st.residual_q = residual_obligation(c.params.obligation, rec.k,
                                            rec.jobs_completed, rec.mean_wait());
        cs.streams.push_back(st);
      }
    }
    return snap;
  }

  // ---- allocation mechanics ----------------------------------------------

  void install_initial_allocation() {
    Allocation target;
    if (policy_.allocation == AllocationRule::potential_loads_static) {
      std::vector<ClassEstimate> est;
      std::vector<double> deltas;
      for (const ClassRuntime& c : classes_) {
        est.push_back(current_estimate(c));
        deltas.push_back(current_delta(c));
      }
      if (policy_.admission == AdmissionRule::threshold) {
        std::vector<ServiceClass> params;
        for (const ClassRuntime& c : classes_) params.push_back(c.params);
        table_ = build_threshold_table(params, est, deltas, total_, policy_);
        built_est_ = est;
        built_deltas_ = deltas;
        target = table_.alloc;
      } else {
        std::vector<ServiceClass> params;
        for (const ClassRuntime& c : classes_) params.push_back(c.params);
        target = potential_loads_allocation(params, est, total_, policy_.weight);
      }
    } else {
      target = offered_allocation(-1);
    }
    int sid = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i)
      for (int s = 0; s < target[i]; ++s) servers_[sid++].assigned = static_cast<int>(i);
    committed_ = target;
    tracef("t=%.17g realloc alloc=%s", now_, alloc_text(committed_).c_str());
    for (std::size_t i = 0; i < classes_.size(); ++i) try_dispatch(static_cast<int>(i));
  }

  // Offered-loads allocation for the present state; `incoming` >= 0 folds one
  // more stream of that class into its load and floor.
  Allocation offered_allocation(int incoming) const {
    const std::size_t m = classes_.size();
    std::vector<double> rho(m), alpha(m);
    std::vector<bool> floored(m);
    for (std::size_t j = 0; j < m; ++j) {
      const ClassRuntime& c = classes_[j];
      const ClassEstimate est = current_estimate(c);
      double lambda = est.lambda;
      if (static_cast<int>(j) == incoming) lambda += c.params.gamma;
      rho[j] = lambda * est.b;
      alpha[j] = class_weight(c.params.charge, c.params.penalty, policy_.weight);
      floored[j] = !c.active.empty() || static_cast<int>(j) == incoming;
    }
    return offered_loads_allocation(rho, alpha, total_, floored);
  }

  void apply_allocation(const Allocation& target) {
    if (target == committed_) return;
    committed_ = target;
    tracef("t=%.17g realloc alloc=%s", now_, alloc_text(target).c_str());

    // Later decisions supersede in-flight switches; recompute from the
    // actual seat of every server.
    for (ServerState& s : servers_) s.pending = -1;
    std::vector<int> counts(classes_.size(), 0);
    for (const ServerState& s : servers_) ++counts[s.assigned];

    std::vector<int> surplus;  // server ids, idle first then busy, id ascending
    std::vector<int> deficit_of(classes_.size(), 0);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (counts[c] > target[c]) {
        int need = counts[c] - target[c];
        for (int pass = 0; pass < 2 && need > 0; ++pass) {
          const bool want_busy = pass == 1;
          for (std::size_t sid = 0; sid < servers_.size() && need > 0; ++sid) {
            ServerState& s = servers_[sid];
            if (s.assigned != static_cast<int>(c) || s.busy != want_busy) continue;
            if (std::find(surplus.begin(), surplus.end(), static_cast<int>(sid)) !=
                surplus.end())
              continue;
            surplus.push_back(static_cast<int>(sid));
            --need;
          }
        }
      } else {
        deficit_of[c] = target[c] - counts[c];
      }
    }
    // Idle donors move first so recipients gain capacity immediately.
    std::stable_sort(surplus.begin(), surplus.end(), [&](int a, int b) {
      const bool ba = servers_[a].busy, bb = servers_[b].busy;
      if (ba != bb) return !ba;
      return a < b;
    });

    std::vector<Job> preempted;
    std::size_t cursor = 0;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      while (deficit_of[c] > 0 && cursor < surplus.size()) {
        ServerState& s = servers_[surplus[cursor++]];
        --deficit_of[c];
        if (!s.busy) {
          s.assigned = static_cast<int>(c);
          ++s.token;
          tracef("t=%.17g realloc_effect server=%d class=%d", now_,
                 surplus[cursor - 1], static_cast<int>(c));
        } else if (cfg_.preemptive) {
          // The job restarts from scratch later; it keeps its sampled size
          // and goes back to the head of its queue.
          tracef("t=%.17g preempt job=%lld server=%d class=%d", now_,
                 static_cast<long long>(s.job.id), surplus[cursor - 1], s.job.cls);
          preempted.push_back(s.job);
          s.busy = false;
          ++s.token;  // invalidates the scheduled completion
          s.assigned = static_cast<int>(c);
          tracef("t=%.17g realloc_effect server=%d class=%d", now_,
                 surplus[cursor - 1], static_cast<int>(c));
        } else {
          s.pending = static_cast<int>(c);
          tracef("t=%.17g realloc_pending server=%d class=%d", now_,
                 surplus[cursor - 1], static_cast<int>(c));
        }
      }
    }

    if (!preempted.empty()) {
      // FCFS order within the class is preserved: preempted jobs arrived
      // before anything still queued.
      std::sort(preempted.begin(), preempted.end(), [](const Job& x, const Job& y) {
        if (x.arrival != y.arrival) return x.arrival > y.arrival;
        return x.id > y.id;
      });
      for (const Job& j : preempted)
        classes_[j.cls].queue.push_front(j);
    }
    for (std::size_t i = 0; i < classes_.size(); ++i) try_dispatch(static_cast<int>(i));
  }

  void try_dispatch(int ci) {
    ClassRuntime& c = classes_[ci];
    while (!c.queue.empty()) {
      int sid = -1;
      for (std::size_t s = 0; s < servers_.size(); ++s)
        if (!servers_[s].busy && servers_[s].assigned == ci) {
          sid = static_cast<int>(s);
          break;
        }
      if (sid < 0) return;
      ServerState& s = servers_[sid];
      Job job = c.queue.front();
      c.queue.pop_front();
      if (job.first_start < 0.0) {
        job.first_start = now_;
        if (now_ > job.arrival) ++c.jobs_delayed;
      }
      s.busy = true;
      ++s.token;
      s.job = job;
      tracef("t=%.17g service_start class=%d stream=%lld job=%lld server=%d wait=%.17g",
             now_, ci, static_cast<long long>(job.stream),
             static_cast<long long>(job.id), sid, job.first_start - job.arrival);
      schedule(now_ + job.service, EventKind::service_completion, ci, sid, s.token);
    }
  }

  void check_work_conservation() {
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (classes_[c].queue.empty()) continue;
      for (const ServerState& s : servers_)
        if (!s.busy && s.assigned == static_cast<int>(c)) {
          ++violations_;
          return;
        }
    }
  }

  // ---- stream lifecycle ---------------------------------------------------

  void admit_stream(int ci) {
    ClassRuntime& c = classes_[ci];
    const std::int64_t serial = c.next_serial++;
    const std::int64_t sid = stream_seq_++;
    StreamRuntime rt;
    rt.rec.id = sid;
    rt.rec.class_index = ci;
    rt.rec.k = c.params.k;
    rt.rec.gamma = c.params.gamma;
    rt.rec.admitted_at = now_;
    rt.arrivals = RngStream(cfg_.seed, substream_id(2, ci, serial));
    rt.services = RngStream(cfg_.seed, substream_id(3, ci, serial));
    const double first_gap = rt.arrivals.sample(c.params.job_interarrival_dist);
    streams_.emplace(sid, std::move(rt));
    c.active.push_back(sid);
    ledger_.admissions.emplace_back(now_, ci);
    ++ledger_.per_class[ci].accepted;
    tracef("t=%.17g admit class=%d stream=%lld alloc=%s", now_, ci,
           static_cast<long long>(sid), alloc_text(committed_).c_str());
    schedule(now_ + first_gap, EventKind::job_arrival, ci, sid, 0);
  }

  void on_submission(int ci) {
    ClassRuntime& c = classes_[ci];
    if (cfg_.estimation == EstimationMode::measured) {
      if (c.last_submission >= 0.0)
        c.submission_window.push_back(now_ - c.last_submission);
      c.last_submission = now_;
    }
    // The RNG serial advances for accepted and rejected streams alike, so
    // later streams draw identical variates whatever this decision is.
    schedule_submission(ci);
    tracef("t=%.17g submission class=%d", now_, ci);
    close_windows();

    switch (policy_.admission) {
      case AdmissionRule::admit_all: {
        if (policy_.allocation == AllocationRule::offered_loads) {
          const Allocation target = offered_allocation(ci);
          admit_stream(ci);
          apply_allocation(target);
        } else {
          admit_stream(ci);
        }
        break;
      }
      case AdmissionRule::current_state:
      case AdmissionRule::current_state_optimized: {
        const SystemSnapshot snap = snapshot();
        const AdmissionDecision dec = current_state_admission(
            snap, ci, committed_, policy_.weight,
            policy_.admission == AdmissionRule::current_state_optimized);
        if (dec.accept) {
          admit_stream(ci);
          apply_allocation(dec.alloc);
        } else {
          reject_stream(ci);
        }
        break;
      }
      case AdmissionRule::threshold: {
        maybe_rebuild_thresholds();
        if (threshold_admission(static_cast<std::int64_t>(c.active.size()),
                                table_.entries[ci]))
          admit_stream(ci);
        else
          reject_stream(ci);
        break;
      }
    }
  }

  void reject_stream(int ci) {
    ClassRuntime& c = classes_[ci];
    ++c.next_serial;  // the unused serial keeps later substreams aligned
    ledger_.rejections.emplace_back(now_, ci);
    ++ledger_.per_class[ci].rejected;
    tracef("t=%.17g reject class=%d", now_, ci);
  }

  void maybe_rebuild_thresholds() {
    if (cfg_.estimation != EstimationMode::measured) return;
    auto changed = [&](double x, double x0) {
      return std::abs(x - x0) >
             policy_.drift_threshold * std::max(std::abs(x0), 0.05);
    };
    bool drifted = false;
    std::vector<ClassEstimate> est(classes_.size());
    std::vector<double> deltas(classes_.size());
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      est[i] = current_estimate(classes_[i]);
      deltas[i] = current_delta(classes_[i]);
      if (changed(deltas[i], built_deltas_[i]) || changed(est[i].b, built_est_[i].b) ||
          changed(est[i].cb2, built_est_[i].cb2) ||
          changed(est[i].ca2, built_est_[i].ca2))
        drifted = true;
    }
    if (!drifted) return;
    std::vector<ServiceClass> params;
    for (const ClassRuntime& c : classes_) params.push_back(c.params);
    table_ = build_threshold_table(params, est, deltas, total_, policy_);
    built_est_ = est;
    built_deltas_ = deltas;
    apply_allocation(table_.alloc);
  }

  void on_job_arrival(std::int64_t sid) {
    StreamRuntime& rt = streams_.at(sid);
    const int ci = rt.rec.class_index;
    ClassRuntime& c = classes_[ci];
    if (cfg_.estimation == EstimationMode::measured) {
      if (c.last_arrival >= 0.0)
        c.interarrival_window.push_back(now_ - c.last_arrival);
      c.last_arrival = now_;
    }
    Job job;
    job.stream = sid;
    job.cls = ci;
    job.id = job_seq_++;
    job.arrival = now_;
    job.service = rt.services.sample(c.params.service_dist);
    ++rt.rec.jobs_arrived;
    ++c.jobs_arrived;
    if (rt.rec.jobs_arrived < rt.rec.k) {
      const double gap = rt.arrivals.sample(c.params.job_interarrival_dist);
      schedule(now_ + gap, EventKind::job_arrival, ci, sid, 0);
    }
    tracef("t=%.17g job_arrival class=%d stream=%lld job=%lld", now_, ci,
           static_cast<long long>(sid), static_cast<long long>(job.id));
    c.queue.push_back(job);
    try_dispatch(ci);
  }

  void on_completion(int sid_server, std::int64_t token) {
    ServerState& s = servers_[sid_server];
    if (!s.busy || s.token != token) return;  // superseded by a reassignment
    const Job job = s.job;
    s.busy = false;
    const double wait = job.first_start - job.arrival;
    ClassRuntime& c = classes_[job.cls];
    ++c.jobs_completed;
    c.job_wait_sum += wait;
    if (cfg_.estimation == EstimationMode::measured)
      c.service_window.push_back(job.service);
    tracef("t=%.17g service_completion class=%d stream=%lld job=%lld server=%d "
           "wait=%.17g service=%.17g",
           now_, job.cls, static_cast<long long>(job.stream),
           static_cast<long long>(job.id), sid_server, wait, job.service);

    if (s.pending >= 0) {
      s.assigned = s.pending;
      s.pending = -1;
      ++s.token;
      tracef("t=%.17g realloc_effect server=%d class=%d", now_, sid_server,
             s.assigned);
    }

    auto it = streams_.find(job.stream);
    StreamRuntime& rt = it->second;
    rt.rec.wait_sum += wait;
    ++rt.rec.jobs_completed;
    if (rt.rec.jobs_completed == rt.rec.k) {
      const StreamRecord rec = rt.rec;
      c.active.erase(std::find(c.active.begin(), c.active.end(), job.stream));
      streams_.erase(it);
      const double net = assess_stream(rec, c.params);
      const bool penalized =
          rec.wait_sum / static_cast<double>(rec.k) > c.params.obligation;
      ledger_.outcomes.push_back({now_, job.cls, net, penalized});
      ++ledger_.per_class[job.cls].completed;
      if (penalized) ++ledger_.per_class[job.cls].penalized;
      tracef("t=%.17g stream_completion class=%d stream=%lld mean_wait=%.17g "
             "net=%.17g penalized=%d",
             now_, job.cls, static_cast<long long>(rec.id),
             rec.wait_sum / static_cast<double>(rec.k), net, penalized ? 1 : 0);
      on_stream_completed(job.cls);
    }
    try_dispatch(s.assigned);
  }

  void on_stream_completed(int ci) {
    close_windows();
    switch (policy_.admission) {
      case AdmissionRule::admit_all:
        if (policy_.allocation == AllocationRule::offered_loads)
          apply_allocation(offered_allocation(-1));
        break;
      case AdmissionRule::current_state: {
        const SystemSnapshot snap = snapshot();
        const Allocation target = offered_allocation(-1);
        if (revenue_delta_realloc(snap, target, committed_) > 0.0)
          apply_allocation(target);
        break;
      }
      case AdmissionRule::current_state_optimized: {
        const SystemSnapshot snap = snapshot();
        std::vector<bool> floored(classes_.size());
        for (std::size_t j = 0; j < classes_.size(); ++j)
          floored[j] = !classes_[j].active.empty();
        const ClimbResult climbed =
            improve_allocation(snap, offered_allocation(-1), ci,
                               DeltaMode::completion, committed_, floored);
        if (climbed.delta > 0.0) apply_allocation(climbed.alloc);
        break;
      }
      case AdmissionRule::threshold:
        maybe_rebuild_thresholds();
        break;
    }
  }

  // ---- wrap-up ------------------------------------------------------------

  SimulationReport finalize() {
    SimulationReport rep;
    rep.ledger = ledger_;
    rep.classes.resize(classes_.size());
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      const ClassRuntime& c = classes_[i];
      ClassReport& r = rep.classes[i];
      r.accepted = ledger_.per_class[i].accepted;
      r.rejected = ledger_.per_class[i].rejected;
      r.completed = ledger_.per_class[i].completed;
      r.penalized = ledger_.per_class[i].penalized;
      r.active_at_horizon = static_cast<std::int64_t>(c.active.size());
      r.jobs_arrived = c.jobs_arrived;
      r.jobs_completed = c.jobs_completed;
      r.jobs_delayed = c.jobs_delayed;
      r.job_wait_sum = c.job_wait_sum;
    }
    rep.batch_rates = batch_revenue_rates(ledger_, cfg_.horizon, cfg_.batches);
    if (cfg_.batches >= 2) {
      rep.stats = batch_confidence(rep.batch_rates);
    } else {
      rep.stats.batches = 1;
      rep.stats.mean = rep.batch_rates[0];
      rep.stats.rates = rep.batch_rates;
    }
    rep.stats.batch_length = cfg_.horizon / static_cast<double>(cfg_.batches);
    rep.final_alloc = committed_;
    rep.events_processed = events_;
    rep.final_time = now_;
    if (violations_ > 0)
      throw std::logic_error("run_simulation: work conservation violated");
    return rep;
  }

  const PolicyConfig policy_;
  const EngineConfig cfg_;
  std::ostream* trace_;
  int total_;
  double now_ = 0.0;
  std::int64_t seq_ = 0, job_seq_ = 0, stream_seq_ = 0, events_ = 0,
               violations_ = 0;
  std::vector<ClassRuntime> classes_;
  std::vector<ServerState> servers_;
  std::unordered_map<std::int64_t, StreamRuntime> streams_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> heap_;
  Allocation committed_;
  RevenueLedger ledger_;
  ThresholdTable table_;
  std::vector<double> built_deltas_;
  std::vector<ClassEstimate> built_est_;
};

}  // namespace

SimulationReport run_simulation(const std::vector<ServiceClass>& classes,
                                int total_servers, const PolicyConfig& policy,
                                const EngineConfig& cfg, std::ostream* trace) {
  Simulation sim(classes, total_servers, policy, cfg, trace);
  return sim.run();
}

}  // namespace streamsim
