#include "streamsim/accounting.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace streamsim {

double assess_stream(const StreamRecord& record, const ServiceClass& cls) {
  if (record.jobs_completed != record.k)
    throw std::domain_error("assess_stream: stream is not finished");
  const double observed_mean = record.wait_sum / static_cast<double>(record.k);
  return observed_mean > cls.obligation ? cls.charge - cls.penalty : cls.charge;
}

double revenue_rate(const RevenueLedger& ledger, double interval) {
  if (!(interval > 0.0))
    throw std::domain_error("revenue_rate: interval must be > 0");
  double total = 0.0;
  for (const StreamOutcome& o : ledger.outcomes)
    if (o.time <= interval) total += o.net;
  return total / interval;
}

std::vector<double> batch_revenue_rates(const RevenueLedger& ledger,
                                        double horizon, int batches) {
  if (!(horizon > 0.0))
    throw std::domain_error("batch_revenue_rates: horizon must be > 0");
  if (batches < 1)
    throw std::domain_error("batch_revenue_rates: batches must be >= 1");
  const double length = horizon / static_cast<double>(batches);
  std::vector<double> totals(static_cast<std::size_t>(batches), 0.0);
  for (const StreamOutcome& o : ledger.outcomes) {
    int idx = static_cast<int>(o.time / length);
    if (idx >= batches) idx = batches - 1;
    if (idx < 0) idx = 0;
    totals[static_cast<std::size_t>(idx)] += o.net;
  }
  for (double& t : totals) t /= length;
  return totals;
}

BatchStats batch_confidence(const std::vector<double>& rates) {
  const int b = static_cast<int>(rates.size());
  if (b < 2) throw std::invalid_argument("batch_confidence: need at least 2 batches");
  BatchStats stats;
  stats.batches = b;
  stats.rates = rates;
  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);
  const double variance = ss / static_cast<double>(b - 1);
  const boost::math::students_t dist(static_cast<double>(b - 1));
  const double t = boost::math::quantile(dist, 0.975);
  stats.mean = mean;
  stats.half_width = t * std::sqrt(variance / static_cast<double>(b));
  return stats;
}

std::string format_compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_csv_header(std::ostream& os) {
  os << "scenario,policy,param,batch,revenue_rate,accepted,rejected,penalized,"
        "ci_halfwidth\n";
}

void write_csv_row(std::ostream& os, const CsvRow& row) {
  os << row.scenario << ',' << row.policy << ',' << row.param << ','
     << row.batch << ',' << format_compact(row.revenue_rate) << ','
     << row.accepted << ',' << row.rejected << ',' << row.penalized << ',';
  if (row.ci_halfwidth.has_value()) os << format_compact(*row.ci_halfwidth);
  os << '\n';
}

}  // namespace streamsim
