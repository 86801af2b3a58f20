#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "streamsim/domain.hpp"

namespace streamsim {

struct StreamOutcome {
  double time = 0.0;  // completion instant; earnings attach here
  int class_index = 0;
  double net = 0.0;
  bool penalized = false;
};

struct ClassCounters {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t completed = 0;
  std::int64_t penalized = 0;
};

struct RevenueLedger {
  std::vector<ClassCounters> per_class;
  std::vector<StreamOutcome> outcomes;                   // completion order
  std::vector<std::pair<double, int>> admissions;        // (time, class)
  std::vector<std::pair<double, int>> rejections;        // (time, class)
};

// Net earning of a finished stream: the charge, minus the penalty when the
// stream's observed mean wait exceeded its obligation. Exactly meeting the
// obligation is compliant.
double assess_stream(const StreamRecord& record, const ServiceClass& cls);

// Earnings attributed in [0, interval] divided by the interval length.
double revenue_rate(const RevenueLedger& ledger, double interval);

// Revenue rate of each of `batches` equal slices of [0, horizon]; earnings at
// the horizon itself land in the last batch.
std::vector<double> batch_revenue_rates(const RevenueLedger& ledger,
                                        double horizon, int batches);

struct BatchStats {
  int batches = 0;
  double batch_length = 0.0;
  double mean = 0.0;
  double half_width = 0.0;  // 95% confidence, Student t on batch means
  std::vector<double> rates;
};

BatchStats batch_confidence(const std::vector<double>& rates);

// One CSV line of the result schema. `batch` is a batch index or "summary";
// ci is present only on summary rows.
struct CsvRow {
  std::string scenario;
  std::string policy;
  std::string param;
  std::string batch;
  double revenue_rate = 0.0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t penalized = 0;
  std::optional<double> ci_halfwidth;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const CsvRow& row);

// Shortest round-trippable-at-10-significant-digits form; used for every
// numeric CSV field so output is byte-stable.
std::string format_compact(double v);

}  // namespace streamsim
