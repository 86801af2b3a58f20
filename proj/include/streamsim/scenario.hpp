#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamsim/domain.hpp"
#include "streamsim/engine.hpp"
#include "streamsim/policies.hpp"

namespace streamsim {

// One policy bundle to run: an admission rule paired with the allocation rule
// it drives, plus the label used in output files.
struct PolicySpec {
  std::string name;
  AdmissionRule admission = AdmissionRule::admit_all;
  AllocationRule allocation = AllocationRule::offered_loads;
};

struct SweepSpec {
  std::string path;  // "classes[<i>].<field>", e.g. "classes[1].delta"
  std::vector<double> values;
};

struct SweepTarget {
  std::size_t class_index = 0;
  std::string field;
};

struct Scenario {
  std::string id;
  int servers = 0;
  double horizon = 0.0;
  int batches = 1;
  std::uint64_t seed = 1;
  EstimationMode estimation = EstimationMode::oracle;
  bool preemptive = false;
  std::vector<ServiceClass> classes;
  // true where job_interarrival was not given and defaults to
  // exponential(gamma); sweeping gamma then re-derives it.
  std::vector<bool> interarrival_defaulted;
  std::vector<PolicySpec> policies;
  std::optional<SweepSpec> sweep;
  PolicyConfig options;
  std::vector<int> initial_streams;
};

struct ValidationIssue {
  bool error = true;  // false = warning
  std::string where;
  std::string message;
};

// Parse a JSON scenario document. Malformed JSON or unknown enum values throw
// std::runtime_error naming the offending field.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// Aggregated constraint check; never fail-fast. Errors make the scenario
// unrunnable, warnings do not.
std::vector<ValidationIssue> validate_scenario(const Scenario& sc);

std::optional<SweepTarget> parse_sweep_path(const std::string& path,
                                            std::size_t class_count);

// Set the swept field on a copy-mutated scenario; re-derives the defaulted
// job-interarrival distribution when gamma changes.
void apply_sweep(Scenario& sc, const SweepTarget& target, double value);

// The named policy shorthands accepted in scenario files.
std::optional<PolicySpec> policy_from_name(const std::string& name);

}  // namespace streamsim
