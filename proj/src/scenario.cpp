#include "streamsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace streamsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("scenario: " + where + ": " + what);
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Distribution parse_distribution(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object with a \"kind\" field");
  const std::string kind = j.value("kind", std::string());
  try {
    if (kind == "exponential")
      return Distribution::exponential(require_number(j.at("rate"), where + ".rate"));
    if (kind == "deterministic")
      return Distribution::deterministic(require_number(j.at("value"), where + ".value"));
    if (kind == "hyperexponential2")
      return Distribution::hyperexponential2(
          require_number(j.at("p1"), where + ".p1"),
          require_number(j.at("mean1"), where + ".mean1"),
          require_number(j.at("mean2"), where + ".mean2"));
  } catch (const json::exception& e) {
    fail(where, e.what());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where, "unknown kind \"" + kind + "\"");
}

}  // namespace

std::optional<PolicySpec> policy_from_name(const std::string& name) {
  if (name == "admit_all")
    return PolicySpec{name, AdmissionRule::admit_all, AllocationRule::offered_loads};
  if (name == "admit_all_static")
    return PolicySpec{name, AdmissionRule::admit_all,
                      AllocationRule::potential_loads_static};
  if (name == "current_state")
    return PolicySpec{name, AdmissionRule::current_state,
                      AllocationRule::offered_loads};
  if (name == "current_state_optimized")
    return PolicySpec{name, AdmissionRule::current_state_optimized,
                      AllocationRule::offered_loads};
  if (name == "threshold")
    return PolicySpec{name, AdmissionRule::threshold,
                      AllocationRule::potential_loads_static};
  return std::nullopt;
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "top level must be an object");

  Scenario sc;
  try {
    sc.id = doc.value("id", std::string("scenario"));
    sc.servers = doc.value("servers", 0);
    sc.horizon = doc.value("horizon", 0.0);
    sc.batches = doc.value("batches", 1);
    sc.seed = doc.value("seed", std::uint64_t{1});
    sc.preemptive = doc.value("preemptive", false);

    const std::string est = doc.value("estimation", std::string("oracle"));
    if (est == "oracle")
      sc.estimation = EstimationMode::oracle;
    else if (est == "measured")
      sc.estimation = EstimationMode::measured;
    else
      fail("estimation", "expected \"oracle\" or \"measured\", got \"" + est + "\"");

    if (!doc.contains("classes") || !doc["classes"].is_array())
      fail("classes", "required array missing");
    int index = 0;
    for (const json& jc : doc["classes"]) {
      const std::string where = "classes[" + std::to_string(index) + "]";
      if (!jc.is_object()) fail(where, "expected an object");
      ServiceClass cls;
      cls.index = index;
      cls.gamma = jc.value("gamma", 1.0);
      cls.k = jc.value("k", 1);
      cls.delta = jc.value("delta", 0.0);
      cls.charge = jc.value("charge", 0.0);
      cls.obligation = jc.value("obligation", 0.0);
      cls.penalty = jc.value("penalty", 0.0);
      if (!jc.contains("service")) fail(where + ".service", "required field missing");
      cls.service_dist = parse_distribution(jc["service"], where + ".service");
      bool defaulted = true;
      if (jc.contains("job_interarrival")) {
        cls.job_interarrival_dist =
            parse_distribution(jc["job_interarrival"], where + ".job_interarrival");
        defaulted = false;
      } else if (cls.gamma > 0.0) {
        cls.job_interarrival_dist = Distribution::exponential(cls.gamma);
      }
      sc.classes.push_back(cls);
      sc.interarrival_defaulted.push_back(defaulted);
      ++index;
    }

    if (!doc.contains("policies") || !doc["policies"].is_array())
      fail("policies", "required array missing");
    for (const json& jp : doc["policies"]) {
      if (jp.is_string()) {
        const std::string name = jp.get<std::string>();
        const auto spec = policy_from_name(name);
        if (!spec) fail("policies", "unknown policy \"" + name + "\"");
        sc.policies.push_back(*spec);
      } else if (jp.is_object()) {
        const std::string adm = jp.value("admission", std::string());
        auto spec = policy_from_name(adm);
        if (!spec) fail("policies", "unknown admission rule \"" + adm + "\"");
        const std::string alloc = jp.value("allocation", std::string());
        if (alloc == "offered_loads")
          spec->allocation = AllocationRule::offered_loads;
        else if (alloc == "potential_loads_static")
          spec->allocation = AllocationRule::potential_loads_static;
        else if (!alloc.empty())
          fail("policies", "unknown allocation rule \"" + alloc + "\"");
        spec->name = jp.value("name", adm + (alloc.empty() ? "" : "+" + alloc));
        sc.policies.push_back(*spec);
      } else {
        fail("policies", "entries must be strings or objects");
      }
    }

    if (doc.contains("sweep") && !doc["sweep"].is_null()) {
      const json& js = doc["sweep"];
      if (!js.is_object() || !js.contains("path") || !js.contains("values"))
        fail("sweep", "expected {\"path\", \"values\"}");
      SweepSpec sw;
      sw.path = js["path"].get<std::string>();
      for (const json& v : js["values"])
        sw.values.push_back(require_number(v, "sweep.values"));
      sc.sweep = sw;
    }

    if (doc.contains("options")) {
      const json& jo = doc["options"];
      const std::string w = jo.value("weight", std::string("ratio_r_over_c"));
      if (w == "ratio_r_over_c")
        sc.options.weight = WeightRule::ratio_r_over_c;
      else if (w == "unit")
        sc.options.weight = WeightRule::unit;
      else
        fail("options.weight", "unknown weight rule \"" + w + "\"");
      sc.options.include_blocked_state = jo.value("include_blocked_state", true);
      sc.options.threshold_epsilon = jo.value("threshold_epsilon", 0.0);
      sc.options.threshold_cap = jo.value("threshold_cap", 0);
      sc.options.drift_threshold = jo.value("drift_threshold", 0.10);
    }

    if (doc.contains("initial_streams")) {
      for (const json& v : doc["initial_streams"])
        sc.initial_streams.push_back(v.get<int>());
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scenario: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::optional<SweepTarget> parse_sweep_path(const std::string& path,
                                            std::size_t class_count) {
  const std::string prefix = "classes[";
  if (path.rfind(prefix, 0) != 0) return std::nullopt;
  const std::size_t close = path.find(']', prefix.size());
  if (close == std::string::npos || close + 1 >= path.size() ||
      path[close + 1] != '.')
    return std::nullopt;
  const std::string idx_text = path.substr(prefix.size(), close - prefix.size());
  if (idx_text.empty() ||
      idx_text.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  SweepTarget t;
  t.class_index = static_cast<std::size_t>(std::stoul(idx_text));
  t.field = path.substr(close + 2);
  if (t.class_index >= class_count) return std::nullopt;
  static const char* kFields[] = {"delta", "gamma", "charge", "obligation",
                                  "penalty"};
  for (const char* f : kFields)
    if (t.field == f) return t;
  return std::nullopt;
}

void apply_sweep(Scenario& sc, const SweepTarget& target, double value) {
  ServiceClass& cls = sc.classes.at(target.class_index);
  if (target.field == "delta") {
    cls.delta = value;
  } else if (target.field == "gamma") {
    cls.gamma = value;
    if (sc.interarrival_defaulted.at(target.class_index) && value > 0.0)
      cls.job_interarrival_dist = Distribution::exponential(value);
  } else if (target.field == "charge") {
    cls.charge = value;
  } else if (target.field == "obligation") {
    cls.obligation = value;
  } else if (target.field == "penalty") {
    cls.penalty = value;
  } else {
    throw std::logic_error("apply_sweep: unsupported field " + target.field);
  }
}

std::vector<ValidationIssue> validate_scenario(const Scenario& sc) {
  std::vector<ValidationIssue> issues;
  auto error = [&](const std::string& where, const std::string& msg) {
    issues.push_back({true, where, msg});
  };
  auto warning = [&](const std::string& where, const std::string& msg) {
    issues.push_back({false, where, msg});
  };

  if (sc.servers < 1) error("servers", "must be at least 1");
  if (!(sc.horizon > 0.0)) error("horizon", "must be positive");
  if (sc.batches < 1) error("batches", "must be at least 1");
  if (sc.classes.empty()) error("classes", "at least one class is required");
  if (sc.policies.empty()) error("policies", "at least one policy is required");

  for (std::size_t i = 0; i < sc.classes.size(); ++i) {
    const ServiceClass& c = sc.classes[i];
    const std::string where = "classes[" + std::to_string(i) + "]";
    if (!(c.gamma > 0.0)) error(where + ".gamma", "must be positive");
    if (c.k < 1) error(where + ".k", "must be at least 1");
    if (c.delta < 0.0) error(where + ".delta", "must be nonnegative");
    if (!(c.obligation > 0.0)) error(where + ".obligation", "must be positive");
    if (c.charge < 0.0) error(where + ".charge", "must be nonnegative");
    if (c.penalty < 0.0) error(where + ".penalty", "must be nonnegative");
    if (!(c.service_dist.mean() > 0.0))
      error(where + ".service", "mean service time must be positive");
    const double ia_mean = c.job_interarrival_dist.mean();
    if (c.gamma > 0.0 && ia_mean > 0.0 &&
        std::abs(ia_mean * c.gamma - 1.0) > 1e-9)
      error(where + ".job_interarrival",
            "mean interarrival time must equal 1/gamma");
  }

  if (!sc.initial_streams.empty()) {
    if (sc.initial_streams.size() != sc.classes.size())
      error("initial_streams", "length must match the class list");
    for (std::size_t i = 0; i < sc.initial_streams.size(); ++i)
      if (sc.initial_streams[i] < 0)
        error("initial_streams[" + std::to_string(i) + "]",
              "must be nonnegative");
  }

  for (std::size_t p = 0; p < sc.policies.size(); ++p) {
    const PolicySpec& ps = sc.policies[p];
    const std::string where = "policies[" + std::to_string(p) + "]";
    if (ps.admission == AdmissionRule::threshold &&
        ps.allocation != AllocationRule::potential_loads_static)
      error(where, "threshold admission requires the static allocation");
    if ((ps.admission == AdmissionRule::current_state ||
         ps.admission == AdmissionRule::current_state_optimized) &&
        ps.allocation != AllocationRule::offered_loads)
      error(where, "current-state admission requires the offered-loads allocation");
  }

  if (sc.sweep) {
    if (!parse_sweep_path(sc.sweep->path, sc.classes.size()))
      error("sweep.path", "cannot resolve \"" + sc.sweep->path + "\"");
    if (sc.sweep->values.empty()) error("sweep.values", "must be nonempty");
    const auto target = parse_sweep_path(sc.sweep->path, sc.classes.size());
    const bool rate_field =
        target && (target->field == "delta" || target->field == "gamma" ||
                   target->field == "obligation");
    for (double v : sc.sweep->values)
      if (rate_field && !(v > 0.0)) {
        error("sweep.values", "swept " + (target ? target->field : "value") +
                                  " must be positive");
        break;
      }
  }

  if (sc.servers >= 1 && !sc.classes.empty()) {
    double potential = 0.0;
    for (const ServiceClass& c : sc.classes)
      potential += c.delta * static_cast<double>(c.k) * c.service_dist.mean();
    if (sc.sweep) {
      const auto target = parse_sweep_path(sc.sweep->path, sc.classes.size());
      if (target && target->field == "delta" && !sc.sweep->values.empty()) {
        const ServiceClass& c = sc.classes[target->class_index];
        double max_v = sc.sweep->values.front();
        for (double v : sc.sweep->values) max_v = std::max(max_v, v);
        potential += (max_v - c.delta) * static_cast<double>(c.k) *
                     c.service_dist.mean();
      }
    }
    if (potential > 2.0 * static_cast<double>(sc.servers))
      warning("classes", "potential offered load far exceeds capacity; "
                         "expect heavy rejection or saturation");
  }

  return issues;
}

}  // namespace streamsim
