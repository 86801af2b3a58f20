#include "streamsim/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "streamsim/accounting.hpp"

namespace streamsim {

namespace {

EngineConfig engine_config(const Scenario& sc) {
  EngineConfig cfg;
  cfg.horizon = sc.horizon;
  cfg.batches = sc.batches;
  cfg.seed = sc.seed;
  cfg.estimation = sc.estimation;
  cfg.preemptive = sc.preemptive;
  cfg.initial_streams = sc.initial_streams;
  return cfg;
}

PolicyConfig policy_config(const Scenario& sc, const PolicySpec& spec) {
  PolicyConfig cfg = sc.options;
  cfg.admission = spec.admission;
  cfg.allocation = spec.allocation;
  return cfg;
}

struct BatchCounters {
  std::vector<std::int64_t> accepted, rejected, penalized;
};

BatchCounters batch_counters(const RevenueLedger& ledger, double horizon,
                             int batches) {
  BatchCounters bc;
  bc.accepted.assign(batches, 0);
  bc.rejected.assign(batches, 0);
  bc.penalized.assign(batches, 0);
  const double len = horizon / batches;
  auto index = [&](double t) {
    int idx = static_cast<int>(t / len);
    return std::min(std::max(idx, 0), batches - 1);
  };
  for (const auto& [t, cls] : ledger.admissions) {
    (void)cls;
    ++bc.accepted[index(t)];
  }
  for (const auto& [t, cls] : ledger.rejections) {
    (void)cls;
    ++bc.rejected[index(t)];
  }
  for (const StreamOutcome& o : ledger.outcomes)
    if (o.penalized) ++bc.penalized[index(o.time)];
  return bc;
}

}  // namespace

MatrixResult run_matrix(const Scenario& sc, std::ostream* trace) {
  MatrixResult matrix;
  std::vector<std::optional<double>> points;
  if (sc.sweep) {
    const auto target = parse_sweep_path(sc.sweep->path, sc.classes.size());
    if (!target)
      throw std::runtime_error("run_matrix: unresolvable sweep path " +
                               sc.sweep->path);
    for (double v : sc.sweep->values) points.emplace_back(v);
  } else {
    points.emplace_back(std::nullopt);
  }

  for (const auto& value : points) {
    Scenario point = sc;
    if (value) {
      const auto target = parse_sweep_path(sc.sweep->path, sc.classes.size());
      apply_sweep(point, *target, *value);
    }
    for (const PolicySpec& spec : sc.policies) {
      if (trace) {
        *trace << "# run policy=" << spec.name;
        if (value) *trace << " point=" << format_compact(*value);
        *trace << '\n';
      }
      PointResult pr;
      pr.policy = spec.name;
      pr.sweep_value = value;
      pr.report = run_simulation(point.classes, point.servers,
                                 policy_config(point, spec),
                                 engine_config(point), trace);
      matrix.points.push_back(std::move(pr));
    }
  }
  return matrix;
}

void write_results_csv(std::ostream& os, const Scenario& sc,
                       const MatrixResult& matrix) {
  write_csv_header(os);
  for (const PointResult& pr : matrix.points) {
    const SimulationReport& rep = pr.report;
    const std::string param =
        pr.sweep_value ? format_compact(*pr.sweep_value) : std::string();
    const BatchCounters bc =
        batch_counters(rep.ledger, sc.horizon, sc.batches);
    std::int64_t accepted = 0, rejected = 0, penalized = 0;
    for (const ClassCounters& c : rep.ledger.per_class) {
      accepted += c.accepted;
      rejected += c.rejected;
      penalized += c.penalized;
    }
    for (int b = 0; b < sc.batches; ++b) {
      CsvRow row;
      row.scenario = sc.id;
      row.policy = pr.policy;
      row.param = param;
      row.batch = std::to_string(b);
      row.revenue_rate = rep.batch_rates[b];
      row.accepted = bc.accepted[b];
      row.rejected = bc.rejected[b];
      row.penalized = bc.penalized[b];
      write_csv_row(os, row);
    }
    CsvRow sum;
    sum.scenario = sc.id;
    sum.policy = pr.policy;
    sum.param = param;
    sum.batch = "summary";
    sum.revenue_rate = rep.stats.mean;
    sum.accepted = accepted;
    sum.rejected = rejected;
    sum.penalized = penalized;
    sum.ci_halfwidth = rep.stats.half_width;
    write_csv_row(os, sum);
  }
}

std::string plot_script(const Scenario& sc, const std::string& csv_name) {
  std::string s;
  s += "#!/usr/bin/env python3\n";
  s += "import csv\nimport collections\nimport matplotlib.pyplot as plt\n\n";
  s += "rows = list(csv.DictReader(open(\"" + csv_name + "\")))\n";
  s += "series = collections.defaultdict(list)\n";
  s += "fig, ax = plt.subplots()\n";
  if (sc.sweep) {
    s += "for r in rows:\n";
    s += "    if r[\"batch\"] == \"summary\":\n";
    s += "        series[r[\"policy\"]].append(r)\n";
    s += "for policy, pts in series.items():\n";
    s += "    xs = [float(p[\"param\"]) for p in pts]\n";
    s += "    ys = [float(p[\"revenue_rate\"]) for p in pts]\n";
    s += "    es = [float(p[\"ci_halfwidth\"] or 0) for p in pts]\n";
    s += "    ax.errorbar(xs, ys, yerr=es, marker=\"o\", capsize=3, label=policy)\n";
    s += "ax.set_xlabel(\"" + sc.sweep->path + "\")\n";
  } else {
    s += "for r in rows:\n";
    s += "    if r[\"batch\"] != \"summary\":\n";
    s += "        series[r[\"policy\"]].append(r)\n";
    s += "for policy, pts in series.items():\n";
    s += "    xs = [int(p[\"batch\"]) for p in pts]\n";
    s += "    ys = [float(p[\"revenue_rate\"]) for p in pts]\n";
    s += "    ax.plot(xs, ys, marker=\"o\", label=policy)\n";
    s += "ax.set_xlabel(\"batch\")\n";
  }
  s += "ax.set_ylabel(\"revenue per unit time\")\n";
  s += "ax.set_title(\"" + sc.id + "\")\n";
  s += "ax.legend()\n";
  s += "fig.tight_layout()\n";
  s += "fig.savefig(\"" + sc.id + ".png\", dpi=150)\n";
  s += "print(\"wrote " + sc.id + ".png\")\n";
  return s;
}

void apply_overrides(Scenario& sc, const RunOverrides& ov) {
  if (ov.seed) sc.seed = *ov.seed;
  if (ov.horizon) sc.horizon = *ov.horizon;
  if (ov.batches) sc.batches = *ov.batches;
  if (ov.estimation) sc.estimation = *ov.estimation;
  if (ov.preemptive) sc.preemptive = *ov.preemptive;
}

namespace {

int report_issues(const std::vector<ValidationIssue>& issues,
                  std::ostream& err) {
  int errors = 0;
  for (const ValidationIssue& issue : issues) {
    err << (issue.error ? "error" : "warning") << ": " << issue.where << ": "
        << issue.message << '\n';
    if (issue.error) ++errors;
  }
  return errors;
}

}  // namespace

int run_scenario_file(const std::string& path, const RunOverrides& ov,
                      std::ostream& out, std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  apply_overrides(sc, ov);
  if (report_issues(validate_scenario(sc), err) > 0) return 1;

  namespace fs = std::filesystem;
  try {
    fs::create_directories(ov.out_dir);
    const fs::path csv_path = fs::path(ov.out_dir) / (sc.id + ".csv");
    const fs::path trace_path = fs::path(ov.out_dir) / (sc.id + "_trace.txt");

    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (ov.trace) {
      trace_file.open(trace_path);
      if (!trace_file)
        throw std::runtime_error("cannot write " + trace_path.string());
      trace = &trace_file;
    }

    const MatrixResult matrix = run_matrix(sc, trace);

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    write_results_csv(csv, sc, matrix);
    out << "wrote " << csv_path.string() << '\n';
    if (ov.trace) out << "wrote " << trace_path.string() << '\n';

    if (ov.plot) {
      const fs::path plot_path = fs::path(ov.out_dir) / (sc.id + "_plot.py");
      std::ofstream py(plot_path);
      if (!py) throw std::runtime_error("cannot write " + plot_path.string());
      py << plot_script(sc, csv_path.filename().string());
      out << "wrote " << plot_path.string() << '\n';
    }

    for (const PointResult& pr : matrix.points) {
      out << sc.id << " policy=" << pr.policy;
      if (pr.sweep_value) out << " point=" << format_compact(*pr.sweep_value);
      out << " revenue=" << format_compact(pr.report.stats.mean);
      if (sc.batches >= 2)
        out << " ci=" << format_compact(pr.report.stats.half_width);
      out << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int validate_scenario_file(const std::string& path, std::ostream& out,
                           std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  const auto issues = validate_scenario(sc);
  const int errors = report_issues(issues, err);
  if (errors == 0)
    out << path << ": valid (" << issues.size() << " warning"
        << (issues.size() == 1 ? "" : "s") << ")\n";
  return errors > 0 ? 1 : 0;
}

std::string preset_dir() {
  if (const char* env = std::getenv("STREAMSIM_PRESET_DIR")) return env;
#ifdef STREAMSIM_SOURCE_PRESET_DIR
  return STREAMSIM_SOURCE_PRESET_DIR;
#else
  return "presets";
#endif
}

std::vector<std::string> preset_files(const std::string& name) {
  const std::string dir = preset_dir();
  std::vector<std::string> names;
  if (name == "fig2" || name == "fig3" || name == "fig5") {
    names = {name + ".json"};
  } else if (name == "fig4") {
    names = {"fig4_deterministic.json", "fig4_exponential.json",
             "fig4_hyperexponential.json"};
  } else {
    throw std::runtime_error("unknown preset \"" + name +
                             "\" (expected fig2, fig3, fig4 or fig5)");
  }
  std::vector<std::string> paths;
  for (const std::string& n : names)
    paths.push_back((std::filesystem::path(dir) / n).string());
  return paths;
}

}  // namespace streamsim
