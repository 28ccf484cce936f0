#include "otlimits/cli.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <utility>

#include "otlimits/degeneracy.hpp"
#include "otlimits/dual_face.hpp"
#include "otlimits/fixtures.hpp"
#include "otlimits/inference.hpp"
#include "otlimits/limit_law.hpp"
#include "otlimits/ot_core.hpp"

namespace otl {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::pair<Task, const char*>, 8> kTaskNames{{
    {Task::solve, "solve"},
    {Task::face, "face"},
    {Task::degeneracy, "degeneracy"},
    {Task::limit_sample, "limit-sample"},
    {Task::clt, "clt"},
    {Task::bootstrap, "bootstrap"},
    {Task::pivotal, "pivotal"},
    {Task::semidiscrete, "semidiscrete"},
}};

std::size_t count_at(const Json& v, const char* key, std::size_t minimum) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(minimum)) {
    throw InvalidInput(std::string("parameters.") + key + ": expected an integer >= " +
                       std::to_string(minimum));
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

double positive_at(const Json& v, const std::string& where) {
  if (!v.is_number() || !(v.get<double>() > 0.0)) {
    throw InvalidInput(where + ": expected a positive number");
  }
  return v.get<double>();
}

// Replaces {"file": "x.json"} with the parsed contents of x.json.
Json resolve_file(const Json& doc, const fs::path& base_dir, const std::string& where) {
  if (doc.is_object() && doc.contains("file")) {
    require_keys(doc, {"file"}, where);
    if (!doc["file"].is_string()) throw InvalidInput(where + ".file: expected a path string");
    fs::path p = doc["file"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_json_file(p);
  }
  return doc;
}

InstanceConfig parse_instance(const Json& doc, const fs::path& base_dir) {
  InstanceConfig out;
  if (!doc.is_object()) throw InvalidInput("instance: expected a JSON object");
  if (doc.contains("fixture")) {
    require_keys(doc, {"fixture"}, "instance");
    if (!doc["fixture"].is_string()) throw InvalidInput("instance.fixture: expected a name");
    const auto name = doc["fixture"].get<std::string>();
    const auto names = FixtureLibrary::names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw InvalidInput("instance.fixture: unknown fixture '" + name + "'");
    }
    out.fixture = name;
    return out;
  }
  require_keys(doc, {"mu", "nu", "cost"}, "instance");
  for (const char* key : {"mu", "nu", "cost"}) {
    if (!doc.contains(key)) throw InvalidInput(std::string("instance: missing key '") + key + "'");
  }
  out.mu = resolve_file(doc["mu"], base_dir, "instance.mu");
  out.nu = resolve_file(doc["nu"], base_dir, "instance.nu");
  const Json& cost = doc["cost"];
  if (!cost.is_object() || !cost.contains("kind") || !cost["kind"].is_string()) {
    throw InvalidInput("instance.cost: expected an object with a string 'kind'");
  }
  const auto kind = cost["kind"].get<std::string>();
  if (kind == "power") {
    require_keys(cost, {"kind", "p"}, "instance.cost");
    positive_at(cost.value("p", Json()), "instance.cost.p");
    out.cost = cost;
  } else if (kind == "thresholded") {
    require_keys(cost, {"kind", "p", "threshold"}, "instance.cost");
    positive_at(cost.value("p", Json()), "instance.cost.p");
    positive_at(cost.value("threshold", Json()), "instance.cost.threshold");
    out.cost = cost;
  } else if (kind == "explicit") {
    if (cost.contains("file")) {
      require_keys(cost, {"kind", "file"}, "instance.cost");
      out.cost = resolve_file(Json{{"file", cost["file"]}}, base_dir, "instance.cost");
    } else {
      require_keys(cost, {"kind", "matrix"}, "instance.cost");
      out.cost = Json{{"matrix", cost.value("matrix", Json())}};
    }
    matrix_from_json(out.cost);
    out.cost["kind"] = "explicit";
  } else {
    throw InvalidInput("instance.cost.kind: unknown cost kind '" + kind + "'");
  }
  return out;
}

Parameters parse_parameters(const Json& doc) {
  require_keys(doc, {"n", "m", "reps", "M", "k", "B", "outer", "delta", "alpha", "mode", "nodes"},
               "parameters");
  Parameters p;
  if (doc.contains("n")) p.n = count_at(doc["n"], "n", 1);
  if (doc.contains("m")) p.m = count_at(doc["m"], "m", 1);
  if (doc.contains("reps")) p.reps = count_at(doc["reps"], "reps", 1);
  if (doc.contains("M")) p.draws = count_at(doc["M"], "M", 1);
  if (doc.contains("k")) p.k = count_at(doc["k"], "k", 1);
  if (doc.contains("B")) p.bootstrap_draws = count_at(doc["B"], "B", 100);
  if (doc.contains("outer")) p.outer = count_at(doc["outer"], "outer", 1);
  if (doc.contains("nodes")) {
    p.nodes = static_cast<int>(count_at(doc["nodes"], "nodes", 1));
  }
  if (doc.contains("delta")) {
    const double d = positive_at(doc["delta"], "parameters.delta");
    if (d >= 1.0) throw InvalidInput("parameters.delta: must lie in (0, 1)");
    p.delta = d;
  }
  if (doc.contains("alpha")) {
    const double a = positive_at(doc["alpha"], "parameters.alpha");
    if (a >= 1.0) throw InvalidInput("parameters.alpha: must lie in (0, 1)");
    p.alpha = a;
  }
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw InvalidInput("parameters.mode: expected a string");
    p.mode = limit_mode_from_string(doc["mode"].get<std::string>());
  }
  return p;
}

Thresholds parse_thresholds(const Json& doc) {
  require_keys(doc, {"ks_max", "coverage_min", "coverage_max"}, "thresholds");
  Thresholds t;
  if (doc.contains("ks_max")) t.ks_max = positive_at(doc["ks_max"], "thresholds.ks_max");
  if (doc.contains("coverage_min")) {
    t.coverage_min = positive_at(doc["coverage_min"], "thresholds.coverage_min");
  }
  if (doc.contains("coverage_max")) {
    t.coverage_max = positive_at(doc["coverage_max"], "thresholds.coverage_max");
  }
  return t;
}

}  // namespace

std::string to_string(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "unknown";
}

Task task_from_string(const std::string& name) {
  for (const auto& [t, text] : kTaskNames) {
    if (name == text) return t;
  }
  throw InvalidInput("unknown task '" + name + "'");
}

ExperimentConfig parse_config(const Json& doc, const fs::path& base_dir,
                              std::optional<Task> task) {
  require_keys(doc, {"task", "seed", "instance", "parameters", "thresholds", "output"}, "config");
  ExperimentConfig cfg;
  std::optional<Task> declared;
  if (doc.contains("task")) {
    if (!doc["task"].is_string()) throw InvalidInput("config.task: expected a string");
    declared = task_from_string(doc["task"].get<std::string>());
  }
  if (task && declared && *task != *declared) {
    throw InvalidInput("config.task '" + to_string(*declared) +
                       "' disagrees with the requested task '" + to_string(*task) + "'");
  }
  if (!task && !declared) throw InvalidInput("config: no task given");
  cfg.task = task ? *task : *declared;

  if (!doc.contains("seed")) throw InvalidInput("config: 'seed' is mandatory");
  if (!doc["seed"].is_number_integer() ||
      (!doc["seed"].is_number_unsigned() && doc["seed"].get<std::int64_t>() < 0)) {
    throw InvalidInput("config.seed: expected a non-negative integer");
  }
  cfg.seed = doc["seed"].get<std::uint64_t>();

  if (!doc.contains("instance")) throw InvalidInput("config: missing 'instance'");
  cfg.instance = parse_instance(doc["instance"], base_dir);
  if (doc.contains("parameters")) cfg.parameters = parse_parameters(doc["parameters"]);
  if (doc.contains("thresholds")) cfg.thresholds = parse_thresholds(doc["thresholds"]);
  if (doc.contains("output")) {
    require_keys(doc["output"], {"dir"}, "output");
    if (doc["output"].contains("dir")) {
      if (!doc["output"]["dir"].is_string()) throw InvalidInput("output.dir: expected a path");
      fs::path dir = doc["output"]["dir"].get<std::string>();
      cfg.output_dir = dir.is_relative() ? base_dir / dir : dir;
    }
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, std::optional<Task> task) {
  return parse_config(read_json_file(path), path.parent_path(), task);
}

namespace {

CostSpec spec_from_json(const Json& cost) {
  const auto kind = cost["kind"].get<std::string>();
  if (kind == "power") return CostSpec::power(cost["p"].get<double>());
  if (kind == "thresholded") {
    return CostSpec::thresholded(cost["p"].get<double>(), cost["threshold"].get<double>());
  }
  Json matrix = cost;
  matrix.erase("kind");
  return CostSpec::explicit_matrix(matrix_from_json(matrix));
}

DensityMeasure1D density_from_json(const Json& doc, int nodes) {
  if (!doc.is_object() || !doc.contains("density") || !doc["density"].is_string()) {
    throw InvalidInput("instance.nu: expected a density object with a string 'density'");
  }
  const auto kind = doc["density"].get<std::string>();
  auto numbers = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw InvalidInput(std::string("instance.nu.") + key + ": expected an array");
    }
    std::vector<double> out;
    for (const auto& v : doc[key]) {
      if (!v.is_number()) throw InvalidInput(std::string("instance.nu.") + key + ": expected numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (kind == "uniform") {
    require_keys(doc, {"density", "lower", "upper"}, "instance.nu");
    if (!doc.contains("lower") || !doc.contains("upper") || !doc["lower"].is_number() ||
        !doc["upper"].is_number()) {
      throw InvalidInput("instance.nu: uniform density needs numeric 'lower' and 'upper'");
    }
    return DensityMeasure1D::uniform(doc["lower"].get<double>(), doc["upper"].get<double>(), nodes);
  }
  if (kind == "piecewise_constant") {
    require_keys(doc, {"density", "breakpoints", "values"}, "instance.nu");
    return DensityMeasure1D::piecewise_constant(numbers("breakpoints"), numbers("values"), nodes);
  }
  throw InvalidInput("instance.nu.density: unknown density kind '" + kind + "'");
}

}  // namespace

DiscreteInstance make_discrete_instance(const InstanceConfig& config) {
  if (config.fixture) {
    if (FixtureLibrary::is_semidiscrete(*config.fixture)) {
      throw InvalidInput("fixture '" + *config.fixture + "' is semi-discrete");
    }
    Fixture fx = FixtureLibrary::discrete(*config.fixture);
    return {fx.name, std::move(fx.mu), std::move(fx.nu), std::move(fx.cost)};
  }
  if (config.nu.is_object() && config.nu.contains("density")) {
    throw InvalidInput("instance.nu: a density needs the semidiscrete task");
  }
  DiscreteMeasure mu = measure_from_json(config.mu);
  DiscreteMeasure nu = measure_from_json(config.nu);
  const CostSpec spec = spec_from_json(config.cost);
  if (spec.is_parametric()) {
    auto cost = cost_matrix(spec, mu, nu);
    return {"inline", std::move(mu), std::move(nu), std::move(cost)};
  }
  CostMatrix cost(std::get<ExplicitMatrix>(spec.kind()).values);
  if (cost.rows() != mu.size() || cost.cols() != nu.size()) {
    throw InvalidInput("instance.cost: matrix shape does not match the measures");
  }
  return {"inline", std::move(mu), std::move(nu), std::move(cost)};
}

SemidiscreteInstance make_semidiscrete_instance(const InstanceConfig& config, int nodes) {
  if (config.fixture) {
    if (!FixtureLibrary::is_semidiscrete(*config.fixture)) {
      throw InvalidInput("fixture '" + *config.fixture + "' is not semi-discrete");
    }
    auto fx = FixtureLibrary::semidiscrete(*config.fixture);
    auto nu = fx.nu.nodes() == nodes ? fx.nu : fx.nu.with_nodes(nodes);
    return {fx.name, std::move(fx.mu), std::move(nu), std::move(fx.spec)};
  }
  DiscreteMeasure mu = measure_from_json(config.mu);
  DensityMeasure1D nu = density_from_json(config.nu, nodes);
  CostSpec spec = spec_from_json(config.cost);
  if (!spec.is_parametric()) throw InvalidInput("instance.cost: semidiscrete needs a parametric cost");
  return {"inline", std::move(mu), std::move(nu), std::move(spec)};
}

int resolve_jobs(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw InvalidInput("--jobs must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("OTLIMITS_JOBS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InvalidInput("OTLIMITS_JOBS must be a positive integer");
    return static_cast<int>(v);
  }
  return 1;
}

namespace {

constexpr std::size_t kDefaultLimitDraws = 100000;

class Checks {
 public:
  void at_most(const char* name, double value, std::optional<double> limit) {
    if (!limit) return;
    add(name, value, "<=", *limit, value <= *limit);
  }
  void at_least(const char* name, double value, std::optional<double> limit) {
    if (!limit) return;
    add(name, value, ">=", *limit, value >= *limit);
  }
  bool passed() const { return passed_; }
  Json json() const { return checks_; }

 private:
  void add(const char* name, double value, const char* op, double limit, bool ok) {
    checks_.push_back(
        Json{{"name", name}, {"value", value}, {"relation", op}, {"limit", limit}, {"passed", ok}});
    passed_ = passed_ && ok;
  }
  Json checks_ = Json::array();
  bool passed_ = true;
};

std::size_t need(const std::optional<std::size_t>& v, const char* key, Task task) {
  if (!v) throw InvalidInput("task " + to_string(task) + " needs parameters." + key);
  return *v;
}

std::vector<double> indices(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(i);
  return out;
}

void write_samples(const fs::path& path, const char* column, const std::vector<double>& values) {
  write_csv(path, {"index", column}, {indices(values.size()), values});
}

Json summary_header(const ExperimentConfig& cfg, const std::string& label) {
  return Json{{"task", to_string(cfg.task)}, {"seed", cfg.seed}, {"instance", label}};
}

void merge(Json& into, const Json& from) {
  for (const auto& item : from.items()) into[item.key()] = item.value();
}

DualFace face_of(const DiscreteInstance& inst, TransportSolution* solution = nullptr) {
  auto sol = solve_discrete_ot(inst.mu, inst.nu, inst.cost);
  auto face = build_face(inst.mu, inst.nu, inst.cost, sol);
  if (solution != nullptr) *solution = std::move(sol);
  return face;
}

Json run_solve(const ExperimentConfig& cfg, const DiscreteInstance& inst, Checks&) {
  const auto sol = solve_discrete_ot(inst.mu, inst.nu, inst.cost);
  const auto d = diagnose(sol, inst.mu.weights(), inst.nu.weights(), inst.cost);
  Json out = summary_header(cfg, inst.label);
  merge(out, to_json(sol));
  out["diagnostics"] = Json{{"marginal_error", d.marginal_error},
                            {"min_plan_entry", d.min_plan_entry},
                            {"dual_infeasibility", d.dual_infeasibility},
                            {"slackness_violation", d.slackness_violation},
                            {"gap", d.gap}};
  return out;
}

Json run_face(const ExperimentConfig& cfg, const DiscreteInstance& inst, Checks&) {
  const auto face = face_of(inst);
  Json out = summary_header(cfg, inst.label);
  merge(out, to_json(summarize(face)));
  Json f = Json::array();
  Json g = Json::array();
  for (double v : face.reference_f) f.push_back(v);
  for (double v : face.reference_g) g.push_back(v);
  out["reference_f"] = std::move(f);
  out["reference_g"] = std::move(g);
  return out;
}

Json run_degeneracy(const ExperimentConfig& cfg, const DiscreteInstance& inst, Checks&) {
  TransportSolution sol;
  const auto face = face_of(inst, &sol);
  const Vector& mu = inst.mu.weights();
  const Vector& nu = inst.nu.weights();
  const auto proj_f = projected_measure_test(mu, nu, inst.cost, sol.value);
  const auto proj_g = projected_measure_test(nu, mu, inst.cost.transposed(), sol.value);
  Json out = summary_header(cfg, inst.label);
  out["ot_value"] = sol.value;
  out["unique"] = uniqueness_test(face, Side::source);
  out["exists_trivial_f"] = proj_f.is_projected;
  out["exists_trivial_g"] = proj_g.is_projected;
  out["all_trivial_f"] = all_trivial_test(face, Side::source);
  out["all_trivial_g"] = all_trivial_test(face, Side::target);
  out["bitrivial"] = bitrivial_check(face);
  out["projection_f"] = to_json(proj_f);
  out["projection_g"] = to_json(proj_g);
  return out;
}

Json run_limit_sample(const ExperimentConfig& cfg, const DiscreteInstance& inst, int jobs,
                      Checks&) {
  const auto& p = cfg.parameters;
  const auto face = face_of(inst);
  const LimitMode mode = p.mode.value_or(LimitMode::one_sample_mu);
  const double delta = p.delta.value_or(0.5);
  const auto set = sample_limit(face, mode, delta, p.draws.value_or(kDefaultLimitDraws), cfg.seed, jobs);
  write_samples(cfg.output_dir / "limit_sample_draws.csv", "draw", set.draws);
  Json out = summary_header(cfg, inst.label);
  out["mode"] = to_string(mode);
  out["delta"] = delta;
  out["count"] = set.count;
  out["ot_value"] = face.ot_value;
  out["summary"] = to_json(summarize_samples(set.draws));
  return out;
}

Json experiment_summary(const ExperimentConfig& cfg, const std::string& label,
                        const ExperimentReport& report, const char* stem) {
  write_samples(cfg.output_dir / (std::string(stem) + "_statistics.csv"), "statistic",
                report.statistic_samples);
  Json out = summary_header(cfg, label);
  out["report"] = to_json(report);
  return out;
}

Json run_clt(const ExperimentConfig& cfg, const DiscreteInstance& inst, int jobs, Checks& checks) {
  const auto& p = cfg.parameters;
  CltOptions opt;
  opt.mode = p.mode.value_or(LimitMode::one_sample_mu);
  opt.reps = need(p.reps, "reps", cfg.task);
  opt.seed = cfg.seed;
  opt.jobs = jobs;
  if (opt.mode != LimitMode::one_sample_nu) opt.n = need(p.n, "n", cfg.task);
  if (opt.mode == LimitMode::one_sample_nu) opt.m = need(p.m, "m", cfg.task);
  if (opt.mode == LimitMode::two_sample) opt.m = p.m.value_or(opt.n);
  // The mu-part of the two-sample statistic carries weight sqrt(m / (n + m)).
  const double delta =
      opt.mode == LimitMode::two_sample
          ? static_cast<double>(opt.m) / static_cast<double>(opt.n + opt.m)
          : 0.5;
  const auto face = face_of(inst);
  const auto limit = sample_limit(face, opt.mode, delta, p.draws.value_or(kDefaultLimitDraws),
                                  derive_seed(cfg.seed, "clt-limit", 0), jobs);
  const auto report = clt_experiment(inst.mu.weights(), inst.nu.weights(), inst.cost, opt,
                                     &limit.draws);
  write_samples(cfg.output_dir / "clt_limit_draws.csv", "draw", limit.draws);
  Json out = experiment_summary(cfg, inst.label, report, "clt");
  out["delta"] = delta;
  out["limit_summary"] = to_json(summarize_samples(limit.draws));
  checks.at_most("ks_distance", report.ks_distance, cfg.thresholds.ks_max);
  return out;
}

Json run_bootstrap(const ExperimentConfig& cfg, const DiscreteInstance& inst, int jobs,
                   Checks& checks) {
  const auto& p = cfg.parameters;
  CoverageOptions opt;
  opt.n = need(p.n, "n", cfg.task);
  opt.k = p.k.value_or(0);
  opt.draws = p.bootstrap_draws.value_or(opt.draws);
  opt.outer = p.outer.value_or(opt.outer);
  opt.alpha = p.alpha.value_or(opt.alpha);
  opt.seed = cfg.seed;
  opt.jobs = jobs;
  const auto report = bootstrap_coverage(inst.mu.weights(), inst.nu.weights(), inst.cost, opt);
  Json out = experiment_summary(cfg, inst.label, report, "bootstrap");
  out["k"] = opt.k == 0 ? default_bootstrap_k(opt.n) : opt.k;
  out["B"] = opt.draws;
  out["alpha"] = opt.alpha;
  checks.at_least("coverage", *report.coverage, cfg.thresholds.coverage_min);
  checks.at_most("coverage", *report.coverage, cfg.thresholds.coverage_max);
  return out;
}

Json run_pivotal(const ExperimentConfig& cfg, const DiscreteInstance& inst, int jobs,
                 Checks& checks) {
  const auto& p = cfg.parameters;
  const auto report = pivotal_experiment(inst.mu.weights(), inst.nu.weights(), inst.cost,
                                         need(p.n, "n", cfg.task), need(p.reps, "reps", cfg.task),
                                         cfg.seed, jobs);
  Json out = experiment_summary(cfg, inst.label, report, "pivotal");
  checks.at_most("ks_distance", report.ks_distance, cfg.thresholds.ks_max);
  return out;
}

Json run_semidiscrete(const ExperimentConfig& cfg, int jobs, Checks& checks) {
  const auto& p = cfg.parameters;
  const auto inst = make_semidiscrete_instance(cfg.instance, p.nodes.value_or(10000));
  const auto state = solve_semidiscrete(inst.mu, inst.nu, inst.spec);
  Json out = summary_header(cfg, inst.label);
  Json f = Json::array();
  Json mass = Json::array();
  for (double v : state.f) f.push_back(v);
  for (double v : state.cell_mass) mass.push_back(v);
  out["value"] = state.objective;
  out["f"] = std::move(f);
  out["cell_mass"] = std::move(mass);
  out["residual"] = state.residual;
  out["iterations"] = state.iterations;
  out["nodes"] = inst.nu.nodes();
  if (p.reps) {
    const auto report = semidiscrete_clt_experiment(inst.mu, inst.nu, inst.spec,
                                                    need(p.n, "n", cfg.task), *p.reps, cfg.seed,
                                                    jobs);
    write_samples(cfg.output_dir / "semidiscrete_statistics.csv", "statistic",
                  report.statistic_samples);
    out["report"] = to_json(report);
    checks.at_most("ks_distance", report.ks_distance, cfg.thresholds.ks_max);
  } else {
    out["report"] = nullptr;
  }
  return out;
}

}  // namespace

int run(const ExperimentConfig& cfg, int jobs, std::ostream& log) {
  try {
    fs::create_directories(cfg.output_dir);
    Checks checks;
    Json summary;
    if (cfg.task == Task::semidiscrete) {
      summary = run_semidiscrete(cfg, jobs, checks);
    } else {
      const auto inst = make_discrete_instance(cfg.instance);
      switch (cfg.task) {
        case Task::solve: summary = run_solve(cfg, inst, checks); break;
        case Task::face: summary = run_face(cfg, inst, checks); break;
        case Task::degeneracy: summary = run_degeneracy(cfg, inst, checks); break;
        case Task::limit_sample: summary = run_limit_sample(cfg, inst, jobs, checks); break;
        case Task::clt: summary = run_clt(cfg, inst, jobs, checks); break;
        case Task::bootstrap: summary = run_bootstrap(cfg, inst, jobs, checks); break;
        case Task::pivotal: summary = run_pivotal(cfg, inst, jobs, checks); break;
        case Task::semidiscrete: break;
      }
    }
    summary["checks"] = checks.json();
    summary["passed"] = checks.passed();
    std::string stem = to_string(cfg.task);
    std::replace(stem.begin(), stem.end(), '-', '_');
    const fs::path out = cfg.output_dir / (stem + ".json");
    write_json_file(out, summary);
    log << "wrote " << out.string() << '\n';
    for (const auto& c : summary["checks"]) {
      log << (c["passed"].get<bool>() ? "pass " : "FAIL ") << c["name"].get<std::string>() << ' '
          << c["value"].get<double>() << ' ' << c["relation"].get<std::string>() << ' '
          << c["limit"].get<double>() << '\n';
    }
    return checks.passed() ? kExitPass : kExitFail;
  } catch (const InvalidInput& e) {
    log << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DegenerateVariance& e) {
    log << "degenerate variance: " << e.what() << '\n';
    return kExitFail;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitFail;
  } catch (const ExperimentAborted& e) {
    log << "experiment aborted: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace otl
