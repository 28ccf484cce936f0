#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "otlimits/cli.hpp"
#include "schema_check.hpp"

namespace {

namespace fs = std::filesystem;
using otl::Json;

class Workspace : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("otlimits-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const Json& doc) const {
    const auto p = dir_ / name;
    otl::write_json_file(p, doc);
    return p;
  }

  // Parses `doc` as if loaded from the workspace, runs it and returns the
  // exit status; the summary lands in `out`.
  int run(const Json& doc, const std::string& task, const std::string& out, int jobs = 1) {
    auto cfg = otl::parse_config(doc, dir_, otl::task_from_string(task));
    cfg.output_dir = dir_ / out;
    log_.str("");
    return otl::run(cfg, jobs, log_);
  }

  Json summary(const std::string& out, const std::string& file) const {
    return otl::read_json_file(dir_ / out / file);
  }

  std::string bytes(const std::string& out, const std::string& file) const {
    std::ifstream in(dir_ / out / file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream log_;
};

Json fixture(const std::string& name, Json params = Json::object(),
             Json thresholds = Json::object()) {
  Json doc{{"seed", 2024}, {"instance", {{"fixture", name}}}};
  if (!params.empty()) doc["parameters"] = std::move(params);
  if (!thresholds.empty()) doc["thresholds"] = std::move(thresholds);
  return doc;
}

Json line_measure(std::vector<double> xs, std::vector<double> ws) {
  Json points = Json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    points.push_back({{"id", static_cast<int>(i)}, {"coords", {xs[i]}}});
  }
  return {{"points", points}, {"weights", ws}};
}

schema_check::Validator schema(const std::string& name) {
  return schema_check::Validator(
      otl::read_json_file(fs::path(OTLIMITS_SCHEMA_DIR) / (name + ".schema.json")));
}

TEST(Tasks, NamesRoundTrip) {
  for (const char* name : {"solve", "face", "degeneracy", "limit-sample", "clt", "bootstrap",
                           "pivotal", "semidiscrete"}) {
    EXPECT_EQ(otl::to_string(otl::task_from_string(name)), name);
  }
  EXPECT_THROW(otl::task_from_string("limit_sample"), otl::InvalidInput);
}

TEST(MeasureJson, StrictParsing) {
  const Json ok = line_measure({0, 1}, {0.25, 0.75});
  const auto m = otl::measure_from_json(ok);
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(otl::measure_to_json(m), ok);

  Json extra = ok;
  extra["name"] = "x";
  EXPECT_THROW(otl::measure_from_json(extra), otl::InvalidInput);
  Json point_extra = ok;
  point_extra["points"][0]["mass"] = 1;
  EXPECT_THROW(otl::measure_from_json(point_extra), otl::InvalidInput);
  Json short_weights = ok;
  short_weights["weights"] = {1.0};
  EXPECT_THROW(otl::measure_from_json(short_weights), otl::InvalidInput);
  Json mixed = ok;
  mixed["points"][1].erase("coords");
  EXPECT_THROW(otl::measure_from_json(mixed), otl::InvalidInput);
  Json bad_weights = ok;
  bad_weights["weights"] = {0.5, 0.6};
  EXPECT_THROW(otl::measure_from_json(bad_weights), otl::InvalidInput);

  const Json labels{{"points", {{{"id", 7}}, {{"id", 9}}}}, {"weights", {0.5, 0.5}}};
  EXPECT_FALSE(otl::measure_from_json(labels).has_coords());
}

TEST(MatrixJson, StrictParsing) {
  EXPECT_EQ(otl::matrix_from_json(Json{{"matrix", {{1, 2}, {3, 4}}}})(1, 0), 3.0);
  EXPECT_THROW(otl::matrix_from_json(Json{{"matrix", {{1, 2}, {3}}}}), otl::InvalidInput);
  EXPECT_THROW(otl::matrix_from_json(Json{{"matrix", {{1, 2}}}, {"rows", 1}}), otl::InvalidInput);
  EXPECT_THROW(otl::matrix_from_json(Json{{"matrix", {{1, "a"}}}}), otl::InvalidInput);
}

TEST(Csv, FieldsAndNumbers) {
  EXPECT_EQ(otl::csv_field("plain"), "plain");
  EXPECT_EQ(otl::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(otl::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(otl::csv_number(0.1), "0.10000000000000001");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng);
    EXPECT_EQ(std::strtod(otl::csv_number(x).c_str(), nullptr), x);
  }
}

TEST_F(Workspace, CsvLayout) {
  otl::write_csv(dir_ / "t.csv", {"index", "value"}, {{0, 1}, {0.5, -2}});
  std::ifstream in(dir_ / "t.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "index,value\r\n0,0.5\r\n1,-2\r\n");
  EXPECT_THROW(otl::write_csv(dir_ / "u.csv", {"a", "b"}, {{1}, {1, 2}}), std::invalid_argument);
}

TEST_F(Workspace, ConfigValidation) {
  const Json good = fixture("unique_3x3", {{"n", 10}, {"reps", 5}}, {{"ks_max", 0.5}});
  EXPECT_NO_THROW(otl::parse_config(good, dir_, otl::Task::clt));
  auto with = [&](auto edit) {
    Json doc = good;
    edit(doc);
    return doc;
  };
  auto rejects = [&](const Json& doc, std::optional<otl::Task> task = otl::Task::clt) {
    EXPECT_THROW(otl::parse_config(doc, dir_, task), otl::InvalidInput) << doc.dump();
  };
  rejects(with([](Json& d) { d.erase("seed"); }));
  rejects(with([](Json& d) { d["seed"] = -1; }));
  rejects(with([](Json& d) { d["extra"] = 1; }));
  rejects(with([](Json& d) { d["task"] = "pivotal"; }));
  rejects(with([](Json& d) { d["thresholds"]["ks_max"] = 0; }));
  rejects(with([](Json& d) { d["thresholds"]["ks_min"] = 0.1; }));
  rejects(with([](Json& d) { d["parameters"]["B"] = 50; }));
  rejects(with([](Json& d) { d["parameters"]["delta"] = 1.0; }));
  rejects(with([](Json& d) { d["parameters"]["mode"] = "both"; }));
  rejects(with([](Json& d) { d["parameters"]["n"] = 0; }));
  rejects(with([](Json& d) { d["instance"]["fixture"] = "nope"; }));
  rejects(with([](Json& d) { d["instance"]["mu"] = 1; }));
  rejects(good, std::nullopt);
  EXPECT_EQ(otl::parse_config(with([](Json& d) { d["task"] = "clt"; }), dir_).task, otl::Task::clt);

  const Json inline_doc{{"seed", 1},
                        {"instance",
                         {{"mu", line_measure({0}, {1})},
                          {"nu", line_measure({1}, {1})},
                          {"cost", {{"kind", "cubic"}}}}}};
  rejects(inline_doc, otl::Task::solve);
}

TEST_F(Workspace, FileReferencesResolveAgainstTheConfigDirectory) {
  fs::create_directories(dir_ / "data");
  write("data/mu.json", line_measure({0, 2}, {0.5, 0.5}));
  write("data/nu.json", line_measure({1}, {1.0}));
  write("data/cost.json", Json{{"matrix", {{3}, {5}}}});
  const Json doc{{"seed", 1},
                 {"instance",
                  {{"mu", {{"file", "data/mu.json"}}},
                   {"nu", {{"file", "data/nu.json"}}},
                   {"cost", {{"kind", "explicit"}, {"file", "data/cost.json"}}}}},
                 {"output", {{"dir", "results"}}}};
  const auto path = write("config.json", doc);
  const auto cfg = otl::load_config(path, otl::Task::solve);
  EXPECT_EQ(cfg.output_dir, dir_ / "results");
  EXPECT_EQ(otl::run(cfg, 1, log_), 0);
  EXPECT_DOUBLE_EQ(otl::read_json_file(dir_ / "results" / "solve.json")["value"].get<double>(), 4.0);
}

TEST_F(Workspace, SolveOnDiracPair) {
  ASSERT_EQ(run(fixture("dirac_pair"), "solve", "o"), 0);
  const auto s = summary("o", "solve.json");
  EXPECT_DOUBLE_EQ(s["value"].get<double>(), 1.0);
  EXPECT_TRUE(schema("solve").validate(s).empty());
}

TEST_F(Workspace, InlineInstanceWithParametricCost) {
  const Json doc{{"seed", 3},
                 {"instance",
                  {{"mu", line_measure({0, 1}, {0.5, 0.5})},
                   {"nu", line_measure({0.5, 3}, {0.5, 0.5})},
                   {"cost", {{"kind", "thresholded"}, {"p", 1}, {"threshold", 1.5}}}}}};
  ASSERT_EQ(run(doc, "solve", "o"), 0);
  EXPECT_NEAR(summary("o", "solve.json")["value"].get<double>(), 0.5 * 0.5 + 0.5 * 1.5, 1e-15);
}

TEST_F(Workspace, DegeneracyOnAnnulus) {
  ASSERT_EQ(run(fixture("fig1a_annulus"), "degeneracy", "o"), 0);
  const auto s = summary("o", "degeneracy.json");
  EXPECT_TRUE(s["exists_trivial_f"].get<bool>());
  EXPECT_FALSE(s["exists_trivial_g"].get<bool>());
  EXPECT_TRUE(schema("degeneracy").validate(s).empty());
}

TEST_F(Workspace, CltOnNonUniqueFixturePassesDeclaredThreshold) {
  const Json doc = fixture("nonunique_3pt", {{"n", 10000}, {"reps", 2000}, {"M", 100000}},
                           {{"ks_max", 0.05}});
  EXPECT_EQ(run(doc, "clt", "o", 2), 0) << log_.str();
  EXPECT_TRUE(summary("o", "clt.json")["passed"].get<bool>());
}

TEST_F(Workspace, ThresholdFailureExitsOne) {
  const Json doc = fixture("nonunique_3pt", {{"n", 100}, {"reps", 50}, {"M", 500}},
                           {{"ks_max", 1e-9}});
  EXPECT_EQ(run(doc, "clt", "o"), 1);
  const auto s = summary("o", "clt.json");
  EXPECT_FALSE(s["passed"].get<bool>());
  EXPECT_FALSE(s["checks"][0]["passed"].get<bool>());
}

TEST_F(Workspace, InvalidInstanceExitsTwo) {
  const Json doc{{"seed", 1},
                 {"instance",
                  {{"mu", line_measure({0, 1}, {0.7, 0.7})},
                   {"nu", line_measure({1}, {1.0})},
                   {"cost", {{"kind", "power"}, {"p", 1}}}}}};
  EXPECT_EQ(run(doc, "solve", "o"), 2);
  EXPECT_EQ(run(fixture("semidiscrete_3atom"), "solve", "o"), 2);
  EXPECT_EQ(run(fixture("dirac_pair"), "semidiscrete", "o"), 2);
  EXPECT_EQ(run(fixture("dirac_pair"), "pivotal", "o"), 2);  // missing n and reps
}

TEST_F(Workspace, DegenerateVarianceExitsOne) {
  EXPECT_EQ(run(fixture("dirac_pair", {{"n", 100}, {"reps", 10}}), "pivotal", "o"), 1);
}

// Every CSV-writing task, run twice with different worker counts.
TEST_F(Workspace, RerunsAreByteIdenticalAndSummariesMatchSchemas) {
  struct Case {
    std::string task;
    Json doc;
    std::vector<std::string> csvs;
  };
  const std::vector<Case> cases{
      {"limit-sample", fixture("nonunique_3pt", {{"M", 2000}, {"mode", "two_sample"}, {"delta", 0.3}}),
       {"limit_sample_draws.csv"}},
      {"clt", fixture("nonunique_3pt", {{"n", 500}, {"m", 700}, {"reps", 200}, {"M", 2000}, {"mode", "two_sample"}}),
       {"clt_statistics.csv", "clt_limit_draws.csv"}},
      {"pivotal", fixture("unique_3x3", {{"n", 500}, {"reps", 200}}), {"pivotal_statistics.csv"}},
      {"bootstrap", fixture("nonunique_3pt", {{"n", 400}, {"B", 100}, {"outer", 20}}),
       {"bootstrap_statistics.csv"}},
      {"semidiscrete", fixture("semidiscrete_3atom", {{"n", 500}, {"reps", 50}, {"nodes", 2000}}),
       {"semidiscrete_statistics.csv"}},
      {"face", fixture("nonunique_3pt"), {}},
      {"solve", fixture("unique_3x3"), {}},
      {"degeneracy", fixture("concentric_circles"), {}},
  };
  for (const auto& c : cases) {
    ASSERT_EQ(run(c.doc, c.task, "a", 1), 0) << c.task << ": " << log_.str();
    ASSERT_EQ(run(c.doc, c.task, "b", 3), 0) << c.task << ": " << log_.str();
    for (const auto& csv : c.csvs) {
      const auto first = bytes("a", csv);
      EXPECT_FALSE(first.empty()) << csv;
      EXPECT_EQ(first, bytes("b", csv)) << csv;
    }
    std::string stem = c.task;
    std::replace(stem.begin(), stem.end(), '-', '_');
    const auto errors = schema(stem).validate(summary("a", stem + ".json"));
    EXPECT_TRUE(errors.empty()) << c.task << ": " << (errors.empty() ? "" : errors.front());
    EXPECT_TRUE(schema("config").validate(c.doc).empty()) << c.task;
  }
}

TEST(Schema, ValidatorRejectsViolations) {
  const auto v = schema("solve");
  const Json base{{"task", "solve"},     {"seed", 1},        {"instance", "x"},
                  {"value", 1.0},        {"plan", {{1.0}}},  {"dual_f", {1.0}},
                  {"dual_g", {0.0}},     {"checks", Json::array()}, {"passed", true},
                  {"diagnostics", {{"marginal_error", 0}, {"min_plan_entry", 1}, {"dual_infeasibility", 0},
                                   {"slackness_violation", 0}, {"gap", 0}}}};
  EXPECT_TRUE(v.validate(base).empty());
  Json wrong_task = base;
  wrong_task["task"] = "face";
  EXPECT_FALSE(v.validate(wrong_task).empty());
  Json extra = base;
  extra["surprise"] = 1;
  EXPECT_FALSE(v.validate(extra).empty());
  Json missing = base;
  missing.erase("value");
  EXPECT_FALSE(v.validate(missing).empty());
  const auto cfg = schema("config");
  EXPECT_FALSE(cfg.validate(Json{{"instance", {{"fixture", "dirac_pair"}}}}).empty());
  EXPECT_FALSE(cfg.validate(Json{{"seed", 1}, {"instance", {{"fixture", "dirac_pair"}}},
                                 {"thresholds", {{"ks_max", 0}}}})
                   .empty());
}

TEST(Jobs, FlagThenEnvironmentThenOne) {
  ::unsetenv("OTLIMITS_JOBS");
  EXPECT_EQ(otl::resolve_jobs(std::nullopt), 1);
  EXPECT_EQ(otl::resolve_jobs(3), 3);
  ::setenv("OTLIMITS_JOBS", "5", 1);
  EXPECT_EQ(otl::resolve_jobs(std::nullopt), 5);
  EXPECT_EQ(otl::resolve_jobs(2), 2);
  ::setenv("OTLIMITS_JOBS", "many", 1);
  EXPECT_THROW(otl::resolve_jobs(std::nullopt), otl::InvalidInput);
  ::unsetenv("OTLIMITS_JOBS");
  EXPECT_THROW(otl::resolve_jobs(0), otl::InvalidInput);
}

TEST_F(Workspace, CommandLineExitCodes) {
  const auto cfg = write("c.json", fixture("dirac_pair"));
  const std::string bin = OTLIMITS_BINARY;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  const std::string out = (dir_ / "cli").string();
  EXPECT_EQ(status(bin + " solve --config " + cfg.string() + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir_ / "cli" / "solve.json"));
  EXPECT_EQ(status(bin + " solve --config " + cfg.string() + " --seed 9 --jobs 2 --out " + out), 0);
  EXPECT_EQ(otl::read_json_file(dir_ / "cli" / "solve.json")["seed"].get<int>(), 9);
  EXPECT_EQ(status(bin + " solve"), 2);
  EXPECT_EQ(status(bin + " sovle --config " + cfg.string()), 2);
  EXPECT_EQ(status(bin + " solve --config " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(status(bin + " solve --config " + cfg.string() + " --jobs 0"), 2);
  EXPECT_EQ(status("OTLIMITS_JOBS=x " + bin + " solve --config " + cfg.string() + " --out " + out), 2);
  const auto piv = write("p.json", fixture("dirac_pair", {{"n", 10}, {"reps", 5}}));
  EXPECT_EQ(status(bin + " pivotal --config " + piv.string() + " --out " + out), 1);
}

}  // namespace
