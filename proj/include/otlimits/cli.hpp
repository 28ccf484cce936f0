#ifndef OTLIMITS_CLI_HPP
#define OTLIMITS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "otlimits/io.hpp"
#include "otlimits/measures.hpp"
#include "otlimits/semidiscrete.hpp"

namespace otl {

enum class Task { solve, face, degeneracy, limit_sample, clt, bootstrap, pivotal, semidiscrete };

std::string to_string(Task task);
/// Throws InvalidInput on an unknown name.
Task task_from_string(const std::string& name);

/// Measures and cost, either a named fixture or given inline / by file.
struct InstanceConfig {
  std::optional<std::string> fixture;
  Json mu;    // measure document (files already resolved)
  Json nu;    // measure document, or density document for semidiscrete
  Json cost;  // {"kind": ...} (files already resolved)
};

struct Parameters {
  std::optional<std::size_t> n, m, reps, draws, k, bootstrap_draws, outer;
  std::optional<double> delta, alpha;
  std::optional<LimitMode> mode;
  std::optional<int> nodes;
};

struct Thresholds {
  std::optional<double> ks_max;
  std::optional<double> coverage_min;
  std::optional<double> coverage_max;
};

struct ExperimentConfig {
  Task task = Task::solve;
  std::uint64_t seed = 0;
  InstanceConfig instance;
  Parameters parameters;
  Thresholds thresholds;
  std::filesystem::path output_dir = ".";
};

/// Validates a config document. File references resolve against
/// `base_dir`. When `task` is given it must agree with a "task" key in the
/// document, if present. Throws InvalidInput on any schema violation.
ExperimentConfig parse_config(const Json& doc, const std::filesystem::path& base_dir,
                              std::optional<Task> task = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Task> task = std::nullopt);

/// Discrete instance built from a config. Fixtures are checked against their
/// recorded face properties.
struct DiscreteInstance {
  std::string label;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  CostMatrix cost;
};

struct SemidiscreteInstance {
  std::string label;
  DiscreteMeasure mu;
  DensityMeasure1D nu;
  CostSpec spec;
};

DiscreteInstance make_discrete_instance(const InstanceConfig& config);
SemidiscreteInstance make_semidiscrete_instance(const InstanceConfig& config, int nodes);

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one task, writes its JSON summary and CSV dumps into the output
/// directory and returns the exit status: 0 if every declared threshold
/// holds, 1 on a threshold or solver failure, 2 on invalid input.
int run(const ExperimentConfig& config, int jobs, std::ostream& log);

/// Worker count from a flag value, else OTLIMITS_JOBS, else 1.
int resolve_jobs(std::optional<int> flag);

}  // namespace otl

#endif  // OTLIMITS_CLI_HPP
