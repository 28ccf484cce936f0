#ifndef OTLIMITS_INFERENCE_HPP
#define OTLIMITS_INFERENCE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otlimits/limit_law.hpp"
#include "otlimits/measures.hpp"
#include "otlimits/ot_core.hpp"
#include "otlimits/seeding.hpp"

namespace otl {

struct ReplicationFailure {
  std::size_t index = 0;
  std::string message;
};

/// Seeded Monte Carlo run. statistic_samples holds one entry per successful
/// replication, in replication order.
struct ExperimentReport {
  std::string mode;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> statistic_samples;
  std::vector<double> limit_samples;  // empty when the reference law is analytic
  std::string limit_reference;        // what the statistics were compared against
  double ks_distance = 0.0;
  SampleSummary quantiles;
  std::optional<double> coverage;
  std::optional<double> limit_variance;
  double population_value = 0.0;
  double wall_time = 0.0;
  std::vector<ReplicationFailure> failures;
};

/// Multinomial(n, weights) / n, by conditional binomials.
Vector empirical_weights(const Vector& weights, std::size_t n, Rng& rng);
DiscreteMeasure sample_empirical(const DiscreteMeasure& mu, std::size_t n, Rng& rng);

/// Kolmogorov-Smirnov distance between two samples (exact merge scan).
double ks_distance(std::span<const double> a, std::span<const double> b);
/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf);

double normal_cdf(double x, double variance);

/// Differences below this are reported as exactly zero, so that an instance
/// whose OT value never moves yields an exactly zero statistic.
double snap_tolerance(const CostMatrix& cost);

struct CltOptions {
  LimitMode mode = LimitMode::one_sample_mu;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Replications of the scaled, centred empirical OT statistic in the chosen
/// mode. When `limit` is given the KS distance to its draws is recorded.
/// Solver failures are logged per replication; more than 1% aborts with
/// ExperimentAborted.
ExperimentReport clt_experiment(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                const CltOptions& options,
                                const std::vector<double>* limit = nullptr);

/// sqrt(n) (OT(mu_hat, nu) - population) / sqrt(Var_{mu_hat}[f_n]) with f_n
/// the solver's normalised dual for (mu_hat, nu). Throws DegenerateVariance
/// when that variance is at most 1e-12.
double pivotal_statistic(const Vector& mu_hat, const Vector& nu, const CostMatrix& cost,
                         double population_ot, std::size_t n);

/// One-sample replications of the pivotal statistic, compared with N(0, 1).
ExperimentReport pivotal_experiment(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                    std::size_t n, std::size_t reps, std::uint64_t seed,
                                    int jobs = 1);

struct BootstrapResult {
  std::vector<double> draws;  // sqrt(k) (OT(mu*_k, nu) - OT(mu_hat, nu))
  double ot_hat = 0.0;
  double alpha = 0.1;
  double q_low = 0.0;
  double q_high = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

inline std::size_t default_bootstrap_k(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) - 1e-9));
}

/// k-out-of-n bootstrap around mu_hat (built from n observations) and the
/// two-sided interval [ot_hat - q_{1-a/2} / sqrt(n), ot_hat - q_{a/2} / sqrt(n)].
BootstrapResult bootstrap_kn(const Vector& mu_hat, const Vector& nu, const CostMatrix& cost,
                             std::size_t n, std::size_t k, std::size_t draws,
                             std::uint64_t seed, double alpha = 0.1, int jobs = 1);

struct CoverageOptions {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t draws = 500;
  std::size_t outer = 300;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Fraction of outer replications whose bootstrap interval covers OT(mu, nu).
ExperimentReport bootstrap_coverage(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                    const CoverageOptions& options);

/// Runs fn(i) for every replication, collecting values in order and logging
/// SolverError failures; aborts when more than 1% fail.
std::vector<double> run_replications(std::size_t reps, int jobs,
                                     const std::function<double(std::size_t)>& fn,
                                     std::vector<ReplicationFailure>& failures);

}  // namespace otl

#endif  // OTLIMITS_INFERENCE_HPP
