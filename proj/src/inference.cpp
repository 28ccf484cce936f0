#include "otlimits/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>

#include "otlimits/parallel.hpp"

namespace otl {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Vector empirical_weights(const Vector& weights, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidInput("sample_empirical: n must be >= 1");
  Vector counts = Vector::Zero(weights.size());
  std::size_t left = n;
  double mass_left = 1.0;
  for (Index i = 0; i < weights.size() && left > 0; ++i) {
    if (i == weights.size() - 1) {
      counts(i) = static_cast<double>(left);
      break;
    }
    const double p = mass_left > 0.0 ? std::clamp(weights(i) / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::size_t> binom(left, p);
    const std::size_t k = p > 0.0 ? binom(rng) : 0;
    counts(i) = static_cast<double>(k);
    left -= k;
    mass_left -= weights(i);
  }
  // a last atom of zero mass can only receive draws through rounding; move
  // them back to the heaviest atom
  const Index last = weights.size() - 1;
  if (weights(last) <= 0.0 && counts(last) > 0.0) {
    Index heavy = 0;
    weights.maxCoeff(&heavy);
    counts(heavy) += counts(last);
    counts(last) = 0.0;
  }
  return counts / static_cast<double>(n);
}

DiscreteMeasure sample_empirical(const DiscreteMeasure& mu, std::size_t n, Rng& rng) {
  Vector w = empirical_weights(mu.weights(), n, rng);
  return mu.reweighted(w / w.sum());
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return best;
}

double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw InvalidInput("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    best = std::max({best, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return best;
}

double normal_cdf(double x, double variance) {
  if (variance <= 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double snap_tolerance(const CostMatrix& cost) { return 1e-12 * (1.0 + cost.sup_bound()); }

std::vector<double> run_replications(std::size_t reps, int jobs,
                                     const std::function<double(std::size_t)>& fn,
                                     std::vector<ReplicationFailure>& failures) {
  std::vector<double> values(reps, 0.0);
  std::vector<char> ok(reps, 0);
  std::mutex log_mutex;
  parallel_for(reps, jobs, [&](std::size_t i) {
    try {
      values[i] = fn(i);
      ok[i] = 1;
    } catch (const SolverError& e) {
      std::lock_guard<std::mutex> lock(log_mutex);
      failures.push_back({i, e.what()});
    }
  });
  std::sort(failures.begin(), failures.end(),
            [](const ReplicationFailure& a, const ReplicationFailure& b) { return a.index < b.index; });
  if (failures.size() * 100 > reps) {
    throw ExperimentAborted(std::to_string(failures.size()) + " of " + std::to_string(reps) +
                            " replications failed; first: " + failures.front().message);
  }
  std::vector<double> kept;
  kept.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    if (ok[i]) kept.push_back(values[i]);
  }
  return kept;
}

ExperimentReport clt_experiment(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                const CltOptions& options, const std::vector<double>* limit) {
  const auto start = std::chrono::steady_clock::now();
  const bool resample_mu = options.mode != LimitMode::one_sample_nu;
  const bool resample_nu = options.mode != LimitMode::one_sample_mu;
  if ((resample_mu && options.n == 0) || (resample_nu && options.m == 0) || options.reps == 0) {
    throw InvalidInput("clt_experiment: sample sizes and reps must be positive for this mode");
  }
  ExperimentReport report;
  report.mode = to_string(options.mode);
  report.n = resample_mu ? options.n : 0;
  report.m = resample_nu ? options.m : 0;
  report.reps = options.reps;
  report.seed = options.seed;
  report.population_value = solve_discrete_ot(mu, nu, cost).value;

  const auto n = static_cast<double>(options.n);
  const auto m = static_cast<double>(options.m);
  double scale = 0.0;
  switch (options.mode) {
    case LimitMode::one_sample_mu: scale = std::sqrt(n); break;
    case LimitMode::one_sample_nu: scale = std::sqrt(m); break;
    case LimitMode::two_sample: scale = std::sqrt(n * m / (n + m)); break;
  }
  const std::string stream = "clt-" + report.mode;
  const double snap = snap_tolerance(cost);
  report.statistic_samples = run_replications(
      options.reps, options.jobs,
      [&](std::size_t i) {
        Rng rng = make_stream(options.seed, stream, i);
        const Vector mu_hat = resample_mu ? empirical_weights(mu, options.n, rng) : mu;
        const Vector nu_hat = resample_nu ? empirical_weights(nu, options.m, rng) : nu;
        const double diff = solve_discrete_ot(mu_hat, nu_hat, cost).value - report.population_value;
        return std::abs(diff) <= snap ? 0.0 : scale * diff;
      },
      report.failures);

  report.quantiles = summarize_samples(report.statistic_samples);
  if (limit != nullptr && !limit->empty()) {
    report.limit_samples = *limit;
    report.limit_reference = "limit-law draws";
    report.ks_distance = ks_distance(report.statistic_samples, *limit);
  }
  report.wall_time = seconds_since(start);
  return report;
}

double pivotal_statistic(const Vector& mu_hat, const Vector& nu, const CostMatrix& cost,
                         double population_ot, std::size_t n) {
  if (n == 0) throw InvalidInput("pivotal_statistic: n must be >= 1");
  const auto sol = solve_discrete_ot(mu_hat, nu, cost);
  const double variance = normal_limit_params(sol.dual_f, mu_hat);
  if (variance <= 1e-12) {
    throw DegenerateVariance("pivotal_statistic: empirical variance of the potential is " +
                             std::to_string(variance) + " (potential constant on the sample)");
  }
  double diff = sol.value - population_ot;
  if (std::abs(diff) <= snap_tolerance(cost)) diff = 0.0;
  return std::sqrt(static_cast<double>(n)) * diff / std::sqrt(variance);
}

ExperimentReport pivotal_experiment(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                    std::size_t n, std::size_t reps, std::uint64_t seed,
                                    int jobs) {
  const auto start = std::chrono::steady_clock::now();
  if (n == 0 || reps == 0) throw InvalidInput("pivotal_experiment: n and reps must be positive");
  ExperimentReport report;
  report.mode = "pivotal";
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.population_value = solve_discrete_ot(mu, nu, cost).value;
  report.statistic_samples = run_replications(
      reps, jobs,
      [&](std::size_t i) {
        Rng rng = make_stream(seed, "pivotal", i);
        return pivotal_statistic(empirical_weights(mu, n, rng), nu, cost,
                                 report.population_value, n);
      },
      report.failures);
  report.quantiles = summarize_samples(report.statistic_samples);
  report.limit_reference = "normal(0, 1)";
  report.limit_variance = 1.0;
  report.ks_distance =
      ks_distance(report.statistic_samples, [](double x) { return normal_cdf(x, 1.0); });
  report.wall_time = seconds_since(start);
  return report;
}

BootstrapResult bootstrap_kn(const Vector& mu_hat, const Vector& nu, const CostMatrix& cost,
                             std::size_t n, std::size_t k, std::size_t draws,
                             std::uint64_t seed, double alpha, int jobs) {
  if (k == 0 || n == 0) throw InvalidInput("bootstrap_kn: n and k must be >= 1");
  if (draws < 100) throw InvalidInput("bootstrap_kn: need at least 100 bootstrap draws");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("bootstrap_kn: alpha must lie in (0, 1)");
  BootstrapResult out;
  out.alpha = alpha;
  out.ot_hat = solve_discrete_ot(mu_hat, nu, cost).value;
  const double snap = snap_tolerance(cost);
  const double root_k = std::sqrt(static_cast<double>(k));
  std::vector<ReplicationFailure> failures;
  out.draws = run_replications(
      draws, jobs,
      [&](std::size_t b) {
        Rng rng = make_stream(seed, "bootstrap", b);
        const double diff =
            solve_discrete_ot(empirical_weights(mu_hat, k, rng), nu, cost).value - out.ot_hat;
        return std::abs(diff) <= snap ? 0.0 : root_k * diff;
      },
      failures);
  std::vector<double> sorted = out.draws;
  std::sort(sorted.begin(), sorted.end());
  out.q_low = quantile_sorted(sorted, alpha / 2.0);
  out.q_high = quantile_sorted(sorted, 1.0 - alpha / 2.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  out.ci_lower = out.ot_hat - out.q_high / root_n;
  out.ci_upper = out.ot_hat - out.q_low / root_n;
  return out;
}

ExperimentReport bootstrap_coverage(const Vector& mu, const Vector& nu, const CostMatrix& cost,
                                    const CoverageOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.n == 0 || options.outer == 0) {
    throw InvalidInput("bootstrap_coverage: n and outer replications must be positive");
  }
  const std::size_t k = options.k == 0 ? default_bootstrap_k(options.n) : options.k;
  ExperimentReport report;
  report.mode = "bootstrap";
  report.n = options.n;
  report.reps = options.outer;
  report.seed = options.seed;
  report.population_value = solve_discrete_ot(mu, nu, cost).value;
  std::vector<char> covered(options.outer, 0);
  const double root_n = std::sqrt(static_cast<double>(options.n));
  const double snap = snap_tolerance(cost);
  report.statistic_samples = run_replications(
      options.outer, options.jobs,
      [&](std::size_t i) {
        Rng rng = make_stream(options.seed, "bootstrap-outer", i);
        const Vector mu_hat = empirical_weights(mu, options.n, rng);
        const auto boot = bootstrap_kn(mu_hat, nu, cost, options.n, k, options.draws,
                                       derive_seed(options.seed, "bootstrap-inner", i),
                                       options.alpha, 1);
        covered[i] = boot.ci_lower <= report.population_value &&
                     report.population_value <= boot.ci_upper;
        const double diff = boot.ot_hat - report.population_value;
        return std::abs(diff) <= snap ? 0.0 : root_n * diff;
      },
      report.failures);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < options.outer; ++i) hits += covered[i] ? 1 : 0;
  report.coverage = static_cast<double>(hits) /
                    static_cast<double>(options.outer - report.failures.size());
  report.quantiles = summarize_samples(report.statistic_samples);
  report.limit_reference = "k-out-of-n bootstrap, k = " + std::to_string(k);
  report.wall_time = seconds_since(start);
  return report;
}

}  // namespace otl
