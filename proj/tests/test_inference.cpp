#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "otlimits/fixtures.hpp"
#include "otlimits/inference.hpp"

namespace {

using otl::CostMatrix;
using otl::LimitMode;
using otl::Vector;

// sup_t |F_a(t) - F_b(t)| by evaluating both ECDFs at every sample point
double ks_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  const otl::EmpiricalCdf fa(a), fb(b);
  double best = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double t : *s) best = std::max(best, std::abs(fa(t) - fb(t)));
  }
  return best;
}

TEST(EmpiricalWeights, CountsAreIntegralAndSumToOne) {
  otl::Rng rng(1);
  const Vector w = (Vector(4) << 0.1, 0.0, 0.6, 0.3).finished();
  for (std::size_t n : {1u, 2u, 7u, 1000u}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Vector e = otl::empirical_weights(w, n, rng);
      const Vector counts = e * static_cast<double>(n);
      EXPECT_LE((counts - counts.array().round().matrix()).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_NEAR(counts.sum(), static_cast<double>(n), 1e-9);
      EXPECT_EQ(e(1), 0.0);
    }
  }
}

TEST(EmpiricalWeights, DiracIsExact) {
  otl::Rng rng(2);
  const auto mu = otl::DiscreteMeasure::labeled(Vector::Ones(1));
  EXPECT_EQ(otl::sample_empirical(mu, 37, rng).weights(), mu.weights());
}

TEST(EmpiricalWeights, ConcentratesAtLargeN) {
  otl::Rng rng(3);
  const Vector w = (Vector(5) << 0.05, 0.15, 0.2, 0.25, 0.35).finished();
  const Vector e = otl::empirical_weights(w, 1000000, rng);
  EXPECT_LE((e - w).cwiseAbs().maxCoeff(), 0.005);
}

TEST(EmpiricalWeights, UnbiasedWithMultinomialSpread) {
  otl::Rng rng(4);
  const Vector w = (Vector(3) << 0.2, 0.5, 0.3).finished();
  const int reps = 20000;
  const std::size_t n = 50;
  Vector sum = Vector::Zero(3), sq = Vector::Zero(3);
  for (int r = 0; r < reps; ++r) {
    const Vector e = otl::empirical_weights(w, n, rng);
    sum += e;
    sq += e.cwiseProduct(e);
  }
  const Vector mean = sum / reps;
  const Vector var = sq / reps - mean.cwiseProduct(mean);
  for (int i = 0; i < 3; ++i) {
    const double v = w(i) * (1 - w(i)) / n;
    EXPECT_NEAR(mean(i), w(i), 5 * std::sqrt(v / reps));
    EXPECT_NEAR(var(i) / v, 1.0, 0.05);
  }
}

TEST(KsDistance, Examples) {
  const std::vector<double> a{0, 1}, b{0, 1, 2}, c{5, 6};
  EXPECT_DOUBLE_EQ(otl::ks_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(otl::ks_distance(a, c), 1.0);
  EXPECT_DOUBLE_EQ(otl::ks_distance(a, b), 1.0 / 3);
  EXPECT_DOUBLE_EQ(otl::ks_distance(b, a), 1.0 / 3);
  EXPECT_THROW(otl::ks_distance(std::vector<double>{}, a), otl::InvalidInput);
}

TEST(KsDistance, MergeScanMatchesDirectEvaluation) {
  otl::Rng rng(5);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(1 + trial % 13), b(1 + trial % 7);
    for (auto& x : a) x = small(rng);  // many ties
    for (auto& x : b) x = small(rng) + 0.5 * (trial % 2);
    EXPECT_DOUBLE_EQ(otl::ks_distance(a, b), ks_oracle(a, b));
  }
}

TEST(KsDistance, AgainstAnalyticCdf) {
  std::vector<double> grid;
  for (int i = 1; i <= 4; ++i) grid.push_back(i / 4.0);
  // uniform cdf vs points at 1/4, ..., 1: just left of each point the gap is 1/4
  EXPECT_NEAR(otl::ks_distance(grid, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.25,
              1e-15);
  EXPECT_DOUBLE_EQ(otl::normal_cdf(0.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(otl::normal_cdf(-1.0, 0.0), 0.0);
}

TEST(Clt, DiracStatisticsAreZero) {
  const Vector one = Vector::Ones(1);
  const CostMatrix cost(otl::Matrix::Constant(1, 1, 0.7));
  for (auto mode : {LimitMode::one_sample_mu, LimitMode::one_sample_nu, LimitMode::two_sample}) {
    const auto r = otl::clt_experiment(one, one, cost, {mode, 100, 100, 50, 1, 1});
    ASSERT_EQ(r.statistic_samples.size(), 50u);
    for (double s : r.statistic_samples) EXPECT_EQ(s, 0.0);
  }
}

TEST(Clt, DeterministicAcrossWorkerCounts) {
  const auto fx = otl::FixtureLibrary::discrete("nonunique_3pt");
  otl::CltOptions opt{LimitMode::two_sample, 500, 300, 200, 42, 1};
  const auto a = otl::clt_experiment(fx.mu.weights(), fx.nu.weights(), fx.cost, opt);
  opt.jobs = 4;
  const auto b = otl::clt_experiment(fx.mu.weights(), fx.nu.weights(), fx.cost, opt);
  EXPECT_EQ(a.statistic_samples, b.statistic_samples);
  EXPECT_EQ(a.reps, 200u);
}

TEST(Clt, EmpiricalCostIsBiasedUpward) {
  const auto fx = otl::FixtureLibrary::discrete("nonunique_3pt");
  const auto r = otl::clt_experiment(fx.mu.weights(), fx.nu.weights(), fx.cost,
                                     {LimitMode::one_sample_mu, 200, 0, 4000, 8, 1});
  const double se = r.quantiles.sd / std::sqrt(static_cast<double>(r.reps));
  EXPECT_GE(r.quantiles.mean, -3 * se);
}

TEST(Clt, ReportsKsAgainstSuppliedDraws) {
  const auto fx = otl::FixtureLibrary::discrete("unique_3x3");
  const std::vector<double> limit{-1, 0, 1};
  const auto r = otl::clt_experiment(fx.mu.weights(), fx.nu.weights(), fx.cost,
                                     {LimitMode::one_sample_mu, 100, 0, 30, 2, 1}, &limit);
  EXPECT_DOUBLE_EQ(r.ks_distance, otl::ks_distance(r.statistic_samples, limit));
  EXPECT_THROW(otl::clt_experiment(fx.mu.weights(), fx.nu.weights(), fx.cost,
                                   {LimitMode::one_sample_nu, 100, 0, 30, 2, 1}),
               otl::InvalidInput);
}

TEST(Pivotal, InvariantUnderCostScaling) {
  const auto fx = otl::FixtureLibrary::discrete("unique_3x3");
  const double pop = otl::solve_discrete_ot(fx.mu, fx.nu, fx.cost).value;
  otl::Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector mu_hat = otl::empirical_weights(fx.mu.weights(), 400, rng);
    const double base = otl::pivotal_statistic(mu_hat, fx.nu.weights(), fx.cost, pop, 400);
    for (double t : {0.1, 3.0, 250.0}) {
      const double scaled =
          otl::pivotal_statistic(mu_hat, fx.nu.weights(), fx.cost.scaled(t), t * pop, 400);
      EXPECT_NEAR(scaled, base, 1e-8 * (1 + std::abs(base)));
    }
  }
}

TEST(Pivotal, TrivialPotentialsRaiseDegenerateVariance) {
  for (const char* name : {"dirac_pair", "concentric_circles"}) {
    const auto fx = otl::FixtureLibrary::discrete(name);
    const double pop = otl::solve_discrete_ot(fx.mu, fx.nu, fx.cost).value;
    EXPECT_THROW(otl::pivotal_statistic(fx.mu.weights(), fx.nu.weights(), fx.cost, pop, 100),
                 otl::DegenerateVariance)
        << name;
  }
}

TEST(Pivotal, EmpiricalVarianceIsConsistent) {
  const auto fx = otl::FixtureLibrary::discrete("unique_3x3");
  const auto pop = otl::solve_discrete_ot(fx.mu, fx.nu, fx.cost);
  const double target = otl::normal_limit_params(pop.dual_f, fx.mu.weights());
  std::vector<double> ratios;
  for (std::size_t i = 0; i < 100; ++i) {
    otl::Rng rng = otl::make_stream(77, "variance", i);
    const Vector mu_hat = otl::empirical_weights(fx.mu.weights(), 10000, rng);
    const auto sol = otl::solve_discrete_ot(mu_hat, fx.nu.weights(), fx.cost);
    ratios.push_back(otl::normal_limit_params(sol.dual_f, mu_hat) / target);
  }
  EXPECT_NEAR(otl::quantile(ratios, 0.5), 1.0, 0.1);
}

TEST(Bootstrap, DiracDrawsAreZero) {
  const Vector one = Vector::Ones(1);
  const Vector nu = (Vector(2) << 0.4, 0.6).finished();
  const CostMatrix cost((otl::Matrix(1, 2) << 0.3, 0.8).finished());
  const auto b = otl::bootstrap_kn(one, nu, cost, 1000, 100, 200, 3);
  for (double d : b.draws) EXPECT_EQ(d, 0.0);
  EXPECT_DOUBLE_EQ(b.ci_lower, b.ot_hat);
  EXPECT_DOUBLE_EQ(b.ci_upper, b.ot_hat);
}

TEST(Bootstrap, FullSizeResamplingApproximatesTheNormalLimit) {
  const auto fx = otl::FixtureLibrary::discrete("unique_3x3");
  const auto pop = otl::solve_discrete_ot(fx.mu, fx.nu, fx.cost);
  const double var = otl::normal_limit_params(pop.dual_f, fx.mu.weights());
  otl::Rng rng(12);
  const std::size_t n = 5000;
  const Vector mu_hat = otl::empirical_weights(fx.mu.weights(), n, rng);
  const auto b = otl::bootstrap_kn(mu_hat, fx.nu.weights(), fx.cost, n, n, 2000, 13);
  EXPECT_LE(otl::ks_distance(b.draws, [var](double x) { return otl::normal_cdf(x, var); }), 0.06);
  EXPECT_LT(b.ci_lower, b.ci_upper);
}

TEST(Bootstrap, IntervalUsesTheDocumentedQuantiles) {
  const auto fx = otl::FixtureLibrary::discrete("nonunique_3pt");
  otl::Rng rng(14);
  const Vector mu_hat = otl::empirical_weights(fx.mu.weights(), 900, rng);
  const auto b = otl::bootstrap_kn(mu_hat, fx.nu.weights(), fx.cost, 900, 94, 300, 15, 0.2);
  EXPECT_DOUBLE_EQ(b.q_low, otl::quantile(b.draws, 0.1));
  EXPECT_DOUBLE_EQ(b.q_high, otl::quantile(b.draws, 0.9));
  EXPECT_DOUBLE_EQ(b.ci_lower, b.ot_hat - b.q_high / 30.0);
  EXPECT_DOUBLE_EQ(b.ci_upper, b.ot_hat - b.q_low / 30.0);
  EXPECT_THROW(otl::bootstrap_kn(mu_hat, fx.nu.weights(), fx.cost, 900, 94, 99, 15),
               otl::InvalidInput);
}

TEST(Bootstrap, DefaultK) {
  EXPECT_EQ(otl::default_bootstrap_k(1000), 100u);
  EXPECT_EQ(otl::default_bootstrap_k(10000), 465u);
  EXPECT_EQ(otl::default_bootstrap_k(1), 1u);
}

TEST(Replications, FailurePolicy) {
  std::vector<otl::ReplicationFailure> failures;
  auto flaky = [](std::size_t every) {
    return [every](std::size_t i) -> double {
      if (i % every == 3) throw otl::SolverError("stalled");
      return static_cast<double>(i);
    };
  };
  const auto kept = otl::run_replications(200, 2, flaky(1000), failures);
  EXPECT_EQ(kept.size(), 199u);
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_EQ(failures[0].index, 3u);

  failures.clear();
  EXPECT_THROW(otl::run_replications(200, 2, flaky(50), failures), otl::ExperimentAborted);

  failures.clear();
  EXPECT_THROW(otl::run_replications(
                   10, 1, [](std::size_t) -> double { throw otl::InvalidInput("bad"); }, failures),
               otl::InvalidInput);
}

}  // namespace
