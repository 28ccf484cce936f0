#ifndef OTLIMITS_LIMIT_LAW_HPP
#define OTLIMITS_LIMIT_LAW_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "otlimits/dual_face.hpp"
#include "otlimits/seeding.hpp"

namespace otl {

/// One realisation of the Brownian bridge on the atoms of `weights`:
/// z = D xi - (s . xi) weights with D = diag(sqrt w), s = sqrt w. Its
/// covariance is diag(w) - w w^T, its entries sum to zero, and atoms of zero
/// mass get exactly zero.
Vector sample_gaussian(const Vector& weights, Rng& rng);

enum class LimitMode { one_sample_mu, one_sample_nu, two_sample };

std::string to_string(LimitMode mode);
LimitMode limit_mode_from_string(const std::string& name);

struct LimitSampleSet {
  std::vector<double> draws;
  LimitMode mode = LimitMode::one_sample_mu;
  double delta = 0.5;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

/// `count` draws of the supremum of the limiting Gaussian functional over
/// the face. Draw k uses its own stream derived from (seed, k).
LimitSampleSet sample_limit(const DualFace& face, LimitMode mode, double delta,
                            std::size_t count, std::uint64_t seed, int jobs = 1);

/// The objective (z, w) used by draw k of sample_limit.
std::pair<Vector, Vector> limit_objective(const DualFace& face, LimitMode mode, double delta,
                                          std::uint64_t seed, std::size_t index);

/// Var_mu[f].
double normal_limit_params(const Vector& f, const Vector& mu);
/// delta Var_mu[f] + (1 - delta) Var_nu[g].
double normal_limit_params(const Vector& f, const Vector& mu, const Vector& g,
                           const Vector& nu, double delta);

/// Right-continuous empirical distribution function.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);
  double operator()(double x) const;
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// Linear interpolation between order statistics (position q (n - 1)).
double quantile(std::span<const double> samples, double q);
double quantile_sorted(std::span<const double> sorted, double q);

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
};

SampleSummary summarize_samples(std::span<const double> samples);

}  // namespace otl

#endif  // OTLIMITS_LIMIT_LAW_HPP
