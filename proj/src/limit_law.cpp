#include "otlimits/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "otlimits/parallel.hpp"

namespace otl {

Vector sample_gaussian(const Vector& weights, Rng& rng) {
  if (weights.size() == 0 || (weights.array() < 0.0).any()) {
    throw InvalidInput("sample_gaussian: weights must be non-empty and non-negative");
  }
  std::normal_distribution<double> gauss;
  const Vector s = weights.cwiseSqrt();
  Vector xi(weights.size());
  for (auto& x : xi) x = gauss(rng);
  // dividing by the total keeps sum(z) at rounding level even when the
  // weights sum to 1 only within the validation tolerance
  return s.cwiseProduct(xi) - (s.dot(xi) / weights.sum()) * weights;
}

std::string to_string(LimitMode mode) {
  switch (mode) {
    case LimitMode::one_sample_mu: return "one_sample_mu";
    case LimitMode::one_sample_nu: return "one_sample_nu";
    case LimitMode::two_sample: return "two_sample";
  }
  return "";
}

LimitMode limit_mode_from_string(const std::string& name) {
  if (name == "one_sample_mu") return LimitMode::one_sample_mu;
  if (name == "one_sample_nu") return LimitMode::one_sample_nu;
  if (name == "two_sample") return LimitMode::two_sample;
  throw InvalidInput("unknown limit mode '" + name + "'");
}

std::pair<Vector, Vector> limit_objective(const DualFace& face, LimitMode mode, double delta,
                                          std::uint64_t seed, std::size_t index) {
  Rng rng = make_stream(seed, "limit-sample", index);
  switch (mode) {
    case LimitMode::one_sample_mu:
      return {sample_gaussian(face.mu, rng), Vector::Zero(face.nu.size())};
    case LimitMode::one_sample_nu:
      return {Vector::Zero(face.mu.size()), sample_gaussian(face.nu, rng)};
    case LimitMode::two_sample: {
      Vector z = std::sqrt(delta) * sample_gaussian(face.mu, rng);
      Vector w = std::sqrt(1.0 - delta) * sample_gaussian(face.nu, rng);
      return {std::move(z), std::move(w)};
    }
  }
  throw InvalidInput("limit_objective: unknown mode");
}

LimitSampleSet sample_limit(const DualFace& face, LimitMode mode, double delta,
                            std::size_t count, std::uint64_t seed, int jobs) {
  if (mode == LimitMode::two_sample && !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("sample_limit: two-sample mode needs delta in (0, 1)");
  }
  if (count == 0) throw InvalidInput("sample_limit: need at least one draw");
  LimitSampleSet out{std::vector<double>(count), mode, delta, count, seed};
  parallel_for(count, jobs, [&](std::size_t k) {
    const auto [z, w] = limit_objective(face, mode, delta, seed, k);
    out.draws[k] = sup_linear(face, z, w).value;
  });
  return out;
}

double normal_limit_params(const Vector& f, const Vector& mu) {
  if (f.size() != mu.size()) throw InvalidInput("normal_limit_params: size mismatch");
  const double mean = mu.dot(f);
  // centred form avoids cancellation in E[f^2] - E[f]^2
  return std::max(0.0, mu.dot((f.array() - mean).square().matrix()));
}

double normal_limit_params(const Vector& f, const Vector& mu, const Vector& g,
                           const Vector& nu, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidInput("normal_limit_params: delta must lie in [0, 1]");
  }
  return delta * normal_limit_params(f, mu) + (1.0 - delta) * normal_limit_params(g, nu);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InvalidInput("empirical_cdf: no samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidInput("quantile: no samples");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile: level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> samples, double q) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

SampleSummary summarize_samples(std::span<const double> samples) {
  if (samples.empty()) throw InvalidInput("summarize_samples: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  SampleSummary s;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sorted) ss += (x - s.mean) * (x - s.mean);
  s.sd = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.q05 = quantile_sorted(sorted, 0.05);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.q95 = quantile_sorted(sorted, 0.95);
  return s;
}

}  // namespace otl
