#include "otlimits/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "otlimits/degeneracy.hpp"
#include "otlimits/dual_face.hpp"
#include "otlimits/ot_core.hpp"

namespace otl {

FaceFlags compute_flags(const Vector& mu, const Vector& nu, const CostMatrix& cost) {
  const auto sol = solve_discrete_ot(mu, nu, cost);
  const auto face = build_face(mu, nu, cost, sol);
  FaceFlags flags;
  flags.unique = uniqueness_test(face, Side::source);
  flags.exists_trivial_f = exists_trivial_test(mu, nu, cost, sol.value);
  flags.exists_trivial_g = exists_trivial_test(nu, mu, cost.transposed(), sol.value);
  flags.all_trivial_f = all_trivial_test(face, Side::source);
  flags.all_trivial_g = all_trivial_test(face, Side::target);
  flags.bitrivial = bitrivial_check(face);
  return flags;
}

namespace {

Matrix circle(int count, double radius) {
  Matrix pts(count, 2);
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / count;
    pts(k, 0) = radius * std::cos(angle);
    pts(k, 1) = radius * std::sin(angle);
  }
  return pts;
}

Fixture line_fixture(std::string name, std::string description, std::vector<double> xs,
                     std::vector<double> mu, std::vector<double> ys, std::vector<double> nu,
                     double p, FaceFlags expected) {
  auto x = DiscreteMeasure::on_line(xs, mu);
  auto y = DiscreteMeasure::on_line(ys, nu);
  const auto spec = CostSpec::power(p);
  auto cost = cost_matrix(spec, x, y);
  return {std::move(name), std::move(description), std::move(x), std::move(y), spec,
          std::move(cost), expected};
}

// Inner circle of 32 atoms at radius 1 carrying mu; 64 outer atoms at the
// same 32 angles and radii 1.5 and 2 carrying nu (uniform). mu is the radial
// projection of nu, Euclidean cost.
Fixture annulus() {
  constexpr int kInner = 32;
  Matrix outer(2 * kInner, 2);
  outer.topRows(kInner) = circle(kInner, 1.5);
  outer.bottomRows(kInner) = circle(kInner, 2.0);
  auto mu = DiscreteMeasure::with_coords(circle(kInner, 1.0), Vector::Constant(kInner, 1.0 / kInner));
  auto nu = DiscreteMeasure::with_coords(outer, Vector::Constant(2 * kInner, 0.5 / kInner));
  const auto spec = CostSpec::power(1);
  auto cost = cost_matrix(spec, mu, nu);
  FaceFlags expected;
  expected.exists_trivial_f = true;
  return {"fig1a_annulus",
          "inner circle (32 atoms, radius 1) vs annulus ring (64 atoms, radii 1.5 and 2), "
          "mu = radial projection of nu, Euclidean cost",
          std::move(mu), std::move(nu), spec, std::move(cost), expected};
}

// Uniform atoms on circles of radius 1 and 1.5 with the radial cost
// | |x| - |y| |, which is constant on the instance.
Fixture concentric() {
  constexpr int kAtoms = 16;
  auto mu = DiscreteMeasure::with_coords(circle(kAtoms, 1.0), Vector::Constant(kAtoms, 1.0 / kAtoms));
  auto nu = DiscreteMeasure::with_coords(circle(kAtoms, 1.5), Vector::Constant(kAtoms, 1.0 / kAtoms));
  Matrix c(kAtoms, kAtoms);
  for (int i = 0; i < kAtoms; ++i) {
    for (int j = 0; j < kAtoms; ++j) {
      c(i, j) = std::abs(mu.coords().row(i).norm() - nu.coords().row(j).norm());
    }
  }
  FaceFlags expected{true, true, true, true, true, true};
  return {"concentric_circles",
          "uniform atoms on centred circles of radius 1 and 1.5, radial-distance cost",
          std::move(mu), std::move(nu), std::nullopt, CostMatrix(std::move(c)), expected};
}

}  // namespace

std::vector<std::string> FixtureLibrary::names() {
  return {"dirac_pair",    "unique_3x3",         "nonunique_3pt",
          "fig1a_annulus", "concentric_circles", "semidiscrete_3atom"};
}

bool FixtureLibrary::is_semidiscrete(const std::string& name) {
  return name == "semidiscrete_3atom";
}

Fixture FixtureLibrary::discrete_unchecked(const std::string& name) {
  if (name == "dirac_pair") {
    return line_fixture(name, "Dirac at 0 vs Dirac at 1, c = |x - y|", {0}, {1}, {1}, {1}, 1,
                        {true, true, true, true, true, true});
  }
  if (name == "unique_3x3") {
    FaceFlags expected;
    expected.unique = true;
    return line_fixture(name, "three atoms each side on the line, c = |x - y|^2", {0, 1, 2},
                        {0.2, 0.5, 0.3}, {0.5, 1.2, 2.5}, {0.3, 0.3, 0.4}, 2, expected);
  }
  if (name == "nonunique_3pt") {
    return line_fixture(name, "degenerate three-point instance on {0, 1, 2}, c = |x - y|",
                        {0, 1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0, 1, 2},
                        {1.0 / 3, 1.0 / 6, 0.5}, 1, FaceFlags{});
  }
  if (name == "fig1a_annulus") return annulus();
  if (name == "concentric_circles") return concentric();
  if (is_semidiscrete(name)) {
    throw InvalidInput("fixture '" + name + "' is semi-discrete");
  }
  throw InvalidInput("unknown fixture '" + name + "'");
}

Fixture FixtureLibrary::discrete(const std::string& name) {
  Fixture fx = discrete_unchecked(name);
  const FaceFlags got = compute_flags(fx.mu.weights(), fx.nu.weights(), fx.cost);
  if (!(got == fx.expected)) {
    throw SolverError("fixture '" + name + "' does not have its recorded face properties");
  }
  return fx;
}

SemidiscreteFixture FixtureLibrary::semidiscrete(const std::string& name) {
  if (name != "semidiscrete_3atom") throw InvalidInput("unknown semi-discrete fixture '" + name + "'");
  return {name, "three atoms at 0.2, 0.5, 0.9 (mass 0.3, 0.4, 0.3) vs Unif[0, 1], c = |x - y|",
          DiscreteMeasure::on_line({0.2, 0.5, 0.9}, {0.3, 0.4, 0.3}),
          DensityMeasure1D::uniform(0.0, 1.0, 10000), CostSpec::power(1)};
}

}  // namespace otl
