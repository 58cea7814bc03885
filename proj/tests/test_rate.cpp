#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "ldplab/benchmarks.hpp"
#include "ldplab/rate.hpp"

using namespace ldplab;

namespace {

// P(Binomial(n, 1/2) = k), via lgamma
double binomial_half(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
}

double cell_value(const RateEstimate& est, double x) {
  const auto cell = est.grid.locate(std::span<const double>(&x, 1));
  EXPECT_TRUE(cell.has_value());
  return est.values[*cell];
}

std::size_t cell_index(const RateEstimate& est, double x) { return *est.grid.locate(std::span<const double>(&x, 1)); }

}  // namespace

TEST(RateGrid, HalfOpenCells) {
  const auto g = RateGrid::top(0.0, 1.0, 0.25);
  EXPECT_EQ(g.size(), 5u);
  const double inside[] = {0.124, 0.125, -0.125};
  EXPECT_EQ(*g.locate(std::span<const double>(&inside[0], 1)), 0u);
  EXPECT_EQ(*g.locate(std::span<const double>(&inside[1], 1)), 1u);
  EXPECT_EQ(*g.locate(std::span<const double>(&inside[2], 1)), 0u);
  const double outside[] = {-0.126, 1.125};
  EXPECT_FALSE(g.locate(std::span<const double>(&outside[0], 1)).has_value());
  EXPECT_FALSE(g.locate(std::span<const double>(&outside[1], 1)).has_value());
  EXPECT_THROW(RateGrid::chamber(4, 0, 1, 0.5), Error);
}

TEST(ExactDistribution, SingleStepIsTheAtoms) {
  const auto dist = exact_distribution(benchmarks::diagonal_pair(), 1);
  ASSERT_EQ(dist.size(), 2u);
  EXPECT_NEAR(dist[0].kappa[0], 3.0, 1e-12);
  EXPECT_NEAR(dist[0].kappa[1], -3.0, 1e-12);
  EXPECT_NEAR(dist[1].kappa[0], 3.5, 1e-12);
  EXPECT_NEAR(dist[0].probability, 0.5, 1e-15);
}

TEST(ExactDistribution, DiagonalPairIsBinomial) {
  const auto dist = exact_distribution(benchmarks::diagonal_pair(), 10);
  ASSERT_EQ(dist.size(), 11u);
  double total = 0.0;
  for (int k = 0; k <= 10; ++k) {
    EXPECT_NEAR(dist[k].kappa[0], 3.0 + 0.05 * k, 1e-12);
    EXPECT_NEAR(dist[k].probability, binomial_half(10, k), 1e-14);
    total += dist[k].probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(ExactRate, DiagonalPairMatchesBinomialRates) {
  const auto est = exact_rate(benchmarks::diagonal_pair(), 20, RateGrid::top(3.0, 3.5, 0.025));
  ASSERT_EQ(est.grid.size(), 21u);
  for (int k = 0; k <= 20; ++k) {
    EXPECT_EQ(est.flags[k], CellFlag::Finite);
    EXPECT_NEAR(est.values[k], -std::log(binomial_half(20, k)) / 20.0, 1e-12);
  }
  EXPECT_NEAR(cell_value(est, 3.25), 0.0868076148298, 1e-10);
  EXPECT_NEAR(cell_value(est, 3.0), std::log(2.0), 1e-12);
  EXPECT_EQ(est.count, std::pow(2.0, 20));
}

TEST(ExactRate, UnreachableCells) {
  const auto est = exact_rate(benchmarks::diagonal_pair(), 6, RateGrid::top(3.6, 4.4, 0.1));
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    EXPECT_EQ(est.flags[i], CellFlag::Unreachable);
    EXPECT_TRUE(std::isinf(est.values[i]));
  }
}

TEST(ExactRate, ChamberGrid) {
  const auto est = exact_rate(benchmarks::diagonal_pair(), 4, RateGrid::chamber(2, -4.0, 4.0, 0.125));
  double total = 0.0;
  for (double p : est.probability) total += p;
  EXPECT_NEAR(total, 1.0, 1e-14);
  const double x[] = {3.25, -3.25};
  EXPECT_NEAR(est.probability[*est.grid.locate(x)], 0.375, 1e-14);
  EXPECT_THROW(exact_rate(benchmarks::diagonal_pair(), 4, RateGrid::chamber(3, -4.0, 4.0, 0.5)), Error);
}

TEST(ExactRate, BudgetExceeded) {
  try {
    exact_rate(benchmarks::diagonal_pair(), 30, RateGrid::top(3.0, 3.5, 0.025), 1000.0);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    EXPECT_EQ(e.required(), std::pow(2.0, 30));
  }
}

TEST(ExactRate, WorkerCountDoesNotChangeResults) {
  const auto mu = benchmarks::boundary_example(2);
  const auto grid = RateGrid::top(0.0, 4.0, 0.05);
  const auto a = exact_rate(mu, 8, grid, 1e6, 1);
  const auto b = exact_rate(mu, 8, grid, 1e6, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.probability, b.probability);
}

TEST(MonteCarloRate, AgreesWithExactAtTheMean) {
  const auto mu = benchmarks::diagonal_pair();
  const auto grid = RateGrid::top(3.0, 3.5, 0.025);
  const auto mc = mc_rate(mu, 20, 100000, grid, 11);
  const std::size_t i = cell_index(mc, 3.25);
  ASSERT_EQ(mc.flags[i], CellFlag::Finite);
  EXPECT_LE(std::abs(mc.values[i] - 0.0868076148298), 3.0 * mc.ci_half_width(i));
  EXPECT_LE(mc.ci_lower[i], mc.values[i]);
  EXPECT_GE(mc.ci_upper[i], mc.values[i]);
}

TEST(MonteCarloRate, ZeroHitCellsAreLowerBounds) {
  const auto mc = mc_rate(benchmarks::diagonal_pair(), 10, 2000, RateGrid::top(3.6, 4.0, 0.1), 1);
  for (std::size_t i = 0; i < mc.grid.size(); ++i) {
    EXPECT_EQ(mc.flags[i], CellFlag::LowerBound);
    EXPECT_NEAR(mc.values[i], std::log(2000.0) / 10.0, 1e-12);
  }
}

TEST(MonteCarloRate, DeterministicAndValidated) {
  const auto mu = benchmarks::boundary_example(1);
  const auto grid = RateGrid::top(0.0, 4.0, 0.05);
  const auto a = mc_rate(mu, 12, 5000, grid, 5, 1);
  const auto b = mc_rate(mu, 12, 5000, grid, 5, 4);
  EXPECT_EQ(a.values, b.values);
  EXPECT_THROW(mc_rate(mu, 12, 999, grid, 5), Error);
}

TEST(Laplace, ClosedForms) {
  const auto mu = benchmarks::diagonal_pair();
  const std::vector<Point> duals{{0.0}, {-1.0}, {0.5}, {2.0}};
  auto closed = [](double t) { return std::log(0.5 * std::exp(3.0 * t) + 0.5 * std::exp(3.5 * t)); };
  const auto one = laplace_transform(mu, 1, GridMode::TopCoordinate, duals, 1e6, 0, 0);
  const auto ten = laplace_transform(mu, 10, GridMode::TopCoordinate, duals, 1e6, 0, 0);
  EXPECT_EQ(one.values[0], 0.0);
  for (std::size_t i = 0; i < duals.size(); ++i) {
    EXPECT_NEAR(one.values[i], closed(duals[i][0]), 1e-12);
    // commuting atoms: Lambda_n does not depend on n
    EXPECT_NEAR(ten.values[i], one.values[i], 1e-12);
  }

  const auto dirac = MeasureSpec::dirac(SquareMatrix::diagonal({std::exp(2.0), std::exp(-2.0)}));
  const auto d = laplace_transform(dirac, 5, GridMode::TopCoordinate, duals, 1e6, 0, 0);
  for (std::size_t i = 0; i < duals.size(); ++i) EXPECT_NEAR(d.values[i], 2.0 * duals[i][0], 1e-12);

  const std::vector<Point> wrong{{0.0, 1.0}};
  EXPECT_THROW(laplace_transform(mu, 1, GridMode::TopCoordinate, wrong, 1e6, 0, 0), Error);
}

TEST(Laplace, MonteCarloFallback) {
  const auto mu = benchmarks::diagonal_pair();
  const std::vector<Point> duals{{0.0}, {0.5}};
  const auto mc = laplace_transform(mu, 40, GridMode::TopCoordinate, duals, 1e3, 20000, 3);
  EXPECT_EQ(mc.method, LaplaceMethod::MonteCarlo);
  EXPECT_EQ(mc.values[0], 0.0);
  EXPECT_NEAR(mc.values[1], std::log(0.5 * std::exp(1.5) + 0.5 * std::exp(1.75)), 0.01);
}

TEST(Legendre, DiagonalPair) {
  const auto mu = benchmarks::diagonal_pair();
  const auto duals = dual_box(1, dual_ladder());
  const auto lap = laplace_transform(mu, 20, GridMode::TopCoordinate, duals, 2e6, 0, 0);
  const auto est = legendre_conjugate(lap, RateGrid::top(3.0, 3.5, 0.025));
  EXPECT_EQ(est.method, RateMethod::LegendreDual);
  EXPECT_NEAR(cell_value(est, 3.25), 0.0, 1e-12);
  EXPECT_NEAR(cell_value(est, 3.0), std::log(2.0), 1e-5);
  EXPECT_TRUE(est.boundary_warning[cell_index(est, 3.0)]);
  EXPECT_FALSE(est.boundary_warning[cell_index(est, 3.25)]);
  for (std::size_t i = 0; i < est.grid.size(); ++i) EXPECT_GE(est.values[i], 0.0);
  EXPECT_TRUE(convexity_report(est).empty());
}

TEST(SupportEstimate, DiagonalPairInterval) {
  const auto est = exact_rate(benchmarks::diagonal_pair(), 20, RateGrid::top(2.9, 3.6, 0.025));
  const auto s = support_estimate(est, std::numeric_limits<double>::infinity());
  ASSERT_TRUE(s.hull.has_value());
  EXPECT_EQ(s.cells.size(), 21u);
  const auto v = s.hull->vertices();
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(std::min(v[0][0], v[1][0]), 3.0, 1e-12);
  EXPECT_NEAR(std::max(v[0][0], v[1][0]), 3.5, 1e-12);
  EXPECT_THROW(support_estimate(est, 0.0), Error);
}
