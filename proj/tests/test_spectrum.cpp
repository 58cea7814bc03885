#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ldplab/benchmarks.hpp"
#include "ldplab/spectrum.hpp"

using namespace ldplab;

namespace {

const double kLogPhi = std::log(std::numbers::phi);

std::pair<double, double> interval(const ConvexHull& h) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& v : h.vertices()) lo = std::min(lo, v[0]), hi = std::max(hi, v[0]);
  return {lo, hi};
}

}  // namespace

TEST(IterateSpectrum, DiagonalPairHull) {
  const auto atoms = benchmarks::diagonal_pair().support();
  const auto s = iterate_spectrum(atoms, 6);
  ASSERT_EQ(s.levels.size(), 6u);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto& lv = s.levels[n - 1];
    EXPECT_EQ(lv.depth, n);
    EXPECT_EQ(lv.cloud.size(), n + 1);
    const auto [lo, hi] = interval(lv.hull);
    EXPECT_NEAR(lo, 3.0, 1e-12);
    EXPECT_NEAR(hi, 3.5, 1e-12);
    EXPECT_NEAR(lv.max_top_gap, 0.0, 1e-12);
  }
  EXPECT_FALSE(s.levels[0].hausdorff_to_previous.has_value());
  EXPECT_NEAR(*s.deepest().hausdorff_to_previous, 0.0, 1e-12);
}

TEST(IterateSpectrum, ChamberModeSegment) {
  const auto atoms = benchmarks::diagonal_pair().support();
  const auto s = iterate_spectrum(atoms, 4, kDefaultWordBudget, GridMode::FullChamber);
  const auto& hull = s.deepest().hull;
  EXPECT_EQ(hull.ambient_dim(), 2u);
  EXPECT_EQ(hull.rank(), 1u);
  const double mid[] = {3.25, -3.25};
  const double off[] = {3.25, -3.0};
  EXPECT_TRUE(hull.contains(mid));
  EXPECT_NEAR(hull.distance(off), 0.25 / std::sqrt(2.0), 1e-9);
}

TEST(IterateSpectrum, SingletonIsAPoint) {
  const std::vector<SquareMatrix> one{SquareMatrix::diagonal({std::exp(2.0), std::exp(-2.0)})};
  const auto s = iterate_spectrum(one, 5);
  for (const auto& lv : s.levels) {
    ASSERT_EQ(lv.cloud.size(), 1u);
    EXPECT_NEAR(lv.cloud[0][0], 2.0, 1e-12);
    EXPECT_EQ(lv.hull.rank(), 0u);
  }
}

TEST(IterateSpectrum, Validation) {
  const auto atoms = benchmarks::diagonal_pair().support();
  EXPECT_THROW(iterate_spectrum(atoms, 30, 1e3), BudgetExceeded);
  EXPECT_THROW(iterate_spectrum(atoms, 0), Error);
  EXPECT_THROW(iterate_spectrum(std::vector<SquareMatrix>{}, 3), Error);
  const std::vector<SquareMatrix> mixed{SquareMatrix::identity(2), SquareMatrix::identity(3)};
  try {
    iterate_spectrum(mixed, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(JsrBounds, BoundaryExampleEndpoint) {
  const auto atoms = benchmarks::boundary_example(4).support();
  const auto b = jsr_bounds(atoms, 1);
  EXPECT_NEAR(b.lower, 3.75, 1e-12);
  EXPECT_NEAR(b.upper, 3.75, 1e-12);
}

TEST(JsrBounds, ShearPairReachesLogPhi) {
  const std::vector<SquareMatrix> shears{benchmarks::shear_upper(), benchmarks::shear_lower()};
  const auto b = jsr_bounds(shears, 2);
  EXPECT_GE(b.lower, kLogPhi - 1e-12);
  EXPECT_GE(b.upper, b.lower);
  const auto deep = jsr_bounds(shears, 10);
  EXPECT_LE(deep.upper, b.upper + 1e-12);
  EXPECT_GE(deep.upper, kLogPhi - 1e-12);
  EXPECT_LE(deep.lower, deep.upper);
}

TEST(JsrBounds, SingleMatrixBracketsLogRho) {
  const std::vector<SquareMatrix> g{SquareMatrix::from_rows({{2, 1}, {0, 1}})};
  const auto shallow = jsr_bounds(g, 1);
  const auto deep = jsr_bounds(g, 12);
  EXPECT_LE(deep.lower, std::log(2.0) + 1e-12);
  EXPECT_GE(deep.upper, std::log(2.0) - 1e-12);
  EXPECT_LT(deep.upper - deep.lower, shallow.upper - shallow.lower);
  EXPECT_EQ(deep.lower_by_depth.size(), deep.upper_by_depth.size());
}

TEST(SubradiusBounds, DiagonalPairIsExact) {
  const auto atoms = benchmarks::diagonal_pair().support();
  const auto b = subradius_bounds(atoms, 1);
  EXPECT_NEAR(b.lower, 3.0, 1e-12);
  EXPECT_NEAR(b.upper, 3.0, 1e-12);
  const std::vector<SquareMatrix> tri{SquareMatrix::diagonal({2.0, 1.0})};
  const auto t = subradius_bounds(tri, 1);
  EXPECT_NEAR(t.lower, std::log(2.0), 1e-12);
  EXPECT_NEAR(t.upper, std::log(2.0), 1e-12);
}

TEST(SubradiusBounds, ShearPair) {
  const std::vector<SquareMatrix> shears{benchmarks::shear_upper(), benchmarks::shear_lower()};
  const auto b = subradius_bounds(shears, 8);
  EXPECT_LE(b.lower, 1e-12);
  EXPECT_GE(b.upper, -1e-12);
  EXPECT_LE(b.upper - b.lower, 0.174);
}

TEST(SubradiusBounds, SingleMatrixContainsLogRho) {
  const auto g = SquareMatrix::from_rows({{3, 1}, {1, 2}});
  const std::vector<SquareMatrix> one{g};
  const auto b = subradius_bounds(one, 8);
  const double log_rho = std::log(spectral_radius(g));
  EXPECT_LE(b.lower, log_rho + 1e-12);
  EXPECT_GE(b.upper, log_rho - 1e-12);
}

TEST(JointBounds, CarriesBothBrackets) {
  const auto atoms = benchmarks::diagonal_pair().support();
  const auto b = joint_bounds(atoms, 4);
  EXPECT_NEAR(b.lower, 3.5, 1e-12);
  EXPECT_NEAR(b.upper, 3.5, 1e-12);
  EXPECT_NEAR(b.sub_lower, 3.0, 1e-12);
  EXPECT_NEAR(b.sub_upper, 3.0, 1e-12);
}

TEST(CompareSupport, DiagonalPairAgrees) {
  const auto mu = benchmarks::diagonal_pair();
  const auto atoms = mu.support();
  const auto rate = exact_rate(mu, 10, RateGrid::top(2.9, 3.6, 0.025));
  const auto sp = iterate_spectrum(atoms, 10);
  const auto c = compare_support(rate, sp);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.distance, 0.0, 1e-12);
  EXPECT_NEAR(c.tolerance, 0.025, 1e-12);

  const auto mc = mc_rate(mu, 10, 1000, RateGrid::top(2.9, 3.6, 0.025), 1);
  EXPECT_THROW(compare_support(mc, sp), Error);
}
