#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ldplab/benchmarks.hpp"
#include "ldplab/measure.hpp"
#include "ldplab/product.hpp"
#include "ldplab/properties.hpp"
#include "ldplab/walk.hpp"

using namespace ldplab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

}  // namespace

TEST(Measure, Validation) {
  const auto g = SquareMatrix::identity(2);
  EXPECT_EQ(kind_of([&] { MeasureSpec({{"a", g, 0.5}, {"b", g, 0.4}}); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([&] { MeasureSpec({{"a", g, 0.5}, {"a", g, 0.5}}); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([&] { MeasureSpec({{"a", g, 0.5}, {"b", SquareMatrix::identity(3), 0.5}}); }),
            ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([&] { MeasureSpec({{"a", g, -0.5}, {"b", g, 1.5}}); }), ErrorKind::ValidationError);
  EXPECT_EQ(MeasureSpec({{"a", g, 1.0}, {"b", g, 0.0}}).min_positive_weight(), 1.0);
}

TEST(SampleWord, GoldenSeed7) {
  const auto mu = benchmarks::boundary_example(1);  // weights 1/4, 1/4, 1/2
  EXPECT_EQ(sample_word(mu, 5, 0, 7), (std::vector<std::size_t>{2, 0, 1, 0, 0}));
  EXPECT_EQ(sample_word(mu, 5, 0, 7), sample_word(mu, 5, 0, 7));
  EXPECT_NE(sample_word(mu, 5, 1, 7), sample_word(mu, 5, 0, 7));
}

TEST(SampleWord, ZeroWeightNeverDrawn) {
  const MeasureSpec mu({{"a", SquareMatrix::identity(2), 1.0}, {"b", SquareMatrix::identity(2), 0.0}});
  for (std::uint64_t s = 0; s < 50; ++s)
    for (std::size_t a : sample_word(mu, 20, s, 3)) EXPECT_EQ(a, 0u);
}

TEST(WalkProduct, Examples) {
  const auto id = MeasureSpec::dirac(SquareMatrix::identity(3));
  const std::vector<std::size_t> three{0, 0, 0};
  const auto s = walk_product(id, three);
  EXPECT_EQ(s.log_scale(), 0.0);
  EXPECT_TRUE(s.scaled().isApprox(Matrix::Identity(3, 3)));

  const auto mu = benchmarks::boundary_example(1);
  const std::vector<std::size_t> one{2};
  const auto k1 = walk_product(mu, one).cartan();
  const auto direct = cartan_projection(mu.atom(2).matrix);
  EXPECT_NEAR(k1[0], direct[0], 1e-12);
  EXPECT_NEAR(k1[1], direct[1], 1e-12);

  const auto pair = benchmarks::diagonal_pair();
  const std::vector<std::size_t> ab{0, 1};
  const auto k = walk_product(pair, ab).cartan();
  EXPECT_NEAR(k[0], 6.5, 1e-12);
  EXPECT_NEAR(k[1], -6.5, 1e-12);
}

TEST(WalkProduct, RightToLeftOrder) {
  // word {U, L} is L * U
  const auto mu = benchmarks::boundary_example(1);
  const std::vector<std::size_t> ul{0, 1};
  const auto k = walk_product(mu, ul).cartan();
  const auto expected = cartan_projection(benchmarks::shear_lower() * benchmarks::shear_upper());
  EXPECT_NEAR(k[0], expected[0], 1e-12);
}

TEST(Engines, TwoByTwoFastPathMatchesGeneral) {
  properties::Draws draw(5, 0);
  std::vector<SquareMatrix> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back(draw.invertible(2));
  const detail::Engine2 fast(atoms);
  const detail::GeneralEngine general(atoms);
  for (int w = 0; w < 200; ++w) {
    auto a = fast.identity();
    auto b = general.identity();
    const std::size_t len = 1 + draw.index(40);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t atom = draw.index(3);
      if (i + 1 == len) {
        EXPECT_NEAR(fast.top_cartan_after(a, atom), general.top_cartan_after(b, atom), 1e-9);
      }
      fast.apply(a, atom);
      general.apply(b, atom);
    }
    EXPECT_NEAR(a.cartan()[0], b.cartan()[0], 1e-9);
    EXPECT_NEAR(a.cartan()[1], b.cartan()[1], 1e-9);
    EXPECT_NEAR(a.jordan()[0], b.jordan()[0], 1e-9);
  }
}

TEST(Samples, DiracIdentityIsZero) {
  const auto id = MeasureSpec::dirac(SquareMatrix::identity(3));
  for (const auto& k : kappa_samples(id, 10, 100, 0))
    for (double x : k.components) EXPECT_EQ(x, 0.0);
}

TEST(Samples, WorkerCountDoesNotMatter) {
  const auto mu = benchmarks::boundary_example(3);
  const auto a = paired_samples(mu, 15, 3000, 42, {1, true, true});
  const auto b = paired_samples(mu, 15, 3000, 42, {4, true, true});
  for (std::size_t s = 0; s < 3000; ++s) {
    EXPECT_EQ(a.kappa[s].components, b.kappa[s].components);
    EXPECT_EQ(a.lambda[s].components, b.lambda[s].components);
  }
}

TEST(Lyapunov, DiracIsJordan) {
  const auto g = SquareMatrix::from_rows({{2, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  const auto est = lyapunov_estimate(MeasureSpec::dirac(g), 200, 200, 1);
  const auto l = jordan_projection(g);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(est.vector[i], l[i], 0.02);
}

TEST(Lyapunov, DiagonalPairMean) {
  const auto est = lyapunov_estimate(benchmarks::diagonal_pair(), 20, 20000, 9);
  EXPECT_NEAR(est.vector[0], 3.25, 3 * est.half_width[0]);
  EXPECT_NEAR(est.vector[1], -3.25, 3 * est.half_width[1]);
}

TEST(Lyapunov, RotationsAreZero) {
  const auto mu = MeasureSpec::uniform({rotation2(0.3), rotation2(1.7)});
  for (double x : lyapunov_estimate(mu, 50, 500, 2).vector) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(DeviationDecay, DiracHasNoDeviations) {
  const auto g = SquareMatrix::diagonal({std::exp(1.0), std::exp(-1.0)});
  const std::vector<double> lyap{1.0, -1.0};
  const std::vector<std::size_t> horizons{10};
  const auto d = deviation_decay(MeasureSpec::dirac(g), lyap, 0.1, horizons, 1000, 0);
  EXPECT_EQ(d[0].hits, 0u);
  EXPECT_TRUE(d[0].rate.lower_bound_only);
  EXPECT_NEAR(d[0].rate.value, std::log(1000.0) / 10.0, 1e-12);
}

TEST(DeviationDecay, HugeEpsHasNoHits) {
  const std::vector<double> lyap{3.25, -3.25};
  const std::vector<std::size_t> horizons{5, 10};
  for (const auto& p : deviation_decay(benchmarks::diagonal_pair(), lyap, 10.0, horizons, 1000, 0)) {
    EXPECT_EQ(p.hits, 0u);
    EXPECT_TRUE(p.rate.lower_bound_only);
  }
}

TEST(DeviationDecay, DiagonalPairMatchesBinomialTail) {
  // |kappa/n - lyap| > 0.2 iff |B - 10| >= 6 for B ~ Binomial(20, 1/2)
  double tail = 0.0;
  for (int j = 0; j <= 20; ++j)
    if (std::abs(j - 10) >= 6) tail += std::exp(std::lgamma(21.0) - std::lgamma(j + 1.0) - std::lgamma(21.0 - j) - 20 * std::log(2.0));
  const std::vector<double> lyap{3.25, -3.25};
  const std::vector<std::size_t> horizons{20};
  const auto d = deviation_decay(benchmarks::diagonal_pair(), lyap, 0.2, horizons, 50000, 4);
  EXPECT_NEAR(d[0].rate.value, -std::log(tail) / 20.0, 3 * d[0].rate.half_width());
}
