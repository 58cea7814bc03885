#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ldplab/linalg.hpp"
#include "ldplab/philox.hpp"
#include "ldplab/properties.hpp"

using namespace ldplab;

namespace {

const double kLogPhi = std::log((1.0 + std::sqrt(5.0)) / 2.0);

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Cartan, DiagonalAndIdentity) {
  const auto k = cartan_projection(SquareMatrix::diagonal({std::exp(2.0), std::exp(-2.0)}));
  EXPECT_NEAR(k[0], 2.0, 1e-12);
  EXPECT_NEAR(k[1], -2.0, 1e-12);
  for (double x : cartan_projection(SquareMatrix::identity(3)).components) EXPECT_NEAR(x, 0.0, 1e-14);
}

TEST(Cartan, ShearIsLogGoldenRatio) {
  // singular values of [[1,1],[0,1]]: roots of s^4 - 3 s^2 + 1
  const auto k = cartan_projection(SquareMatrix::from_rows({{1, 1}, {0, 1}}));
  EXPECT_NEAR(k[0], 0.481211825059603, 1e-12);
  EXPECT_NEAR(k[0], kLogPhi, 1e-12);
  EXPECT_NEAR(k[1], -kLogPhi, 1e-12);
}

TEST(Cartan, PartialSumsAreExteriorNorms) {
  properties::Draws draw(3, 0);
  for (int c = 0; c < 50; ++c) {
    const auto m = draw.invertible(4);
    const auto k = cartan_projection(m);
    double partial = 0.0;
    for (int i = 1; i <= 4; ++i) {
      partial += k[static_cast<std::size_t>(i - 1)];
      EXPECT_NEAR(partial, std::log(operator_norm(exterior_power(m, i))), 1e-8);
    }
  }
}

TEST(Jordan, Examples) {
  const auto d = jordan_projection(SquareMatrix::diagonal({std::exp(2.0), std::exp(-2.0)}));
  EXPECT_NEAR(d[0], 2.0, 1e-12);
  EXPECT_NEAR(d[1], -2.0, 1e-12);
  const auto u = jordan_projection(SquareMatrix::from_rows({{1, 1}, {0, 1}}));
  EXPECT_NEAR(u[0], 0.0, 1e-12);
  EXPECT_NEAR(u[1], 0.0, 1e-12);
  const double e = std::exp(1.0);
  const auto r = jordan_projection(SquareMatrix::from_rows({{0, -e}, {e, 0}}));
  EXPECT_NEAR(r[0], 1.0, 1e-12);
  EXPECT_NEAR(r[1], 1.0, 1e-12);
}

TEST(ExteriorPower, Examples) {
  const auto m = SquareMatrix::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  const auto top = exterior_power(m, 3);
  ASSERT_EQ(top.dim(), 1u);
  EXPECT_NEAR(top(0, 0), m.matrix().determinant(), 1e-12);
  EXPECT_TRUE(exterior_power(SquareMatrix::identity(3), 2) == SquareMatrix::identity(3));
  const auto w = exterior_power(SquareMatrix::diagonal({2.0, 3.0, 5.0}), 2);
  EXPECT_TRUE(w == SquareMatrix::diagonal({6.0, 10.0, 15.0}));
  EXPECT_THROW(exterior_power(m, 0), Error);
  EXPECT_THROW(exterior_power(m, 4), Error);
}

TEST(FubiniStudy, Distances) {
  const ProjectivePoint e1(vec({1, 0})), e2(vec({0, 1})), diag(vec({1, 1}));
  EXPECT_NEAR(fs_distance(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(fs_distance(e1, e1), 0.0, 1e-15);
  EXPECT_NEAR(fs_distance(e1, diag), std::sin(std::numbers::pi / 4), 1e-15);
  EXPECT_NEAR(fs_distance(ProjectivePoint(vec({-3, 0})), e1), 0.0, 1e-15);
  EXPECT_THROW(fs_distance(e1, ProjectivePoint(vec({1, 0, 0}))), Error);
}

TEST(FubiniStudy, PointToHyperplane) {
  const ProjectiveHyperplane h(vec({0, 0, 1}));
  EXPECT_NEAR(fs_point_to_hyperplane(ProjectivePoint(vec({0, 0, 1})), h), 1.0, 1e-15);
  EXPECT_NEAR(fs_point_to_hyperplane(ProjectivePoint(vec({1, 2, 0})), h), 0.0, 1e-15);
  EXPECT_NEAR(fs_point_to_hyperplane(ProjectivePoint(vec({1, 1, 1})), h), 1.0 / std::sqrt(3.0), 1e-15);
  // the same value as the minimum of fs_distance over points of the hyperplane
  const ProjectivePoint p(vec({1, 1, 1}));
  double best = 1.0;
  for (int i = 0; i < 3600; ++i) {
    const double t = i * std::numbers::pi / 3600;
    best = std::min(best, fs_distance(p, ProjectivePoint(vec({std::cos(t), std::sin(t), 0}))));
  }
  EXPECT_NEAR(best, 1.0 / std::sqrt(3.0), 1e-6);
}

TEST(ProjectiveAction, Examples) {
  const ProjectivePoint p(vec({0.3, -0.4}));
  EXPECT_NEAR(fs_distance(projective_action(SquareMatrix::identity(2), p), p), 0.0, 1e-15);
  const ProjectivePoint e2(vec({0, 1}));
  EXPECT_NEAR(fs_distance(projective_action(SquareMatrix::diagonal({std::exp(3.0), std::exp(-3.0)}), e2), e2), 0.0,
              1e-15);
  const auto img = projective_action(SquareMatrix::from_rows({{1, 1}, {0, 1}}), e2);
  EXPECT_NEAR(img.representative()(0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(img.representative()(1), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Lipschitz, ClosedFormsAndSampledRatio) {
  EXPECT_NEAR(lipschitz_bound(SquareMatrix::identity(3)), 1.0, 1e-14);
  const double e = std::exp(1.0);
  EXPECT_NEAR(lipschitz_bound(SquareMatrix::diagonal({e, 1.0 / e})), e * e, 1e-12);
  properties::Draws draw(11, 0);
  const auto m = draw.invertible(3);
  double ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = draw.point(3), q = draw.point(3);
    ratio = std::max(ratio, fs_distance(projective_action(m, p), projective_action(m, q)) / fs_distance(p, q));
  }
  EXPECT_GE(lipschitz_bound(m) * (1 + 1e-12), ratio);
}

TEST(Norms, Examples) {
  EXPECT_NEAR(operator_norm(SquareMatrix::identity(2)), 1.0, 1e-15);
  EXPECT_NEAR(spectral_radius(SquareMatrix::identity(2)), 1.0, 1e-15);
  const auto shear = SquareMatrix::from_rows({{1, 1}, {0, 1}});
  EXPECT_NEAR(operator_norm(shear), std::exp(kLogPhi), 1e-12);
  EXPECT_NEAR(spectral_radius(shear), 1.0, 1e-12);
  const auto d = SquareMatrix::diagonal({3.0, 2.0});
  EXPECT_NEAR(operator_norm(d), 3.0, 1e-14);
  EXPECT_NEAR(spectral_radius(d), 3.0, 1e-14);
}

TEST(SquareMatrixValidation, Errors) {
  auto kind = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;  // nothing thrown
  };
  EXPECT_EQ(kind([] { SquareMatrix::from_rows({{1, 2}, {2, 4}}); }), ErrorKind::SingularMatrix);
  EXPECT_EQ(kind([] { SquareMatrix::from_rows({{1, NAN}, {0, 1}}); }), ErrorKind::NonFinite);
  EXPECT_EQ(kind([] { SquareMatrix::from_rows({{1, 0}, {0}}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind([] { ProjectivePoint(vec({0, 0})); }), ErrorKind::NonFinite);
}

TEST(Philox, KnownAnswerVectors) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAreAddressable) {
  const CounterStream a(7, 0), b(7, 0), c(7, 1);
  for (std::uint64_t i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(i), b.uniform(i));
    EXPECT_GE(a.uniform(i), 0.0);
    EXPECT_LT(a.uniform(i), 1.0);
    EXPECT_GT(a.open_uniform(i), 0.0);
  }
  EXPECT_NE(a.uniform(0), c.uniform(0));
  EXPECT_DOUBLE_EQ(a.uniform(0), 0.95459712616869996);
}
