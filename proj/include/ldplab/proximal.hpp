#pragma once

// Proximality of linear maps and (r, eps)-proximality / Schottky
// certification by sampling the projective action.
//
// A certificate is "certified by sampling": the basin
//   B = { x : d(x, X_g^<) >= eps }
// is explored with a randomly shifted Sobol sequence and every claim that
// involves a supremum over B is checked on the recorded number of samples.

#include <boost/math/distributions/normal.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/philox.hpp"
#include "ldplab/product.hpp"

namespace ldplab {

enum class ProximalVerdict { Unchecked, Certified, RefutedGap, RefutedMapping, RefutedLipschitz, NotProximal };

constexpr std::string_view to_string(ProximalVerdict v) noexcept {
  switch (v) {
    case ProximalVerdict::Unchecked: return "Unchecked";
    case ProximalVerdict::Certified: return "Certified";
    case ProximalVerdict::RefutedGap: return "RefutedGap";
    case ProximalVerdict::RefutedMapping: return "RefutedMapping";
    case ProximalVerdict::RefutedLipschitz: return "RefutedLipschitz";
    case ProximalVerdict::NotProximal: return "NotProximal";
  }
  return "Unknown";
}

struct ProximalityCertificate {
  ProjectivePoint attractor;      // x_g^+
  ProjectiveHyperplane repeller;  // X_g^<
  double gap = 0.0;               // d(x_g^+, X_g^<)
  double top_modulus = 0.0;       // lambda_1(g)
  double r = 0.0;
  double epsilon = 0.0;
  double lipschitz_on_basin = 0.0;
  double max_image_distance = 0.0;  // sup over samples of d(g x, x_g^+)
  std::size_t sample_count = 0;
  ProximalVerdict verdict = ProximalVerdict::Unchecked;

  bool proximal() const noexcept { return verdict != ProximalVerdict::NotProximal; }
  bool certified() const noexcept { return verdict == ProximalVerdict::Certified; }
};

namespace detail {

struct SortedEigen {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd vectors;
  std::vector<Eigen::Index> order;  // by decreasing modulus
};

inline SortedEigen sorted_eigen(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenFailure, "eigen decomposition did not converge");
  }
  SortedEigen out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = solver.eigenvectors();
  out.order.resize(out.values.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(out.values[static_cast<std::size_t>(a)]) >
           std::abs(out.values[static_cast<std::size_t>(b)]);
  });
  return out;
}

inline Vector real_direction(const Eigen::VectorXcd& v) {
  // A real eigenvalue's eigenvector is real up to a complex phase.
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  const std::complex<double> phase = v(k) / std::abs(v(k));
  return (v / phase).real();
}

}  // namespace detail

/// Attractor, repeller and gap of a proximal matrix; verdict NotProximal when
/// the top modulus is shared (complex pair, tie, or relative gap <= 1e-9).
inline ProximalityCertificate analyze_proximal(const SquareMatrix& m) {
  ProximalityCertificate cert;
  const std::size_t d = m.dim();
  if (d == 1) {
    cert.attractor = ProjectivePoint::basis(1, 0);
    cert.repeller = ProjectiveHyperplane(Vector::Ones(1));
    cert.gap = 1.0;
    cert.top_modulus = std::abs(m(0, 0));
    return cert;
  }
  const auto right = detail::sorted_eigen(m.matrix());
  const auto top = right.values[static_cast<std::size_t>(right.order[0])];
  const double top_mod = std::abs(top);
  const double second_mod = std::abs(right.values[static_cast<std::size_t>(right.order[1])]);
  cert.top_modulus = top_mod;
  const bool complex_top = std::abs(top.imag()) > kEigenGapTolerance * top_mod;
  if (complex_top || !(top_mod - second_mod > kEigenGapTolerance * top_mod)) {
    cert.verdict = ProximalVerdict::NotProximal;
    return cert;
  }
  cert.attractor = ProjectivePoint(detail::real_direction(right.vectors.col(right.order[0])));

  // Left eigenvector of the dominant eigenvalue: the annihilator of the
  // invariant complement V_g^<.
  const auto left = detail::sorted_eigen(m.matrix().transpose());
  cert.repeller = ProjectiveHyperplane(detail::real_direction(left.vectors.col(left.order[0])));
  cert.gap = fs_point_to_hyperplane(cert.attractor, cert.repeller);
  return cert;
}

namespace detail {

/// Quasi-uniform unit vectors: a Sobol sequence shifted by a seed-derived
/// offset (mod 1) and mapped through the normal quantile.
class SphereSampler {
 public:
  SphereSampler(std::size_t dim, std::uint64_t seed) : dim_(dim), sobol_(static_cast<unsigned>(dim)) {
    const CounterStream rng(seed, 0x5eed);
    for (std::size_t k = 0; k < dim; ++k) shift_.push_back(rng.uniform(k));
  }

  Vector next() {
    static const boost::math::normal normal;
    Vector v(static_cast<Eigen::Index>(dim_));
    for (std::size_t k = 0; k < dim_; ++k) {
      const double raw = static_cast<double>(sobol_()) * 0x1.0p-64;
      double u = raw + shift_[k];
      u -= std::floor(u);
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      v(static_cast<Eigen::Index>(k)) = boost::math::quantile(normal, u);
    }
    return v;
  }

 private:
  std::size_t dim_;
  boost::random::sobol sobol_;
  std::vector<double> shift_;
};

inline void check_r_eps(double r, double epsilon, std::size_t sample_count) {
  if (!(epsilon > 0.0) || !(epsilon <= r) || !(r <= 0.5)) {
    throw Error(ErrorKind::BadParameters, "require 0 < epsilon <= r <= 1/2");
  }
  if (sample_count < 100) throw Error(ErrorKind::BadParameters, "sampleCount must be >= 100");
}

}  // namespace detail

/// Checks (a) gap >= 2r, (b) g maps the sampled basin into the eps-ball of the
/// attractor, (c) the sampled Lipschitz ratio on the basin is <= eps.
inline ProximalityCertificate certify_r_eps(const SquareMatrix& m, double r, double epsilon,
                                            std::size_t sample_count, std::uint64_t seed) {
  detail::check_r_eps(r, epsilon, sample_count);
  ProximalityCertificate cert = analyze_proximal(m);
  cert.r = r;
  cert.epsilon = epsilon;
  cert.sample_count = sample_count;
  if (!cert.proximal()) return cert;
  constexpr double kSlack = 1e-10;
  if (cert.gap < 2.0 * r - kSlack) {
    cert.verdict = ProximalVerdict::RefutedGap;
    return cert;
  }

  const std::size_t d = m.dim();
  if (d == 1) {
    cert.verdict = ProximalVerdict::Certified;
    return cert;
  }
  const Matrix& g = m.matrix();
  const Vector& normal = cert.repeller.unit_normal();
  const Vector& attractor = cert.attractor.representative();
  auto image = [&](const Vector& x) { return detail::canonical_unit(g * x); };
  auto dist = [](const Vector& u, const Vector& v) { return std::min(1.0, (v - u.dot(v) * u).norm()); };

  detail::SphereSampler sampler(d, seed);
  std::vector<Vector> basin;
  basin.reserve(sample_count);
  const std::size_t max_draws = 1000 * sample_count;
  for (std::size_t draw = 0; basin.size() < sample_count && draw < max_draws; ++draw) {
    Vector x = sampler.next();
    x.normalize();
    if (std::abs(x.dot(normal)) >= epsilon) basin.push_back(std::move(x));
  }
  if (basin.size() < sample_count) {
    throw Error(ErrorKind::BadParameters, "basin too small to sample; epsilon is too large");
  }

  std::vector<Vector> images;
  images.reserve(basin.size());
  for (const auto& x : basin) {
    images.push_back(image(x));
    cert.max_image_distance = std::max(cert.max_image_distance, dist(images.back(), attractor));
  }

  // Far pairs (consecutive samples) and near pairs (a 1e-4 step from each
  // sample toward the next one) for the local Lipschitz constant.
  constexpr double kMinPairDistance = 1e-6;
  constexpr double kStep = 1e-4;
  double lip = 0.0;
  for (std::size_t i = 0; i < basin.size(); ++i) {
    const Vector& x = basin[i];
    const Vector& y = basin[(i + 1) % basin.size()];
    const double dxy = dist(x, y);
    if (dxy >= kMinPairDistance) lip = std::max(lip, dist(images[i], images[(i + 1) % basin.size()]) / dxy);
    Vector t = y - x.dot(y) * x;
    if (t.norm() < 1e-12) continue;
    t.normalize();
    Vector z = x + kStep * t;
    z.normalize();
    if (std::abs(z.dot(normal)) < epsilon) z = x - kStep * t, z.normalize();
    if (std::abs(z.dot(normal)) < epsilon) continue;
    const double dxz = dist(x, z);
    if (dxz >= kMinPairDistance) lip = std::max(lip, dist(images[i], image(z)) / dxz);
  }
  cert.lipschitz_on_basin = lip;
  // both measurements are always reported; the verdict names the first failure
  if (cert.max_image_distance > epsilon + kSlack) {
    cert.verdict = ProximalVerdict::RefutedMapping;
  } else {
    cert.verdict = lip <= epsilon + kSlack ? ProximalVerdict::Certified : ProximalVerdict::RefutedLipschitz;
  }
  return cert;
}

struct ThetaCertificate {
  std::vector<std::pair<int, ProximalityCertificate>> per_index;
  bool all_certified = false;
};

inline void check_theta(std::span<const int> theta, std::size_t dim) {
  for (int i : theta) {
    if (i < 1 || i >= static_cast<int>(dim)) {
      throw Error(ErrorKind::BadIndex, "theta index " + std::to_string(i) + " outside [1, d-1]");
    }
  }
}

/// (r, eps)-certification of Lambda^i g for every i in theta.
inline ThetaCertificate theta_certify(const SquareMatrix& m, std::span<const int> theta, double r,
                                      double epsilon, std::size_t sample_count, std::uint64_t seed) {
  check_theta(theta, m.dim());
  ThetaCertificate out;
  out.all_certified = true;
  for (int i : theta) {
    auto cert = certify_r_eps(exterior_power(m, i), r, epsilon, sample_count,
                              derive_seed(seed, static_cast<std::uint64_t>(i)));
    out.all_certified = out.all_certified && cert.certified();
    out.per_index.emplace_back(i, std::move(cert));
  }
  return out;
}

struct SchottkyCertificate {
  std::size_t member_count = 0;
  double r = 0.0;
  double epsilon = 0.0;
  double min_cross_gap = 0.0;
  std::vector<int> theta;
  std::vector<ThetaCertificate> members;
  bool verdict = false;
};

/// (theta, r, eps)-Schottky test: every member certified in each Lambda^i and
/// d(x_a^+, X_b^<) >= 6r for all ordered pairs (a, b), a == b included.
inline SchottkyCertificate is_schottky(std::span<const SquareMatrix> family,
                                       std::span<const int> theta, double r, double epsilon,
                                       std::size_t sample_count, std::uint64_t seed) {
  if (family.empty()) throw Error(ErrorKind::EmptySet, "family is empty");
  detail::check_r_eps(r, epsilon, sample_count);
  SchottkyCertificate out;
  out.member_count = family.size();
  out.r = r;
  out.epsilon = epsilon;
  out.theta.assign(theta.begin(), theta.end());
  bool all = true;
  for (std::size_t j = 0; j < family.size(); ++j) {
    out.members.push_back(theta_certify(family[j], theta, r, epsilon, sample_count, derive_seed(seed, j)));
    all = all && out.members.back().all_certified;
  }
  double cross = INFINITY;
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (const auto& a : out.members) {
      const auto& ca = a.per_index[t].second;
      if (!ca.proximal()) continue;
      for (const auto& b : out.members) {
        const auto& cb = b.per_index[t].second;
        if (!cb.proximal()) continue;
        cross = std::min(cross, fs_point_to_hyperplane(ca.attractor, cb.repeller));
      }
    }
  }
  out.min_cross_gap = std::isfinite(cross) ? cross : 0.0;
  out.verdict = all && out.min_cross_gap >= 6.0 * r - 1e-10;
  return out;
}

struct NarrownessReport {
  double attractor_diameter = 0.0;
  double max_repeller_hausdorff = 0.0;
  double a = 0.0;
};

/// Diameter of the attractor set and largest pairwise repeller distance,
/// maximized over Lambda^i, i in theta.
inline NarrownessReport narrowness(std::span<const SquareMatrix> family, std::span<const int> theta) {
  if (family.empty()) throw Error(ErrorKind::EmptySet, "family is empty");
  check_theta(theta, family.front().dim());
  NarrownessReport rep;
  for (int i : theta) {
    std::vector<ProximalityCertificate> certs;
    for (std::size_t j = 0; j < family.size(); ++j) {
      auto c = analyze_proximal(exterior_power(family[j], i));
      if (!c.proximal()) {
        throw Error(ErrorKind::NotProximal, "member " + std::to_string(j) +
                                                " is not proximal in exterior power " +
                                                std::to_string(i));
      }
      certs.push_back(std::move(c));
    }
    for (const auto& a : certs) {
      for (const auto& b : certs) {
        rep.attractor_diameter = std::max(rep.attractor_diameter, fs_distance(a.attractor, b.attractor));
        rep.max_repeller_hausdorff =
            std::max(rep.max_repeller_hausdorff, hyperplane_distance(a.repeller, b.repeller));
      }
    }
  }
  rep.a = std::max(rep.attractor_diameter, rep.max_repeller_hausdorff);
  return rep;
}

/// log lambda_1(g_l^{n_l} ... g_1^{n_1}) - sum_i n_i log lambda_1(g_i), with
/// gens[0] applied first.
inline double product_spectral_deviation(std::span<const SquareMatrix> gens,
                                         std::span<const std::size_t> exponents) {
  if (gens.empty() || gens.size() != exponents.size()) {
    throw Error(ErrorKind::BadParameters, "need one positive exponent per generator");
  }
  WalkState state = WalkState::identity(gens.front().dim());
  double expected = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (exponents[i] == 0) throw Error(ErrorKind::BadParameters, "exponents must be positive");
    const auto cert = analyze_proximal(gens[i]);
    if (!cert.proximal()) {
      throw Error(ErrorKind::NotProximal, "generator " + std::to_string(i) + " is not proximal");
    }
    const Factor f(gens[i]);
    for (std::size_t k = 0; k < exponents[i]; ++k) state.apply(f);
    expected += static_cast<double>(exponents[i]) * std::log(cert.top_modulus);
  }
  return state.top_jordan() - expected;
}

/// ||lambda(g) - kappa(g)||_inf.
inline double kappa_lambda_gap(const SquareMatrix& m) {
  const auto k = cartan_projection(m);
  const auto l = jordan_projection(m);
  double gap = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) gap = std::max(gap, std::abs(l[i] - k[i]));
  return gap;
}

}  // namespace ldplab
