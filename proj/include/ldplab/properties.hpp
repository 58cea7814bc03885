#pragma once

// Randomized invariant checks over the whole library. Each check draws its
// inputs from a counter-based stream, so a (seed, cases) pair always runs the
// same inputs, and reports how many cases failed and the worst violation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ldplab/benchmarks.hpp"
#include "ldplab/error.hpp"
#include "ldplab/hull.hpp"
#include "ldplab/io.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"
#include "ldplab/philox.hpp"
#include "ldplab/product.hpp"
#include "ldplab/proximal.hpp"
#include "ldplab/rate.hpp"
#include "ldplab/spectrum.hpp"
#include "ldplab/walk.hpp"

namespace ldplab::properties {

struct PropertyResult {
  PropertyResult() = default;
  explicit PropertyResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest violation seen (0 when none)
  std::string first_failure;

  bool passed() const noexcept { return failures == 0 && cases > 0; }

  void record(bool ok, double violation, const std::string& what = {}) {
    ++cases;
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
      worst = std::max(worst, violation);
    }
  }
};

/// Sequential draws from one Philox stream.
class Draws {
 public:
  Draws(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  double uniform() { return rng_.uniform(next_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); }

  double normal() {
    const double u = rng_.open_uniform(next_++), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  Matrix gaussian(std::size_t d) {
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal();
    return m;
  }

  /// Gaussian matrix, redrawn until comfortably invertible.
  SquareMatrix invertible(std::size_t d, double min_sigma_ratio = 1e-3) {
    while (true) {
      Matrix m = gaussian(d);
      const auto sv = ldplab::detail::singular_values(m);
      if (sv.back() > min_sigma_ratio * sv.front()) return SquareMatrix(std::move(m));
    }
  }

  Matrix orthogonal(std::size_t d) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(d));
    return qr.householderQ();
  }

  /// Q diag(exp(u_i)) with |u_i| <= spread: condition number <= exp(2 spread).
  SquareMatrix well_conditioned(std::size_t d, double spread) {
    Vector u(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = std::exp(uniform(-spread, spread));
    return SquareMatrix(orthogonal(d) * u.asDiagonal() * orthogonal(d));
  }

  ProjectivePoint point(std::size_t d) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal();
    return ProjectivePoint(v);
  }

 private:
  CounterStream rng_;
  std::uint64_t next_ = 0;
};

namespace detail {

inline std::vector<double> partial_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (s += v[i]);
  return out;
}

inline std::size_t dim_of(Draws& draw) { return 2 + draw.index(3); }  // 2..4

}  // namespace detail

// linalg ---------------------------------------------------------------------

inline PropertyResult cartan_sorted_and_det(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"cartan sorted, sum = log|det|"};
  Draws draw(seed, 1);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto m = draw.invertible(detail::dim_of(draw));
    const auto k = cartan_projection(m);
    double worst = std::abs(k.sum() - std::log(std::abs(m.matrix().determinant())));
    bool ok = worst <= 1e-8;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) ok = ok && k[i] >= k[i + 1];
    r.record(ok, worst);
  }
  return r;
}

inline PropertyResult weyl_majorization(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"jordan majorized by cartan"};
  Draws draw(seed, 2);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto m = draw.invertible(detail::dim_of(draw));
    const auto pk = detail::partial_sums(cartan_projection(m).components);
    const auto pl = detail::partial_sums(jordan_projection(m).components);
    double excess = std::abs(pk.back() - pl.back());
    bool ok = excess <= 1e-8;
    for (std::size_t i = 0; i < pk.size(); ++i) {
      excess = std::max(excess, pl[i] - pk[i]);
      ok = ok && pl[i] <= pk[i] + 1e-8;
    }
    r.record(ok, excess);
  }
  return r;
}

inline PropertyResult exterior_subadditivity(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"partial sums of kappa subadditive"};
  Draws draw(seed, 3);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const auto a = draw.invertible(d), b = draw.invertible(d);
    const auto pa = detail::partial_sums(cartan_projection(a).components);
    const auto pb = detail::partial_sums(cartan_projection(b).components);
    const auto pab = detail::partial_sums(cartan_projection(a * b).components);
    double excess = 0.0;
    for (std::size_t i = 0; i < d; ++i) excess = std::max(excess, pab[i] - pa[i] - pb[i]);
    r.record(excess <= 1e-8, excess);
  }
  return r;
}

inline PropertyResult scalar_shift(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"kappa(cM) = kappa(M) + log c"};
  Draws draw(seed, 4);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto m = draw.invertible(detail::dim_of(draw));
    const double scale = std::exp(draw.uniform(-20.0, 20.0));
    const auto k = cartan_projection(m);
    const auto ks = cartan_projection(SquareMatrix(m.matrix() * scale));
    double worst = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) worst = std::max(worst, std::abs(ks[i] - k[i] - std::log(scale)));
    r.record(worst <= 1e-8, worst);
  }
  return r;
}

inline PropertyResult fs_metric_axioms(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"Fubini-Study metric axioms"};
  Draws draw(seed, 5);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const auto p = draw.point(d), q = draw.point(d), s = draw.point(d);
    const double pq = fs_distance(p, q), qp = fs_distance(q, p);
    const double ps = fs_distance(p, s), qs = fs_distance(q, s);
    const auto flipped = ProjectivePoint(Vector(-p.representative()));
    double bad = std::abs(pq - qp);
    bad = std::max(bad, fs_distance(p, p));
    bad = std::max(bad, fs_distance(p, flipped));
    bad = std::max(bad, ps - (pq + qs));
    bad = std::max(bad, pq - 1.0);
    r.record(bad <= 1e-10 && pq >= 0.0, bad);
  }
  return r;
}

inline PropertyResult jordan_power_homogeneity(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"jordan(M^k) = k jordan(M)"};
  Draws draw(seed, 6);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    // diagonalizable: P D P^-1 with a well-conditioned P
    Vector ev(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = (draw.uniform() < 0.5 ? -1.0 : 1.0) * std::exp(draw.uniform(-1.0, 1.0));
    const Matrix p = draw.well_conditioned(d, 0.5).matrix();
    const SquareMatrix m(p * ev.asDiagonal() * p.inverse());
    const auto l = jordan_projection(m);
    const std::size_t k = 2 + draw.index(4);
    Matrix power = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < k; ++i) power = power * m.matrix();
    const auto lk = jordan_projection(SquareMatrix(power));
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(lk[i] - static_cast<double>(k) * l[i]));
    r.record(worst <= 1e-6, worst);
  }
  return r;
}

inline PropertyResult exterior_functoriality(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"exterior power functorial"};
  Draws draw(seed, 7);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const auto a = draw.invertible(d), b = draw.invertible(d);
    const int k = 1 + static_cast<int>(draw.index(d));
    const Matrix lhs = exterior_power(a * b, k).matrix();
    const Matrix rhs = exterior_power(a, k).matrix() * exterior_power(b, k).matrix();
    const double rel = (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300);
    r.record(rel <= 1e-8, rel);
  }
  return r;
}

inline PropertyResult lipschitz_bound_holds(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"projective action within Lipschitz bound"};
  Draws draw(seed, 8);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const auto m = draw.invertible(d);
    const double bound = lipschitz_bound(m);
    const auto p = draw.point(d), q = draw.point(d);
    const double before = fs_distance(p, q);
    const double after = fs_distance(projective_action(m, p), projective_action(m, q));
    const double excess = after - bound * before * (1.0 + 1e-8);
    r.record(excess <= 1e-12, excess);
  }
  return r;
}

inline PropertyResult radius_below_norm(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"spectral radius <= operator norm"};
  Draws draw(seed, 9);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto m = draw.invertible(detail::dim_of(draw));
    const double excess = spectral_radius(m) - operator_norm(m);
    r.record(excess <= 1e-10 * operator_norm(m), excess);
  }
  return r;
}

// walk -----------------------------------------------------------------------

inline PropertyResult renormalization_exactness(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"accumulated kappa matches direct product"};
  Draws draw(seed, 10);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const std::size_t len = 1 + draw.index(12);
    std::vector<SquareMatrix> word;
    Matrix direct = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < len; ++i) {
      word.push_back(draw.well_conditioned(d, 0.7));
      direct = word.back().matrix() * direct;
    }
    const auto via_state = accumulate(word).cartan();
    const auto via_direct = cartan_projection(SquareMatrix::trusted(direct));
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(via_state[i] - via_direct[i]));
    r.record(worst <= 1e-8, worst);
  }
  return r;
}

inline PropertyResult commuting_reduction(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"positive diagonal samples are running averages"};
  const auto mu = benchmarks::diagonal_pair();
  const std::size_t n = 25;
  const auto samples = kappa_samples(mu, n, cases, seed);
  for (std::size_t s = 0; s < cases; ++s) {
    const auto word = sample_word(mu, n, s, seed);
    std::vector<double> expected(2, 0.0);
    for (std::size_t a : word) {
      const auto k = cartan_projection(mu.atom(a).matrix);
      expected[0] += k[0] / static_cast<double>(n);
      expected[1] += k[1] / static_cast<double>(n);
    }
    const double worst = std::max(std::abs(samples[s][0] - expected[0]), std::abs(samples[s][1] - expected[1]));
    r.record(worst <= 1e-12, worst);
  }
  return r;
}

inline PropertyResult kappa_dominates_lambda(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"kappa_1 >= lambda_1 on paired samples"};
  Draws draw(seed, 11);
  std::vector<Atom> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back({"g" + std::to_string(i), draw.invertible(3), 1.0 / 3.0});
  const MeasureSpec mu(std::move(atoms), 1e-12);
  const auto paired = paired_samples(mu, 15, cases, seed);
  for (std::size_t s = 0; s < cases; ++s) {
    const double excess = paired.lambda[s][0] - paired.kappa[s][0];
    r.record(excess <= 1e-8, excess);
  }
  return r;
}

inline PropertyResult worker_determinism(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"results independent of worker count"};
  const auto mu = benchmarks::boundary_example(2);
  const auto base = paired_samples(mu, 12, cases, seed, {1, true, true});
  for (std::size_t workers : {2u, 8u}) {
    const auto other = paired_samples(mu, 12, cases, seed, {workers, true, true});
    for (std::size_t s = 0; s < cases; ++s) {
      const bool same = base.kappa[s].components == other.kappa[s].components &&
                        base.lambda[s].components == other.lambda[s].components;
      r.record(same, 1.0, "sample " + std::to_string(s) + " workers " + std::to_string(workers));
    }
  }
  const auto grid = RateGrid::top(0.0, 3.5, 0.05);
  const auto e1 = exact_rate(mu, 8, grid, kDefaultWordBudget, 1);
  const auto e4 = exact_rate(mu, 8, grid, kDefaultWordBudget, 4);
  r.record(e1.values == e4.values, 1.0, "exact rate");
  const auto m1 = mc_rate(mu, 10, 5000, grid, seed, 1);
  const auto m3 = mc_rate(mu, 10, 5000, grid, seed, 3);
  r.record(m1.values == m3.values, 1.0, "monte carlo rate");
  return r;
}

// proximal -------------------------------------------------------------------

inline PropertyResult proximal_matches_jordan_gap(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"proximal iff jordan gap > log(1 + tau)"};
  Draws draw(seed, 12);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto m = draw.invertible(detail::dim_of(draw));
    const auto l = jordan_projection(m);
    const bool gap = l[0] - l[1] > std::log1p(kEigenGapTolerance);
    const bool prox = analyze_proximal(m).proximal();
    r.record(gap == prox, 1.0);
  }
  return r;
}

inline PropertyResult attractor_equivariance(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"attractor fixed and conjugation equivariant"};
  Draws draw(seed, 13);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t d = detail::dim_of(draw);
    const auto m = draw.invertible(d);
    const auto cert = analyze_proximal(m);
    if (!cert.proximal()) continue;
    const Matrix q = draw.orthogonal(d);
    const auto conj = analyze_proximal(SquareMatrix(q * m.matrix() * q.transpose()));
    const double fixed = fs_distance(projective_action(m, cert.attractor), cert.attractor);
    const double moved = fs_distance(conj.attractor, ProjectivePoint(Vector(q * cert.attractor.representative())));
    r.record(fixed <= 1e-8 && moved <= 1e-8, std::max(fixed, moved));
  }
  return r;
}

inline PropertyResult certified_radius_below_norm(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"certified: lambda_1 <= ||g||"};
  Draws draw(seed, 14);
  for (std::size_t c = 0; c < cases; ++c) {
    const double t = draw.uniform(2.0, 6.0);
    const SquareMatrix g(draw.orthogonal(2) * Vector(Eigen::Vector2d(std::exp(t), std::exp(-t))).asDiagonal() *
                         draw.orthogonal(2));
    const auto cert = certify_r_eps(g, 0.2, 0.1, 200, derive_seed(seed, c));
    if (!cert.certified()) continue;
    const double excess = cert.top_modulus - operator_norm(g);
    r.record(excess <= 1e-10 * operator_norm(g) && cert.gap >= 2 * cert.r - 1e-10, excess);
  }
  return r;
}

// rate -----------------------------------------------------------------------

inline MeasureSpec random_measure(Draws& draw, std::size_t atoms, std::size_t d) {
  std::vector<Atom> list;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) total += w.emplace_back(draw.uniform(0.2, 1.0));
  for (std::size_t i = 0; i < atoms; ++i) list.push_back({"g" + std::to_string(i), draw.invertible(d), w[i] / total});
  return MeasureSpec(std::move(list), 1e-9);
}

inline PropertyResult rate_invariants(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"Lambda(0) = 0, exact <= -log min weight, Legendre convex"};
  Draws draw(seed, 15);
  const auto duals = dual_box(1, dual_ladder());
  for (std::size_t c = 0; c < cases; ++c) {
    const auto mu = random_measure(draw, 2 + draw.index(2), 2);
    const std::size_t n = 4 + draw.index(3);
    const auto lap = laplace_transform(mu, n, GridMode::TopCoordinate, duals, 1e5, 1000, seed);
    for (std::size_t i = 0; i < duals.size(); ++i) {
      if (duals[i][0] == 0.0) r.record(lap.values[i] == 0.0, std::abs(lap.values[i]), "Lambda(0)");
    }
    const auto dist = exact_distribution(mu, n);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : dist) lo = std::min(lo, p.kappa[0]), hi = std::max(hi, p.kappa[0]);
    const auto grid = RateGrid::top(lo - 0.05, hi + 0.05, std::max(0.01, (hi - lo) / 20.0));
    const auto exact = exact_rate(mu, n, grid);
    const double cap = -std::log(mu.min_positive_weight());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (exact.finite(i)) r.record(exact.values[i] <= cap + 1e-12, exact.values[i] - cap, "rate cap");
    }
    const auto leg = legendre_conjugate(lap, grid);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double excess = leg.values[i] - 0.5 * (leg.values[i - 1] + leg.values[i + 1]);
      r.record(excess <= 1e-10, excess, "Legendre midpoint convexity");
    }
  }
  return r;
}

inline PropertyResult exact_vs_monte_carlo(std::size_t samples, std::uint64_t seed) {
  PropertyResult r{"Monte Carlo within 3 intervals of exact"};
  const auto mu = benchmarks::boundary_example(1);
  const std::size_t n = 10;
  const auto grid = RateGrid::top(0.0, 3.0, 0.1);
  const auto exact = exact_rate(mu, n, grid);
  const auto mc = mc_rate(mu, n, samples, grid, seed);
  const double limit = std::log(static_cast<double>(samples)) / static_cast<double>(n) - 0.2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!exact.finite(i) || exact.values[i] > limit) continue;
    const double tol = 3.0 * std::max(mc.ci_half_width(i), 1e-12);
    const double off = std::abs(mc.values[i] - exact.values[i]);
    r.record(mc.finite(i) && off <= tol, off - tol, "cell " + std::to_string(i));
  }
  return r;
}

// spectrum -------------------------------------------------------------------

inline PropertyResult jsr_invariants(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"JSR brackets monotone, pruning sound, single matrix"};
  Draws draw(seed, 16);
  for (std::size_t c = 0; c < cases; ++c) {
    std::vector<SquareMatrix> set;
    const std::size_t count = 2 + draw.index(2);
    for (std::size_t i = 0; i < count; ++i) set.push_back(draw.invertible(2));
    const std::size_t depth = 6;
    const auto pruned = jsr_bounds(set, depth, 0.1);
    const auto full = jsr_bounds(set, depth, INFINITY);
    r.record(std::abs(pruned.lower - full.lower) <= 1e-12 && std::abs(pruned.upper - full.upper) <= 1e-12,
             std::abs(pruned.upper - full.upper) + std::abs(pruned.lower - full.lower), "pruning");
    bool monotone = full.lower <= full.upper + 1e-9;
    for (std::size_t k = 1; k < full.lower_by_depth.size(); ++k) {
      monotone = monotone && full.lower_by_depth[k] >= full.lower_by_depth[k - 1] &&
                 full.upper_by_depth[k] <= full.upper_by_depth[k - 1];
    }
    r.record(monotone, 1.0, "monotone");
    const auto sub = subradius_bounds(set, depth);
    r.record(sub.lower <= sub.upper + 1e-9 && sub.upper <= full.lower + 1e-9, sub.lower - sub.upper, "subradius");

    const auto& g = set.front();
    const double log_rho = std::log(spectral_radius(g));
    const auto single = jsr_bounds(std::span<const SquareMatrix>(&g, 1), depth, INFINITY);
    bool contains = true;
    for (std::size_t k = 0; k < single.lower_by_depth.size(); ++k) {
      contains = contains && single.lower_by_depth[k] <= log_rho + 1e-9 && log_rho <= single.upper_by_depth[k] + 1e-9;
    }
    r.record(contains, 1.0, "single matrix bracket");
  }
  // normal matrices collapse at depth 1
  const auto sym = SquareMatrix::from_rows({{2, 1}, {1, 3}});
  const auto one = jsr_bounds(std::span<const SquareMatrix>(&sym, 1), 1);
  r.record(std::abs(one.upper - one.lower) <= 1e-12, one.upper - one.lower, "normal matrix");
  return r;
}

inline PropertyResult hull_and_hausdorff(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"hulls contain clouds, Hausdorff is a metric"};
  Draws draw(seed, 17);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t dim = 1 + draw.index(3);
    auto cloud = [&](std::size_t size) {
      std::vector<Point> pts(size, Point(dim));
      for (auto& p : pts)
        for (auto& x : p) x = draw.normal();
      return pts;
    };
    const auto a = cloud(3 + draw.index(20)), b = cloud(3 + draw.index(20)), e = cloud(3 + draw.index(20));
    const ConvexHull hull(a);
    double outside = 0.0;
    for (const auto& p : a) outside = std::max(outside, hull.distance(p));
    const double ab = hausdorff(a, b), ba = hausdorff(b, a);
    const double bad = std::max({outside - 1e-9, std::abs(ab - ba), hausdorff(a, a), ab - hausdorff(a, e) - hausdorff(e, b)});
    r.record(bad <= 1e-12, bad);
  }
  return r;
}

inline PropertyResult spectrum_trends(std::uint64_t /*seed*/) {
  PropertyResult r{"spectrum clouds on shipped benchmarks"};
  const auto diag = benchmarks::diagonal_pair().support();
  const auto sd = iterate_spectrum(diag, 10);
  for (const auto& lv : sd.levels) {
    double bad = 0.0;
    for (const auto& p : lv.cloud) bad = std::max(bad, lv.hull.distance(p));
    r.record(bad <= 1e-9, bad, "hull contains cloud");
    const auto v = lv.hull.vertices();
    const double lo = std::min(v.front()[0], v.back()[0]), hi = std::max(v.front()[0], v.back()[0]);
    r.record(std::abs(lo - 3.0) <= 1e-9 && std::abs(hi - 3.5) <= 1e-9, std::abs(lo - 3.0) + std::abs(hi - 3.5), "diagonal hull");
  }
  // Hausdorff steps eventually decrease on the truncated boundary example.
  const auto ex = benchmarks::boundary_example(2).support();
  const auto se = iterate_spectrum(ex, 8);
  const auto& levels = se.levels;
  for (std::size_t k = levels.size() - 3; k + 1 < levels.size(); ++k) {
    const double prev = *levels[k].hausdorff_to_previous, next = *levels[k + 1].hausdorff_to_previous;
    r.record(next <= prev + 1e-12, next - prev, "Hausdorff steps decreasing");
  }
  // kappa_1 - lambda_1 over depth-n words shrinks like C / n on a Schottky pair
  // (depth 1 is 0: both atoms are symmetric)
  const auto pair = benchmarks::schottky_pair(5.0, std::numbers::pi / 6.0);
  const auto sp = iterate_spectrum(pair, 10);
  const double c2 = 2.0 * sp.levels[1].max_top_gap;
  for (std::size_t k = 2; k < sp.levels.size(); ++k) {
    const auto& lv = sp.levels[k];
    r.record(lv.max_top_gap <= sp.levels[k - 1].max_top_gap + 1e-12,
             lv.max_top_gap - sp.levels[k - 1].max_top_gap, "kappa-lambda gap shrinking");
    const double excess = static_cast<double>(lv.depth) * lv.max_top_gap - c2;
    r.record(excess <= 1e-3, excess, "n * gap bounded");
  }
  return r;
}

// io -------------------------------------------------------------------------

inline PropertyResult measure_round_trip(std::size_t cases, std::uint64_t seed) {
  PropertyResult r{"measure JSON round trip"};
  Draws draw(seed, 18);
  for (std::size_t c = 0; c < cases; ++c) {
    // dyadic weights sum to exactly 1, so parsing never renormalizes
    const std::size_t count = 1 + draw.index(4), d = 1 + draw.index(4);
    std::vector<std::size_t> units(count, 1);
    for (std::size_t u = count; u < 64; ++u) ++units[draw.index(count)];
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < count; ++i) {
      atoms.push_back({"g" + std::to_string(i), draw.invertible(d), static_cast<double>(units[i]) / 64.0});
    }
    const MeasureSpec mu(std::move(atoms));
    const auto text = io::measure_to_json(mu).dump(2);
    const auto back = io::parse_measure(text);
    bool same = back.size() == mu.size() && back.dim() == mu.dim();
    for (std::size_t i = 0; same && i < mu.size(); ++i) {
      same = back.atom(i).label == mu.atom(i).label && back.atom(i).weight == mu.atom(i).weight &&
             back.atom(i).matrix == mu.atom(i).matrix;
    }
    same = same && io::measure_to_json(back).dump(2) == text;
    r.record(same, 1.0);
  }
  return r;
}

/// Every check above with `cases` random inputs each (lighter checks scale
/// their own counts down where one case is itself an experiment).
inline std::vector<PropertyResult> run_all(std::size_t cases, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  out.push_back(cartan_sorted_and_det(cases, seed));
  out.push_back(weyl_majorization(cases, seed));
  out.push_back(exterior_subadditivity(cases, seed));
  out.push_back(scalar_shift(cases, seed));
  out.push_back(fs_metric_axioms(cases, seed));
  out.push_back(jordan_power_homogeneity(cases, seed));
  out.push_back(exterior_functoriality(cases, seed));
  out.push_back(lipschitz_bound_holds(cases, seed));
  out.push_back(radius_below_norm(cases, seed));
  out.push_back(renormalization_exactness(cases, seed));
  out.push_back(commuting_reduction(cases, seed));
  out.push_back(kappa_dominates_lambda(cases, seed));
  out.push_back(worker_determinism(cases, seed));
  out.push_back(proximal_matches_jordan_gap(cases, seed));
  out.push_back(attractor_equivariance(cases, seed));
  out.push_back(certified_radius_below_norm(std::max<std::size_t>(1, cases / 10), seed));
  out.push_back(rate_invariants(std::max<std::size_t>(1, cases / 100), seed));
  out.push_back(exact_vs_monte_carlo(std::max<std::size_t>(1000, cases * 10), seed));
  out.push_back(jsr_invariants(std::max<std::size_t>(1, cases / 100), seed));
  out.push_back(hull_and_hausdorff(cases, seed));
  out.push_back(spectrum_trends(seed));
  out.push_back(measure_round_trip(cases, seed));
  return out;
}

}  // namespace ldplab::properties
