#pragma once

// Acceptance experiments 1-10. Each returns a pass flag, a one-line detail and
// the numbers it was decided on. Reference values come from closed-form
// arithmetic in `oracle`, which shares no code with the estimators.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/benchmarks.hpp"
#include "ldplab/properties.hpp"
#include "ldplab/proximal.hpp"
#include "ldplab/rate.hpp"
#include "ldplab/spectrum.hpp"
#include "ldplab/stats.hpp"
#include "ldplab/walk.hpp"

namespace ldplab::suite {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;
};

inline CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

namespace oracle {

inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// -(1/n) log P(Binomial(n, 1/2) = j).
inline double binomial_point_rate(int n, int j) {
  return std::log(2.0) - log_choose(n, j) / static_cast<double>(n);
}

/// Bernoulli(1/2) Cramer rate at frequency q.
inline double bernoulli_kl(double q) {
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return std::log(2.0) + xlogx(q) + xlogx(1.0 - q);
}

/// P(|B - n/2| > t) for B ~ Binomial(n, 1/2).
inline double binomial_two_sided_tail(int n, double t) {
  double p = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (std::abs(j - 0.5 * n) > t) p += std::exp(log_choose(n, j) - n * std::log(2.0));
  }
  return p;
}

}  // namespace oracle

namespace detail {

inline std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace detail

// 1 ---------------------------------------------------------------------------

inline CriterionResult commuting_cramer(const SuiteOptions& opt) {
  auto out = named(1, "commuting reduction: exact rate is the binomial rate");
  const int n = 20;
  const auto mu = benchmarks::diagonal_pair();
  // one lattice point 3 + j/40 per cell
  const auto grid = RateGrid::top(3.0, 3.5, 0.025);
  const auto est = exact_rate(mu, n, grid, kDefaultWordBudget, opt.workers);
  const double at_300 = est.values[0], at_325 = est.values[10];
  const double err_300 = std::abs(at_300 - std::log(2.0));
  const double err_325 = std::abs(at_325 - oracle::binomial_point_rate(n, 10));
  double worst_exact = 0.0, worst_kl = 0.0;
  for (int j = 0; j <= n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    worst_exact = std::max(worst_exact, std::abs(est.values[i] - oracle::binomial_point_rate(n, j)));
    if (j > 0 && j < n) {
      worst_kl = std::max(worst_kl, std::abs(est.values[i] - oracle::bernoulli_kl(j / static_cast<double>(n))));
    }
  }
  out.pass = err_300 <= 1e-9 && err_325 <= 1e-9 && worst_kl <= 0.1;
  out.metrics = {{"value_at_3.00", at_300}, {"value_at_3.25", at_325}, {"err_3.00", err_300},
                 {"err_3.25", err_325}, {"max_err_all_cells", worst_exact}, {"max_kl_gap_interior", worst_kl}};
  out.detail = "I(3.00)=" + detail::fmt(at_300, 12) + " I(3.25)=" + detail::fmt(at_325, 12) +
               " max|I-KL| interior=" + detail::fmt(worst_kl, 4);
  return out;
}

// 2 ---------------------------------------------------------------------------

inline CriterionResult legendre_identification(const SuiteOptions& opt) {
  auto out = named(2, "Legendre conjugate of Lambda_16 matches exact rate");
  const std::size_t n = 16;
  const auto mu = benchmarks::diagonal_pair();
  // two lattice points 3 + j/32 per cell, no lattice point on an edge
  const auto grid = RateGrid::top(3.015625, 3.515625, 0.0625);
  const auto exact = exact_rate(mu, n, grid, kDefaultWordBudget, opt.workers);
  const auto duals = dual_box(1, dual_ladder());
  const auto lap = laplace_transform(mu, n, GridMode::TopCoordinate, duals, kDefaultWordBudget, 100000, opt.seed,
                                     opt.workers);
  const auto leg = legendre_conjugate(lap, grid);
  double worst = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!exact.finite(i)) continue;
    ++cells;
    worst = std::max(worst, std::abs(leg.values[i] - exact.values[i]));
  }
  out.pass = cells > 0 && worst <= 0.1 && lap.method == LaplaceMethod::ExactEnumeration;
  out.metrics = {{"interior_cells", static_cast<double>(cells)}, {"sup_difference", worst}};
  out.detail = "sup |I* - I_16| over " + std::to_string(cells) + " interior cells = " + detail::fmt(worst, 4);
  return out;
}

// 3 ---------------------------------------------------------------------------

inline CriterionResult unique_zero(const SuiteOptions& opt) {
  auto out = named(3, "Monte Carlo rate vanishes at the Lyapunov vector");
  const std::size_t n = 30, samples = 100000;
  const double pitch = 0.025;
  const auto mu = benchmarks::diagonal_pair();
  const auto grid = RateGrid::top(3.0, 3.5, pitch);
  const auto est = mc_rate(mu, n, samples, grid, opt.seed, opt.workers);
  const auto lyap = lyapunov_estimate(mu, n, samples, derive_seed(opt.seed, 3), opt.workers);
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (est.finite(i) && (!est.finite(best) || est.values[i] < est.values[best])) best = i;
  }
  const double centre = grid.point(best)[0];
  const double offset = std::abs(centre - lyap.vector[0]);
  const bool located = offset <= pitch;
  const bool small = est.values[best] <= 0.02;
  // the same bound from the exact law: the heaviest cell of Binomial(30, 1/2)/60
  const auto exact = exact_rate(mu, n, grid, 2e9, opt.workers);
  const double exact_min = *std::min_element(exact.values.begin(), exact.values.end());
  out.pass = located && small;
  out.metrics = {{"argmin_centre", centre},          {"lyapunov_top", lyap.vector[0]},
                 {"offset", offset},                 {"min_value", est.values[best]},
                 {"min_ci_half_width", est.ci_half_width(best)}, {"exact_min_value", exact_min}};
  out.detail = "argmin " + detail::fmt(centre) + " vs lyapunov " + detail::fmt(lyap.vector[0]) + " (" +
               (located ? "ok" : "off") + "); min " + detail::fmt(est.values[best], 4) + " (exact n=30 floor " +
               detail::fmt(exact_min, 4) + ") vs bound 0.02";
  return out;
}

// 4 ---------------------------------------------------------------------------

inline CriterionResult deviation_decay_check(const SuiteOptions& opt) {
  auto out = named(4, "deviations off the Lyapunov vector decay exponentially");
  const double eps = 0.2;
  const auto mu = benchmarks::diagonal_pair();
  const auto lyap = lyapunov_estimate(mu, 30, 100000, derive_seed(opt.seed, 4), opt.workers);
  const std::vector<std::size_t> horizons{10, 15, 20};
  const auto decay = deviation_decay(mu, lyap.vector, eps, horizons, 100000, opt.seed, opt.workers);
  bool positive = true, trend = true;
  for (std::size_t i = 0; i < decay.size(); ++i) {
    positive = positive && decay[i].rate.value > 0.0 && !decay[i].rate.lower_bound_only;
    if (i > 0) {
      const double slack = 2.0 * std::hypot(decay[i].rate.half_width(), decay[i - 1].rate.half_width());
      trend = trend && decay[i].rate.value >= decay[i - 1].rate.value - slack;
    }
    out.metrics.emplace_back("rate_n" + std::to_string(decay[i].n), decay[i].rate.value);
    out.metrics.emplace_back("half_width_n" + std::to_string(decay[i].n), decay[i].rate.half_width());
  }
  // |kappa/n - (3.25, -3.25)| = sqrt(2) |B/n - 1/2| / 2 for B ~ Binomial(n, 1/2)
  const int n = 20;
  const double tail = oracle::binomial_two_sided_tail(n, n * eps * std::sqrt(2.0));
  const double exact_rate_20 = -std::log(tail) / n;
  const auto& last = decay.back().rate;
  const bool matches = std::abs(last.value - exact_rate_20) <= 3.0 * last.half_width();
  out.pass = positive && trend && matches;
  out.metrics.emplace_back("exact_tail_rate_n20", exact_rate_20);
  out.detail = "rates " + detail::fmt(decay[0].rate.value, 4) + ", " + detail::fmt(decay[1].rate.value, 4) + ", " +
               detail::fmt(decay[2].rate.value, 4) + "; n=20 exact " + detail::fmt(exact_rate_20, 4) + " +- 3*" +
               detail::fmt(last.half_width(), 3);
  return out;
}

// 5 ---------------------------------------------------------------------------

inline CriterionResult support_identification(const SuiteOptions& opt) {
  auto out = named(5, "support of the rate equals the joint spectrum");
  const auto diag = benchmarks::diagonal_pair();
  const auto diag_rate = exact_rate(diag, 20, RateGrid::top(3.0, 3.5, 0.025), kDefaultWordBudget, opt.workers);
  const auto diag_spec = iterate_spectrum(diag.support(), 12);
  const auto c1 = compare_support(diag_rate, diag_spec);

  const auto ex = benchmarks::boundary_example(2);
  const auto ex_rate = exact_rate(ex, 10, RateGrid::top(0.0, 4.0, 0.05), 1.1e6, opt.workers);
  const auto ex_spec = iterate_spectrum(ex.support(), 9);
  const auto c2 = compare_support(ex_rate, ex_spec);

  out.pass = c1.pass && c2.pass;
  out.metrics = {{"diagonal_distance", c1.distance}, {"diagonal_tolerance", c1.tolerance},
                 {"boundary_K2_distance", c2.distance}, {"boundary_K2_tolerance", c2.tolerance}};
  out.detail = "diagonal d_H=" + detail::fmt(c1.distance, 4) + " <= " + detail::fmt(c1.tolerance, 4) +
               "; K=2 d_H=" + detail::fmt(c2.distance, 4) + " <= " + detail::fmt(c2.tolerance, 4);
  return out;
}

// 6 ---------------------------------------------------------------------------

inline CriterionResult truncated_boundary_example(const SuiteOptions& opt) {
  auto out = named(6, "truncated boundary example: JSR, subradius, rate cap");
  const auto mu = benchmarks::boundary_example(4);
  const auto atoms = mu.support();
  const auto jsr = jsr_bounds(atoms, 1);
  const auto sub = subradius_bounds(atoms, 16);
  // grid point 3.0 is a cell centre
  const auto est = exact_rate(mu, 12, RateGrid::top(3.0, 3.05, 0.025), 3e9, opt.workers);
  const double cap = -std::log(mu.min_positive_weight());
  const bool jsr_ok = std::abs(jsr.lower - 3.75) <= 1e-6 && std::abs(jsr.upper - 3.75) <= 1e-6;
  const bool sub_ok = sub.lower >= -0.18 && sub.upper <= 0.18;
  const bool cap_ok = est.finite(0) && est.values[0] <= cap + 1e-9;
  out.pass = jsr_ok && sub_ok && cap_ok;
  out.metrics = {{"jsr_lower", jsr.lower}, {"jsr_upper", jsr.upper}, {"sub_lower", sub.lower},
                 {"sub_upper", sub.upper}, {"rate_at_3.0", est.values[0]}, {"rate_cap", cap}};
  out.detail = "jsr [" + detail::fmt(jsr.lower) + ", " + detail::fmt(jsr.upper) + "], sub [" + detail::fmt(sub.lower, 4) +
               ", " + detail::fmt(sub.upper, 4) + "], I_12(3.0)=" + detail::fmt(est.values[0], 6) + " <= " +
               detail::fmt(cap, 6);
  return out;
}

// 7 ---------------------------------------------------------------------------

inline CriterionResult proximality_ratio(const SuiteOptions& opt) {
  auto out = named(7, "certified proximal matrices: lambda_1 / ||g|| bounds");
  const double r = 0.25;
  const std::vector<double> eps{0.1, 0.03, 0.01};
  const std::size_t pool = 1000;
  properties::Draws draw(opt.seed, 700);
  std::vector<SquareMatrix> candidates;
  for (std::size_t i = 0; i < pool; ++i) {
    const double t = draw.uniform(2.0, 8.0);
    const auto d = SquareMatrix::diagonal({std::exp(t), std::exp(-t)});
    candidates.push_back(rotation2(draw.uniform(0.0, std::numbers::pi)) * d * rotation2(draw.uniform(0.0, std::numbers::pi)));
  }
  std::size_t total = 0;
  bool below_norm = true, monotone = true;
  double previous = -INFINITY;
  std::string counts;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    double min_ratio = INFINITY;
    std::size_t certified = 0;
    for (std::size_t i = 0; i < pool; ++i) {
      const auto cert = certify_r_eps(candidates[i], r, eps[e], 200, derive_seed(opt.seed, i));
      if (!cert.certified()) continue;
      ++certified;
      const double ratio = cert.top_modulus / operator_norm(candidates[i]);
      below_norm = below_norm && ratio <= 1.0 + 1e-12;
      min_ratio = std::min(min_ratio, ratio);
    }
    total += certified;
    if (certified > 0) {
      monotone = monotone && min_ratio >= previous;
      previous = min_ratio;
    }
    out.metrics.emplace_back("certified_eps_" + detail::fmt(eps[e]), static_cast<double>(certified));
    out.metrics.emplace_back("min_ratio_eps_" + detail::fmt(eps[e]), min_ratio);
    counts += (e ? ", " : "") + std::to_string(certified) + "@" + detail::fmt(eps[e]) + " min " + detail::fmt(min_ratio, 4);
  }
  out.pass = below_norm && monotone && total >= 1000;
  out.metrics.emplace_back("certified_total", static_cast<double>(total));
  out.detail = std::to_string(total) + " certified (" + counts + ")";
  return out;
}

// 8 ---------------------------------------------------------------------------

inline CriterionResult schottky_products(const SuiteOptions& opt) {
  auto out = named(8, "Schottky pair: products proximal, spectral deviation bounded");
  const double r = 0.1, eps = 0.05;
  const auto pair = benchmarks::schottky_pair(5.0, std::numbers::pi / 6.0);
  const std::vector<int> theta{1};
  const auto cert = is_schottky(pair, theta, r, eps, 1000, opt.seed);
  bool all_proximal = true;
  double lo = INFINITY, hi = -INFINITY, d11 = 0.0;
  for (std::size_t m = 1; m <= 5; ++m) {
    for (std::size_t k = 1; k <= 5; ++k) {
      Matrix p = Matrix::Identity(2, 2);
      for (std::size_t i = 0; i < k; ++i) p = pair[0].matrix() * p;
      for (std::size_t i = 0; i < m; ++i) p = pair[1].matrix() * p;
      // entries near e^50 with |det| = 1 would trip the singularity check
      all_proximal = all_proximal && analyze_proximal(SquareMatrix::trusted(p)).proximal();
      const std::vector<std::size_t> exps{k, m};
      const double dev = product_spectral_deviation(pair, exps);
      if (m == 1 && k == 1) d11 = dev;
      lo = std::min(lo, dev);
      hi = std::max(hi, dev);
    }
  }
  const double spread = hi - lo;
  out.pass = cert.verdict && all_proximal && spread <= 2.0 * std::abs(d11) + 1e-6;
  out.metrics = {{"min_cross_gap", cert.min_cross_gap}, {"deviation_11", d11}, {"deviation_spread", spread}};
  out.detail = std::string("schottky ") + (cert.verdict ? "certified" : "refuted") + ", 25 products " +
               (all_proximal ? "proximal" : "NOT all proximal") + ", spread " + detail::fmt(spread, 4) +
               " vs 2|D(1,1)| = " + detail::fmt(2.0 * std::abs(d11), 4);
  return out;
}

// 9 ---------------------------------------------------------------------------

inline CriterionResult kappa_lambda_pairing(const SuiteOptions& opt) {
  auto out = named(9, "kappa/lambda pairing on a Schottky measure");
  const std::size_t n = 20, samples = 100000;
  const auto fan = benchmarks::schottky_fan();
  const auto mu = benchmarks::schottky_fan_measure();
  double min_gap = 1.0;
  for (const auto& a : fan) {
    for (const auto& b : fan) {
      min_gap = std::min(min_gap, fs_point_to_hyperplane(analyze_proximal(a).attractor, analyze_proximal(b).repeller));
    }
  }
  const double r = min_gap / 6.0 * 0.999;
  const std::vector<int> theta{1};
  const auto cert = is_schottky(fan, theta, r, r, 2000, opt.seed);

  const std::vector<double> levels{5.0, 10.0, 15.0};
  const auto ex = kappa_lambda_gap_experiment(mu, n, levels, 0.5, samples, opt.seed, opt.workers);
  bool decreasing = true;
  for (std::size_t i = 1; i < ex.points.size(); ++i) {
    decreasing = decreasing && ex.points[i].probability < ex.points[i - 1].probability;
  }
  const bool negative_slope = ex.fit.slope + 2.0 * stats::kZ95 * ex.fit.slope_se < 0.0;

  // evidence only: the two Monte Carlo rates on shared interior cells
  const auto lyap = lyapunov_estimate(mu, n, 20000, derive_seed(opt.seed, 9), opt.workers);
  const double centre = std::round(lyap.vector[0] * 20.0) / 20.0;
  const auto grid = RateGrid::top(centre - 1.0, centre + 1.0, 0.05);
  const auto kr = mc_rate(mu, n, samples, grid, derive_seed(opt.seed, 91), opt.workers, Projection::Cartan);
  const auto lr = mc_rate(mu, n, samples, grid, derive_seed(opt.seed, 92), opt.workers, Projection::Jordan);
  std::size_t interior = 0, agree = 0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!kr.finite(i) || !lr.finite(i) || !kr.finite(i - 1) || !kr.finite(i + 1)) continue;
    ++interior;
    if (std::abs(kr.values[i] - lr.values[i]) <= 3.0 * std::hypot(kr.ci_half_width(i), lr.ci_half_width(i))) ++agree;
  }

  out.pass = cert.verdict && decreasing && negative_slope;
  out.metrics = {{"schottky_r", r},
                 {"p_l5", ex.points[0].probability},
                 {"p_l10", ex.points[1].probability},
                 {"p_l15", ex.points[2].probability},
                 {"slope", ex.fit.slope},
                 {"slope_se", ex.fit.slope_se},
                 {"rate_cells_interior", static_cast<double>(interior)},
                 {"rate_cells_agreeing", static_cast<double>(agree)}};
  out.detail = std::string("schottky ") + (cert.verdict ? "certified" : "refuted") + "; P = " +
               detail::fmt(ex.points[0].probability, 4) + ", " + detail::fmt(ex.points[1].probability, 4) + ", " +
               detail::fmt(ex.points[2].probability, 4) + "; slope " + detail::fmt(ex.fit.slope, 4) + " +- " +
               detail::fmt(2.0 * stats::kZ95 * ex.fit.slope_se, 3) + "; kappa/lambda rates agree on " +
               std::to_string(agree) + "/" + std::to_string(interior) + " cells (not gating)";
  return out;
}

// 10 --------------------------------------------------------------------------

inline CriterionResult invariant_suites(const SuiteOptions& opt) {
  auto out = named(10, "property suites over 10^4 random inputs");
  const auto results = properties::run_all(10000, opt.seed);
  std::size_t failures = 0, cases = 0;
  std::string failed;
  for (const auto& r : results) {
    failures += r.failures;
    cases += r.cases;
    if (!r.passed()) failed += (failed.empty() ? "" : "; ") + r.name + " (" + r.first_failure + ")";
  }
  out.pass = failures == 0;
  out.metrics = {{"properties", static_cast<double>(results.size())}, {"cases", static_cast<double>(cases)},
                 {"failures", static_cast<double>(failures)}};
  out.detail = std::to_string(results.size()) + " properties, " + std::to_string(cases) + " cases, " +
               std::to_string(failures) + " failures" + (failed.empty() ? "" : ": " + failed);
  return out;
}

using Criterion = std::function<CriterionResult(const SuiteOptions&)>;

inline std::vector<Criterion> criteria() {
  return {commuting_cramer,        legendre_identification, unique_zero,       deviation_decay_check,
          support_identification,  truncated_boundary_example, proximality_ratio, schottky_products,
          kappa_lambda_pairing,    invariant_suites};
}

/// Runs one criterion (1-based id) and times it.
inline CriterionResult run(int id, const SuiteOptions& opt = {}) {
  const auto all = criteria();
  if (id < 1 || id > static_cast<int>(all.size())) throw Error(ErrorKind::BadIndex, "no criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult res;
  try {
    res = all[static_cast<std::size_t>(id - 1)](opt);
  } catch (const std::exception& e) {
    res.id = id;
    res.name = "criterion " + std::to_string(id);
    res.pass = false;
    res.detail = std::string("error: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline std::vector<CriterionResult> run_all(const SuiteOptions& opt = {}) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(criteria().size()); ++id) out.push_back(run(id, opt));
  return out;
}

}  // namespace ldplab::suite
