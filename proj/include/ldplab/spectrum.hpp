#pragma once

// Joint spectrum of a finite set S: the clouds (1/n) kappa(S^n), their convex
// hulls and Hausdorff distances between consecutive depths; brackets for the
// joint spectral radius and subradius; comparison with a rate estimate's
// effective support.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ldplab/enumerate.hpp"
#include "ldplab/error.hpp"
#include "ldplab/hull.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/product.hpp"
#include "ldplab/rate.hpp"

namespace ldplab {

struct SpectrumLevel {
  std::size_t depth = 0;
  std::vector<Point> cloud;         // kappa / n of each distinct product
  std::vector<Point> lambda_cloud;  // lambda / n of the same products
  ConvexHull hull;
  std::optional<double> hausdorff_to_previous;
  double max_top_gap = 0.0;  // max |kappa_1 - lambda_1| / n over the level
};

struct SpectrumApproximation {
  GridMode mode = GridMode::TopCoordinate;
  std::size_t dim = 0;
  std::vector<SpectrumLevel> levels;

  const SpectrumLevel& deepest() const {
    if (levels.empty()) throw Error(ErrorKind::EmptySet, "spectrum has no levels");
    return levels.back();
  }
};

namespace detail {

inline double geometric_total(double atoms, std::size_t depth) {
  double total = 0.0, term = 1.0;
  for (std::size_t n = 1; n <= depth; ++n) total += (term *= atoms);
  return total;
}

}  // namespace detail

/// Exact clouds (1/n) kappa(S^n) for n = 1..nMax, equal products merged.
inline SpectrumApproximation iterate_spectrum(std::span<const SquareMatrix> atoms, std::size_t n_max,
                                              double budget = kDefaultWordBudget,
                                              GridMode mode = GridMode::TopCoordinate) {
  if (atoms.empty()) throw Error(ErrorKind::EmptySet, "no matrices supplied");
  if (n_max < 1) throw Error(ErrorKind::BadParameters, "nMax must be positive");
  const std::size_t dim = atoms.front().dim();
  for (const auto& g : atoms) {
    if (g.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "mixed dimensions in S");
  }
  if (mode == GridMode::FullChamber && dim > 3) {
    throw Error(ErrorKind::BadParameters, "full-chamber hulls need d <= 3");
  }
  const double needed = detail::geometric_total(static_cast<double>(atoms.size()), n_max);
  if (needed > budget) throw BudgetExceeded(needed, budget);

  SpectrumApproximation out;
  out.mode = mode;
  out.dim = dim;
  detail::with_engine(atoms, [&](const auto& engine) {
    using State = typename std::decay_t<decltype(engine)>::State;
    std::vector<State> level{engine.identity()};
    for (std::size_t n = 1; n <= n_max; ++n) {
      Deduper<State> next;
      for (const auto& s : level) {
        for (std::size_t a = 0; a < engine.size(); ++a) {
          State t = s;
          engine.apply(t, a);
          next.insert(t);
        }
      }
      level = std::move(next.states());
      const double inv_n = 1.0 / static_cast<double>(n);
      SpectrumLevel lv;
      lv.depth = n;
      for (const auto& s : level) {
        const auto k = s.cartan().scaled(inv_n).components;
        const auto l = s.jordan().scaled(inv_n).components;
        lv.max_top_gap = std::max(lv.max_top_gap, std::abs(k[0] - l[0]));
        if (mode == GridMode::TopCoordinate) {
          lv.cloud.push_back({k[0]});
          lv.lambda_cloud.push_back({l[0]});
        } else {
          lv.cloud.push_back(k);
          lv.lambda_cloud.push_back(l);
        }
      }
      lv.hull = ConvexHull(lv.cloud);
      if (!out.levels.empty()) lv.hausdorff_to_previous = hull_hausdorff(out.levels.back().hull, lv.hull);
      out.levels.push_back(std::move(lv));
    }
    return 0;
  });
  return out;
}

struct JsrBounds {
  std::size_t depth = 0;  // deepest level fully processed
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double sub_lower = std::numeric_limits<double>::quiet_NaN();
  double sub_upper = std::numeric_limits<double>::quiet_NaN();
  std::size_t visited = 0;
  std::size_t pruned = 0;
  bool budget_hit = false;
  std::vector<double> lower_by_depth;
  std::vector<double> upper_by_depth;

  double width() const { return upper - lower; }
  double sub_width() const { return sub_upper - sub_lower; }
};

inline constexpr double kDefaultPruneMargin = 0.5;
inline constexpr std::size_t kDefaultNodeBudget = 4'000'000;

/// Joint spectral radius bracket by breadth-first search of the word tree.
///
/// lower: max over visited words w of (1/|w|) log rho(w).
/// upper: max(lower, max over depth-t words of min_i (1/i) log ||P_i||), P_i the
/// length-i prefix products. Over exhaustively enumerated levels this is never
/// above min_k (1/k) log max_{S^k} ||w||.
///
/// A prefix w of length k is pruned when every extension of length up to
/// maxDepth has norm rate below lower - pruneMargin, using
/// ||w v|| <= ||w|| exp(|v| L) with L the largest atom log-norm. Pruned words
/// can therefore change neither bound.
inline JsrBounds jsr_bounds(std::span<const SquareMatrix> atoms, std::size_t max_depth,
                            double prune_margin = kDefaultPruneMargin,
                            std::size_t node_budget = kDefaultNodeBudget) {
  if (max_depth < 1) throw Error(ErrorKind::BadParameters, "maxDepth must be positive");
  if (atoms.empty()) throw Error(ErrorKind::EmptySet, "no matrices supplied");
  if (!(prune_margin >= 0.0)) throw Error(ErrorKind::BadParameters, "pruneMargin must be >= 0");
  JsrBounds out;
  double max_atom_log_norm = -std::numeric_limits<double>::infinity();
  for (const auto& g : atoms) max_atom_log_norm = std::max(max_atom_log_norm, std::log(operator_norm(g)));
  const double t_real = static_cast<double>(max_depth);

  detail::with_engine(atoms, [&](const auto& engine) {
    using State = typename std::decay_t<decltype(engine)>::State;
    struct Node {
      State state;
      double p;  // min over prefixes of (1/i) log ||P_i||
    };
    std::vector<Node> level{{engine.identity(), std::numeric_limits<double>::infinity()}};
    for (std::size_t k = 1; k <= max_depth; ++k) {
      if (out.visited + level.size() * engine.size() > node_budget) {
        out.budget_hit = true;
        break;
      }
      const double k_real = static_cast<double>(k);
      Deduper<State> dedupe;
      std::vector<double> p_of;
      std::vector<double> log_norm_of;
      for (const auto& node : level) {
        for (std::size_t a = 0; a < engine.size(); ++a) {
          State s = node.state;
          engine.apply(s, a);
          ++out.visited;
          const double log_norm = s.top_cartan();
          const double p = std::min(node.p, log_norm / k_real);
          out.lower = std::max(out.lower, s.top_jordan() / k_real);
          if (dedupe.insert(s)) {
            p_of.push_back(p);
            log_norm_of.push_back(log_norm);
          } else {
            // equal products: keep the larger prefix bound, children inherit min with it
            p_of[dedupe.last_index()] = std::max(p_of[dedupe.last_index()], p);
          }
        }
      }
      std::vector<Node> next;
      double level_upper = -std::numeric_limits<double>::infinity();
      auto& states = dedupe.states();
      for (std::size_t i = 0; i < states.size(); ++i) {
        double ceiling = -std::numeric_limits<double>::infinity();
        for (double kk = k_real; kk <= t_real; kk += 1.0) {
          ceiling = std::max(ceiling, (log_norm_of[i] + (kk - k_real) * max_atom_log_norm) / kk);
        }
        if (ceiling < out.lower - prune_margin) {
          ++out.pruned;
          continue;
        }
        level_upper = std::max(level_upper, p_of[i]);
        next.push_back({std::move(states[i]), p_of[i]});
      }
      level = std::move(next);
      out.depth = k;
      out.upper = std::max(out.lower, level_upper);
      out.lower_by_depth.push_back(out.lower);
      out.upper_by_depth.push_back(out.upper);
      if (level.empty()) break;
    }
    return 0;
  });
  return out;
}

namespace detail {

/// All upper triangular, or all lower triangular, with exact zeros.
inline bool all_triangular(std::span<const SquareMatrix> atoms) {
  bool upper = true, lower = true;
  for (const auto& g : atoms) {
    const Matrix& m = g.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        upper = upper && m(i, j) == 0.0;
        lower = lower && m(j, i) == 0.0;
      }
    }
  }
  return upper || lower;
}

}  // namespace detail

struct SubradiusBounds {
  std::size_t depth = 0;             // requested depth
  std::size_t exhaustive_depth = 0;  // deepest fully enumerated level
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Joint spectral subradius bracket.
///
/// lower: max over enumerated levels k of (1/k) log min_{S^k} sigma_min, and
/// (1/d) min over atoms of log|det|, both superadditive; for triangular
/// families also max_i min_g log|g_ii|.
/// upper: min over enumerated words of (1/k) log rho(w) and (1/k) log ||w||,
/// extended past the exhaustive depth by powers of the best words found.
inline SubradiusBounds subradius_bounds(std::span<const SquareMatrix> atoms, std::size_t max_depth,
                                        std::size_t node_budget = kDefaultNodeBudget) {
  if (max_depth < 1) throw Error(ErrorKind::BadParameters, "maxDepth must be positive");
  if (atoms.empty()) throw Error(ErrorKind::EmptySet, "no matrices supplied");
  SubradiusBounds out;
  out.depth = max_depth;
  const double d = static_cast<double>(atoms.front().dim());
  double min_log_det = std::numeric_limits<double>::infinity();
  for (const auto& g : atoms) min_log_det = std::min(min_log_det, std::log(std::abs(g.matrix().determinant())));
  out.lower = min_log_det / d;
  // Simultaneously triangular families: rho(w) = max_i prod |g_ii|, so
  // max_i min_g log|g_ii| is a lower bound.
  if (detail::all_triangular(atoms)) {
    double diag_bound = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < atoms.front().matrix().rows(); ++i) {
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& g : atoms) worst = std::min(worst, std::log(std::abs(g.matrix()(i, i))));
      diag_bound = std::max(diag_bound, worst);
    }
    out.lower = std::max(out.lower, diag_bound);
  }

  // best candidates for powering: (rate, word)
  std::vector<std::pair<double, std::vector<std::size_t>>> best;
  constexpr std::size_t kKeep = 8;

  detail::with_engine(atoms, [&](const auto& engine) {
    using State = typename std::decay_t<decltype(engine)>::State;
    std::vector<std::pair<State, std::vector<std::size_t>>> level{{engine.identity(), {}}};
    std::size_t visited = 0;
    for (std::size_t k = 1; k <= max_depth; ++k) {
      if (visited + level.size() * engine.size() > node_budget) break;
      const double k_real = static_cast<double>(k);
      Deduper<State> dedupe;
      std::vector<std::vector<std::size_t>> words;
      double min_log_sigma = std::numeric_limits<double>::infinity();
      for (const auto& [state, word] : level) {
        for (std::size_t a = 0; a < engine.size(); ++a) {
          State s = state;
          engine.apply(s, a);
          ++visited;
          if (!dedupe.insert(s)) continue;
          auto w = word;
          w.push_back(a);
          const auto kappa = s.cartan();
          min_log_sigma = std::min(min_log_sigma, kappa.components.back());
          const double rate = std::min(s.top_jordan(), kappa.components.front()) / k_real;
          if (rate < out.upper) out.upper = rate;
          best.emplace_back(rate, w);
          words.push_back(std::move(w));
        }
      }
      out.lower = std::max(out.lower, min_log_sigma / k_real);
      out.exhaustive_depth = k;
      std::stable_sort(best.begin(), best.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      if (best.size() > kKeep) best.resize(kKeep);
      std::vector<std::pair<State, std::vector<std::size_t>>> next;
      auto& states = dedupe.states();
      for (std::size_t i = 0; i < states.size(); ++i) next.emplace_back(std::move(states[i]), std::move(words[i]));
      level = std::move(next);
    }
    // Powers of the best words up to maxDepth.
    for (const auto& [rate, word] : best) {
      State s = engine.identity();
      for (std::size_t len = word.size(); len <= max_depth; len += word.size()) {
        for (std::size_t a : word) engine.apply(s, a);
        if (len <= out.exhaustive_depth) continue;
        const double r = std::min(s.top_jordan(), s.top_cartan()) / static_cast<double>(len);
        out.upper = std::min(out.upper, r);
      }
    }
    return 0;
  });
  return out;
}

/// Radius and subradius brackets together.
inline JsrBounds joint_bounds(std::span<const SquareMatrix> atoms, std::size_t max_depth,
                              double prune_margin = kDefaultPruneMargin,
                              std::size_t node_budget = kDefaultNodeBudget) {
  auto out = jsr_bounds(atoms, max_depth, prune_margin, node_budget);
  const auto sub = subradius_bounds(atoms, max_depth, node_budget);
  out.sub_lower = sub.lower;
  out.sub_upper = sub.upper;
  return out;
}

struct SupportComparison {
  double distance = 0.0;
  double tolerance = 0.0;  // pitch + deepest hausdorffToPrevious
  bool pass = false;
  std::vector<Point> support_vertices;
  std::vector<Point> spectrum_vertices;
};

/// Hausdorff distance between the hull of the finite cells of an exact rate
/// estimate and the deepest spectrum hull.
inline SupportComparison compare_support(const RateEstimate& rate, const SpectrumApproximation& spectrum) {
  if (rate.method != RateMethod::ExactEnumeration) {
    throw Error(ErrorKind::BadParameters, "compare_support needs an exact rate estimate");
  }
  if (rate.grid.mode() != spectrum.mode) throw Error(ErrorKind::DimensionMismatch, "grid mode differs from spectrum mode");
  const auto& deepest = spectrum.deepest();
  if (rate.grid.coords() != deepest.hull.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "grid and spectrum dimensions differ");
  }
  const auto support = support_estimate(rate, std::numeric_limits<double>::infinity());
  if (!support.hull) throw Error(ErrorKind::EmptySet, "rate estimate has no finite cells");
  SupportComparison out;
  out.distance = hull_hausdorff(*support.hull, deepest.hull);
  out.tolerance = rate.grid.pitch() + deepest.hausdorff_to_previous.value_or(0.0);
  out.pass = out.distance <= out.tolerance;
  out.support_vertices = support.hull->vertices();
  out.spectrum_vertices = deepest.hull.vertices();
  return out;
}

}  // namespace ldplab
