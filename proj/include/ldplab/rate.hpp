#pragma once

// Finite-n rate function estimates for (1/n) kappa(Y_n):
//   I_n(cell) = -(1/n) log P(kappa(Y_n)/n in cell)
// by exact enumeration or Monte Carlo, and the Legendre route
//   I(x) = sup_l ( l.x - Lambda(l) ),  Lambda(l) = lim (1/n) log E exp(l.kappa(Y_n)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldplab/enumerate.hpp"
#include "ldplab/error.hpp"
#include "ldplab/hull.hpp"
#include "ldplab/measure.hpp"
#include "ldplab/product.hpp"
#include "ldplab/stats.hpp"
#include "ldplab/walk.hpp"

namespace ldplab {

enum class GridMode { TopCoordinate, FullChamber };

constexpr std::string_view to_string(GridMode m) noexcept {
  return m == GridMode::TopCoordinate ? "top" : "chamber";
}

/// Cells [x - h, x + h) per coordinate around grid points x, h = pitch / 2,
/// so neighbouring cells tile without gaps or overlaps.
class RateGrid {
 public:
  RateGrid() = default;

  static RateGrid top(double min, double max, double pitch) { return RateGrid(GridMode::TopCoordinate, 1, min, max, pitch); }

  static RateGrid chamber(std::size_t dim, double min, double max, double pitch) {
    if (dim < 1 || dim > 3) throw Error(ErrorKind::BadParameters, "full-chamber grids need 1 <= d <= 3");
    return RateGrid(GridMode::FullChamber, dim, min, max, pitch);
  }

  GridMode mode() const noexcept { return mode_; }
  std::size_t coords() const noexcept { return coords_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  double pitch() const noexcept { return pitch_; }
  double half_width() const noexcept { return 0.5 * pitch_; }
  std::size_t per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& point(std::size_t i) const { return points_.at(i); }

  /// Cell containing x, if any.
  std::optional<std::size_t> locate(std::span<const double> x) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < coords_; ++k) {
      const double t = std::floor((x[k] - min_ + half_width()) / pitch_);
      if (!(t >= 0.0) || t >= static_cast<double>(per_axis_)) return std::nullopt;
      index = index * per_axis_ + static_cast<std::size_t>(t);
    }
    return index;
  }

  /// Projection of a Cartan vector onto the grid's coordinates.
  std::span<const double> project(std::span<const double> kappa) const { return kappa.first(coords_); }

 private:
  RateGrid(GridMode mode, std::size_t coords, double min, double max, double pitch)
      : mode_(mode), coords_(coords), min_(min), max_(max), pitch_(pitch) {
    if (!(pitch > 0.0) || !(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
      throw Error(ErrorKind::BadParameters, "grid needs min < max and pitch > 0");
    }
    per_axis_ = static_cast<std::size_t>(std::floor((max - min) / pitch + 1e-9)) + 1;
    std::size_t total = 1;
    for (std::size_t k = 0; k < coords; ++k) total *= per_axis_;
    if (total > 50'000'000) throw Error(ErrorKind::BadParameters, "grid has too many cells");
    points_.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
      Point p(coords);
      std::size_t rest = i;
      for (std::size_t k = coords; k-- > 0;) {
        p[k] = min + static_cast<double>(rest % per_axis_) * pitch;
        rest /= per_axis_;
      }
      points_.push_back(std::move(p));
    }
  }

  GridMode mode_ = GridMode::TopCoordinate;
  std::size_t coords_ = 1;
  double min_ = 0, max_ = 1, pitch_ = 1;
  std::size_t per_axis_ = 0;
  std::vector<Point> points_;
};

enum class RateMethod { ExactEnumeration, MonteCarlo, LegendreDual };

constexpr std::string_view to_string(RateMethod m) noexcept {
  switch (m) {
    case RateMethod::ExactEnumeration: return "exact";
    case RateMethod::MonteCarlo: return "monte_carlo";
    case RateMethod::LegendreDual: return "legendre";
  }
  return "unknown";
}

/// Per-cell status: a finite estimate, an exactly unreachable cell (+inf,
/// exact enumeration only) or a zero-hit Monte Carlo cell whose value is
/// only the lower bound (1/n) log(sampleCount).
enum class CellFlag { Finite, Unreachable, LowerBound };

constexpr std::string_view to_string(CellFlag f) noexcept {
  switch (f) {
    case CellFlag::Finite: return "finite";
    case CellFlag::Unreachable: return "unreachable";
    case CellFlag::LowerBound: return "lower_bound";
  }
  return "unknown";
}

struct RateEstimate {
  RateGrid grid;
  std::size_t n = 0;
  RateMethod method = RateMethod::ExactEnumeration;
  std::vector<double> values;
  std::vector<CellFlag> flags;
  std::vector<double> ci_lower;  // empty for exact and Legendre estimates
  std::vector<double> ci_upper;
  std::vector<double> probability;  // exact cell probability or hit frequency
  std::vector<bool> boundary_warning;  // Legendre: maximizer on the dual box boundary
  double count = 0;  // words enumerated or samples drawn

  bool finite(std::size_t i) const { return flags[i] == CellFlag::Finite; }

  double ci_half_width(std::size_t i) const {
    if (ci_lower.empty() || !finite(i)) return 0.0;
    return 0.5 * (ci_upper[i] - ci_lower[i]);
  }
};

struct DistributionPoint {
  Point kappa;  // kappa(w) / n
  double probability = 0.0;
};

namespace detail {

inline std::vector<double> weights_of(const MeasureSpec& measure) {
  std::vector<double> w;
  for (const auto& a : measure.atoms()) w.push_back(a.weight);
  return w;
}

inline std::vector<std::int64_t> quantize(std::span<const double> x) {
  std::vector<std::int64_t> key;
  for (double v : x) key.push_back(std::llround(v * 1e12));
  return key;
}

}  // namespace detail

/// Law of kappa(Y_n)/n by full enumeration; points equal to 1e-12 are merged
/// and the result is sorted lexicographically.
inline std::vector<DistributionPoint> exact_distribution(const MeasureSpec& measure, std::size_t n,
                                                         double budget = kDefaultWordBudget,
                                                         std::size_t workers = 1) {
  const auto weights = detail::weights_of(measure);
  check_budget(weights, n, budget);
  using Table = std::map<std::vector<std::int64_t>, DistributionPoint>;
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto support = measure.support();
  const auto branches = detail::with_engine(std::span<const SquareMatrix>(support), [&](const auto& engine) {
    return enumerate_words(
        engine, weights, n, Table{},
        [inv_n](Table& table, const auto& state, double p) {
          Point k = state.cartan().scaled(inv_n).components;
          auto& slot = table[detail::quantize(k)];
          if (slot.kappa.empty()) slot.kappa = std::move(k);
          slot.probability += p;
        },
        workers);
  });
  Table merged;
  for (const auto& table : branches) {
    for (const auto& [key, point] : table) {
      auto& slot = merged[key];
      if (slot.kappa.empty()) slot.kappa = point.kappa;
      slot.probability += point.probability;
    }
  }
  std::vector<DistributionPoint> out;
  out.reserve(merged.size());
  for (auto& [key, point] : merged) out.push_back(std::move(point));
  return out;
}

namespace detail {

inline RateEstimate exact_from_cell_probabilities(const RateGrid& grid, std::size_t n,
                                                  std::vector<double> cell_probability, double count) {
  RateEstimate est;
  est.grid = grid;
  est.n = n;
  est.method = RateMethod::ExactEnumeration;
  est.count = count;
  for (double p : cell_probability) {
    if (p > 0.0) {
      est.values.push_back(-std::log(p) / static_cast<double>(n));
      est.flags.push_back(CellFlag::Finite);
    } else {
      est.values.push_back(std::numeric_limits<double>::infinity());
      est.flags.push_back(CellFlag::Unreachable);
    }
  }
  est.probability = std::move(cell_probability);
  return est;
}

}  // namespace detail

/// Exact finite-n rate per cell. Binning happens during enumeration, so the
/// word count is limited only by `budget`.
inline RateEstimate exact_rate(const MeasureSpec& measure, std::size_t n, const RateGrid& grid,
                               double budget = kDefaultWordBudget, std::size_t workers = 1) {
  const auto weights = detail::weights_of(measure);
  check_budget(weights, n, budget);
  if (grid.mode() == GridMode::FullChamber && grid.coords() != measure.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "chamber grid dimension differs from the measure");
  }
  const double n_real = static_cast<double>(n);
  const auto support = measure.support();
  const auto branches = detail::with_engine(std::span<const SquareMatrix>(support), [&](const auto& engine) {
    std::vector<double> proto(grid.size(), 0.0);
    if (grid.mode() == GridMode::TopCoordinate) {
      return enumerate_top_cartan(
          engine, weights, n, proto,
          [&grid, n_real](std::vector<double>& bins, double top, double p) {
            const double x = top / n_real;
            if (auto cell = grid.locate(std::span<const double>(&x, 1))) bins[*cell] += p;
          },
          workers);
    }
    return enumerate_words(
        engine, weights, n, proto,
        [&grid, n_real](std::vector<double>& bins, const auto& state, double p) {
          const auto k = state.cartan().scaled(1.0 / n_real);
          if (auto cell = grid.locate(k.components)) bins[*cell] += p;
        },
        workers);
  });
  std::vector<double> total(grid.size(), 0.0);
  for (const auto& bins : branches)
    for (std::size_t i = 0; i < bins.size(); ++i) total[i] += bins[i];
  return detail::exact_from_cell_probabilities(grid, n, std::move(total), word_count(weights, n));
}

enum class Projection { Cartan, Jordan };

/// Monte Carlo rate per cell with Wilson intervals mapped through
/// -(1/n) log. Zero-hit cells carry the bound (1/n) log(sampleCount).
inline RateEstimate mc_rate(const MeasureSpec& measure, std::size_t n, std::size_t sample_count,
                            const RateGrid& grid, std::uint64_t seed, std::size_t workers = 1,
                            Projection projection = Projection::Cartan) {
  if (sample_count < 1000) throw Error(ErrorKind::BadParameters, "Monte Carlo needs sampleCount >= 1000");
  if (grid.mode() == GridMode::FullChamber && grid.coords() != measure.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "chamber grid dimension differs from the measure");
  }
  const bool cartan = projection == Projection::Cartan;
  const auto samples = paired_samples(measure, n, sample_count, seed, {workers, cartan, !cartan});
  std::vector<std::size_t> hits(grid.size(), 0);
  for (std::size_t s = 0; s < sample_count; ++s) {
    const auto& comps = cartan ? samples.kappa[s].components : samples.lambda[s].components;
    if (auto cell = grid.locate(grid.project(comps))) ++hits[*cell];
  }
  RateEstimate est;
  est.grid = grid;
  est.n = n;
  est.method = RateMethod::MonteCarlo;
  est.count = static_cast<double>(sample_count);
  for (std::size_t h : hits) {
    const auto r = stats::rate_from_hits(h, sample_count, static_cast<double>(n));
    est.values.push_back(r.value);
    est.flags.push_back(r.lower_bound_only ? CellFlag::LowerBound : CellFlag::Finite);
    est.ci_lower.push_back(r.lower);
    est.ci_upper.push_back(r.upper);
    est.probability.push_back(static_cast<double>(h) / static_cast<double>(sample_count));
  }
  return est;
}

enum class LaplaceMethod { ExactEnumeration, MonteCarlo };

struct LaplaceEstimate {
  GridMode mode = GridMode::TopCoordinate;
  std::vector<Point> duals;
  std::vector<double> values;  // Lambda_n per dual
  std::size_t n = 0;
  LaplaceMethod method = LaplaceMethod::ExactEnumeration;
};

/// Default dual grid: 0 and +-0.1 * 2^k, k = 0..8, per coordinate.
inline std::vector<double> dual_ladder(int top_power = 8, double base = 0.1) {
  std::vector<double> out{0.0};
  for (int k = 0; k <= top_power; ++k) {
    out.push_back(base * std::ldexp(1.0, k));
    out.push_back(-base * std::ldexp(1.0, k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All dual vectors with coordinates from `axis` (product grid).
inline std::vector<Point> dual_box(std::size_t coords, std::span<const double> axis) {
  std::vector<Point> out{Point{}};
  for (std::size_t k = 0; k < coords; ++k) {
    std::vector<Point> next;
    for (const auto& p : out) {
      for (double t : axis) {
        Point q = p;
        q.push_back(t);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace detail {

inline double log_sum_exp(std::span<const double> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Lambda_n(l) = (1/n) log E exp(l . kappa(Y_n)), by exact enumeration when
/// |atoms|^n <= budget, else by Monte Carlo with `samples` draws. Evaluated in
/// log-sum-exp form.
inline LaplaceEstimate laplace_transform(const MeasureSpec& measure, std::size_t n, GridMode mode,
                                         std::span<const Point> duals, double budget,
                                         std::size_t samples, std::uint64_t seed,
                                         std::size_t workers = 1) {
  const std::size_t coords = mode == GridMode::TopCoordinate ? 1 : measure.dim();
  for (const auto& l : duals) {
    if (l.size() != coords) throw Error(ErrorKind::DimensionMismatch, "dual vector has the wrong length");
  }
  LaplaceEstimate est;
  est.mode = mode;
  est.duals.assign(duals.begin(), duals.end());
  est.n = n;
  const double n_real = static_cast<double>(n);
  std::vector<double> terms;
  if (word_count(detail::weights_of(measure), n) <= budget) {
    est.method = LaplaceMethod::ExactEnumeration;
    const auto dist = exact_distribution(measure, n, budget, workers);
    for (const auto& l : duals) {
      terms.clear();
      for (const auto& pt : dist) {
        terms.push_back(std::log(pt.probability) +
                        n_real * detail::dot(l, std::span<const double>(pt.kappa).first(coords)));
      }
      est.values.push_back(detail::log_sum_exp(terms) / n_real);
    }
  } else {
    est.method = LaplaceMethod::MonteCarlo;
    const auto ks = kappa_samples(measure, n, samples, seed, workers);
    const double log_count = std::log(static_cast<double>(samples));
    for (const auto& l : duals) {
      terms.clear();
      for (const auto& k : ks) {
        terms.push_back(n_real * detail::dot(l, std::span<const double>(k.components).first(coords)));
      }
      est.values.push_back((detail::log_sum_exp(terms) - log_count) / n_real);
    }
  }
  // lambda = 0 is exactly 0 (probabilities sum to 1 up to rounding).
  for (std::size_t i = 0; i < duals.size(); ++i) {
    if (std::all_of(duals[i].begin(), duals[i].end(), [](double t) { return t == 0.0; })) est.values[i] = 0.0;
  }
  return est;
}

/// Legendre conjugate on the supplied duals: max_l (l.x - Lambda_n(l)) per
/// grid point. Flags points whose maximizer lies on the dual box boundary.
inline RateEstimate legendre_conjugate(const LaplaceEstimate& laplace, const RateGrid& grid) {
  if (laplace.mode != grid.mode()) throw Error(ErrorKind::DimensionMismatch, "Laplace/grid mode mismatch");
  if (laplace.duals.empty()) throw Error(ErrorKind::EmptySet, "no dual vectors");
  const std::size_t coords = grid.coords();
  std::vector<double> lo(coords, INFINITY), hi(coords, -INFINITY);
  bool has_zero = false;
  for (const auto& l : laplace.duals) {
    if (l.size() != coords) throw Error(ErrorKind::DimensionMismatch, "dual/grid dimension mismatch");
    bool zero = true;
    for (std::size_t k = 0; k < coords; ++k) {
      lo[k] = std::min(lo[k], l[k]);
      hi[k] = std::max(hi[k], l[k]);
      zero = zero && l[k] == 0.0;
    }
    has_zero = has_zero || zero;
  }
  for (std::size_t k = 0; k < coords; ++k) {
    if (!has_zero || std::abs(lo[k] + hi[k]) > 1e-12 * std::max(1.0, hi[k])) {
      throw Error(ErrorKind::BadParameters, "dual vectors must cover a symmetric box around 0");
    }
  }
  RateEstimate est;
  est.grid = grid;
  est.n = laplace.n;
  est.method = RateMethod::LegendreDual;
  est.count = static_cast<double>(laplace.duals.size());
  for (const auto& x : grid.points()) {
    double best = -INFINITY;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < laplace.duals.size(); ++i) {
      const double v = detail::dot(laplace.duals[i], x) - laplace.values[i];
      if (v > best) best = v, arg = i;
    }
    bool boundary = false;
    for (std::size_t k = 0; k < coords; ++k) {
      const double t = laplace.duals[arg][k];
      boundary = boundary || t == lo[k] || t == hi[k];
    }
    est.values.push_back(best);
    est.flags.push_back(CellFlag::Finite);
    est.boundary_warning.push_back(boundary);
  }
  return est;
}

struct ConvexityViolation {
  std::size_t left = 0, middle = 0, right = 0;
  double excess = 0.0;  // value(m) - (value(x) + value(y)) / 2 - tolerance
};

/// Midpoint-convexity check over all grid pairs (x, y) with a finite middle
/// cell m nearest (x + y) / 2. Tolerance per triple: the three CI half widths
/// plus 2 * h * max|slope| (h the cell half width) plus `extra_slack`.
inline std::vector<ConvexityViolation> convexity_report(const RateEstimate& est, double extra_slack = 0.0) {
  std::vector<ConvexityViolation> out;
  if (est.method == RateMethod::LegendreDual) return out;
  const auto& grid = est.grid;
  const std::size_t per = grid.per_axis();
  const std::size_t coords = grid.coords();
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (est.finite(i)) finite.push_back(i);

  // Largest slope between finite axis-neighbours.
  double slope = 0.0;
  for (std::size_t i : finite) {
    std::size_t stride = 1;
    for (std::size_t k = 0; k < coords; ++k, stride *= per) {
      const std::size_t axis_index = (i / stride) % per;
      if (axis_index + 1 < per && est.finite(i + stride)) {
        slope = std::max(slope, std::abs(est.values[i + stride] - est.values[i]) / grid.pitch());
      }
    }
  }
  const double lipschitz_slack = 2.0 * grid.half_width() * slope;

  auto axis_indices = [&](std::size_t i) {
    std::vector<std::size_t> idx(coords);
    for (std::size_t k = coords; k-- > 0;) idx[k] = i % per, i /= per;
    return idx;
  };
  for (std::size_t a = 0; a < finite.size(); ++a) {
    for (std::size_t b = a + 1; b < finite.size(); ++b) {
      const auto ia = axis_indices(finite[a]), ib = axis_indices(finite[b]);
      // Candidates for the nearest middle cell: floor and ceil per axis.
      std::vector<std::size_t> mids{0};
      for (std::size_t k = 0; k < coords; ++k) {
        const std::size_t s = ia[k] + ib[k];
        std::vector<std::size_t> next;
        for (std::size_t m : mids) {
          next.push_back(m * per + s / 2);
          if (s % 2 == 1) next.push_back(m * per + s / 2 + 1);
        }
        mids = std::move(next);
      }
      for (std::size_t m : mids) {
        if (m == finite[a] || m == finite[b] || !est.finite(m)) continue;
        const double tol = est.ci_half_width(finite[a]) + est.ci_half_width(finite[b]) +
                           est.ci_half_width(m) + lipschitz_slack + extra_slack;
        const double excess = est.values[m] - 0.5 * (est.values[finite[a]] + est.values[finite[b]]) - tol;
        if (excess > 0.0) out.push_back({finite[a], m, finite[b], excess});
      }
    }
  }
  return out;
}

struct SupportEstimate {
  std::vector<std::size_t> cells;
  std::vector<Point> points;
  std::optional<ConvexHull> hull;  // interval hull for TopCoordinate grids
};

/// Cells with a finite value <= cutoff and their convex hull.
inline SupportEstimate support_estimate(const RateEstimate& est, double cutoff) {
  if (!(cutoff > 0.0)) throw Error(ErrorKind::BadParameters, "cutoff must be positive");
  SupportEstimate out;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    if (est.finite(i) && est.values[i] <= cutoff) {
      out.cells.push_back(i);
      out.points.push_back(est.grid.point(i));
    }
  }
  if (!out.points.empty()) out.hull.emplace(out.points);
  return out;
}

}  // namespace ldplab
