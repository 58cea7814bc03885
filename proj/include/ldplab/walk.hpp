#pragma once

// The mu-random walk Y_n = X_n ... X_1 for a finitely supported mu: word
// sampling, kappa/lambda sample streams and the deviation experiments built
// on them. Every random quantity is a pure function of (seed, stream index),
// so results do not depend on the number of workers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"
#include "ldplab/philox.hpp"
#include "ldplab/product.hpp"
#include "ldplab/stats.hpp"

namespace ldplab {

/// Runs fn(begin, end) over [0, count) split into contiguous chunks.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// n iid atom indices, oldest first; index j depends only on (seed, stream, j).
inline std::vector<std::size_t> sample_word(const MeasureSpec& measure, std::size_t n,
                                            std::uint64_t stream_index, std::uint64_t seed) {
  const CounterStream rng(seed, stream_index);
  std::vector<std::size_t> word(n);
  for (std::size_t j = 0; j < n; ++j) word[j] = measure.pick(rng.uniform(j));
  return word;
}

/// Applies the word's atoms right to left: the result represents
/// atom[word.back()] * ... * atom[word.front()].
inline WalkState walk_product(const MeasureSpec& measure, std::span<const std::size_t> word) {
  if (word.empty()) throw Error(ErrorKind::BadParameters, "word must be non-empty");
  std::vector<Factor> factors;
  factors.reserve(measure.size());
  for (const auto& a : measure.atoms()) factors.emplace_back(a.matrix);
  WalkState s = WalkState::identity(measure.dim());
  for (std::size_t i : word) {
    if (i >= measure.size()) throw Error(ErrorKind::BadIndex, "atom index out of range");
    s.apply(factors[i]);
  }
  return s;
}

/// kappa(Y_n)/n and lambda(Y_n)/n computed from the same words.
struct PairedSamples {
  std::vector<CartanVector> kappa;
  std::vector<JordanVector> lambda;
};

struct SampleOptions {
  std::size_t workers = 1;
  bool with_kappa = true;
  bool with_lambda = true;
};

inline PairedSamples paired_samples(const MeasureSpec& measure, std::size_t n,
                                    std::size_t sample_count, std::uint64_t seed,
                                    SampleOptions options = {}) {
  if (n < 1 || sample_count < 1) {
    throw Error(ErrorKind::BadParameters, "n and sampleCount must be positive");
  }
  PairedSamples out;
  if (options.with_kappa) out.kappa.resize(sample_count);
  if (options.with_lambda) out.lambda.resize(sample_count);
  const auto support = measure.support();
  const double inv_n = 1.0 / static_cast<double>(n);
  detail::with_engine(std::span<const SquareMatrix>(support), [&](const auto& engine) {
    parallel_for(sample_count, options.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t s = begin; s < end; ++s) {
        const CounterStream rng(seed, s);
        auto state = engine.identity();
        for (std::size_t j = 0; j < n; ++j) engine.apply(state, measure.pick(rng.uniform(j)));
        if (options.with_kappa) out.kappa[s] = state.cartan().scaled(inv_n);
        if (options.with_lambda) out.lambda[s] = state.jordan().scaled(inv_n);
      }
    });
    return 0;
  });
  return out;
}

inline std::vector<CartanVector> kappa_samples(const MeasureSpec& measure, std::size_t n,
                                               std::size_t sample_count, std::uint64_t seed,
                                               std::size_t workers = 1) {
  return paired_samples(measure, n, sample_count, seed, {workers, true, false}).kappa;
}

inline std::vector<JordanVector> lambda_samples(const MeasureSpec& measure, std::size_t n,
                                                std::size_t sample_count, std::uint64_t seed,
                                                std::size_t workers = 1) {
  return paired_samples(measure, n, sample_count, seed, {workers, false, true}).lambda;
}

struct LyapunovEstimate {
  std::vector<double> vector;
  std::vector<double> half_width;
  std::size_t n = 0;
  std::size_t sample_count = 0;
};

/// Mean of kappa(Y_n)/n with a 95% batch-means interval per coordinate.
inline LyapunovEstimate lyapunov_estimate(const MeasureSpec& measure, std::size_t n,
                                          std::size_t sample_count, std::uint64_t seed,
                                          std::size_t workers = 1) {
  const auto samples = kappa_samples(measure, n, sample_count, seed, workers);
  LyapunovEstimate est;
  est.n = n;
  est.sample_count = sample_count;
  const std::size_t d = measure.dim();
  std::vector<double> column(sample_count);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t s = 0; s < sample_count; ++s) column[s] = samples[s][i];
    const auto m = stats::batch_means(column);
    est.vector.push_back(m.mean);
    est.half_width.push_back(m.half_width);
  }
  return est;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct DecayPoint {
  std::size_t n = 0;
  std::size_t hits = 0;
  std::size_t sample_count = 0;
  stats::RateInterval rate;  // -(1/n) log P(|kappa(Y_n)/n - lyapunov| > eps)
};

/// Empirical decay rate of deviations of kappa(Y_n)/n from `lyapunov`
/// (Euclidean norm on the Cartan subspace) for every n in `horizons`.
inline std::vector<DecayPoint> deviation_decay(const MeasureSpec& measure,
                                               std::span<const double> lyapunov, double eps,
                                               std::span<const std::size_t> horizons,
                                               std::size_t sample_count, std::uint64_t seed,
                                               std::size_t workers = 1) {
  if (!(eps > 0.0)) throw Error(ErrorKind::BadParameters, "eps must be positive");
  if (lyapunov.size() != measure.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "Lyapunov vector has the wrong dimension");
  }
  std::vector<DecayPoint> out;
  for (std::size_t n : horizons) {
    const auto samples = kappa_samples(measure, n, sample_count, derive_seed(seed, n), workers);
    DecayPoint p;
    p.n = n;
    p.sample_count = sample_count;
    for (const auto& k : samples)
      if (euclidean_distance(k.components, lyapunov) > eps) ++p.hits;
    p.rate = stats::rate_from_hits(p.hits, sample_count, static_cast<double>(n));
    out.push_back(p);
  }
  return out;
}

struct GapPoint {
  double level = 0.0;  // l
  std::size_t hits = 0;
  double probability = 0.0;
  stats::Interval ci;
};

struct GapExperiment {
  std::size_t n = 0;
  std::size_t sample_count = 0;
  double eps = 0.0;
  std::vector<GapPoint> points;
  stats::SlopeFit fit;  // probability against l
};

/// Frequency of ||kappa(Y_n) - lambda(Y_n)|| > eps * l over paired samples,
/// for each l, with a weighted linear fit of the frequencies against l.
inline GapExperiment kappa_lambda_gap_experiment(const MeasureSpec& measure, std::size_t n,
                                                 std::span<const double> levels, double eps,
                                                 std::size_t sample_count, std::uint64_t seed,
                                                 std::size_t workers = 1) {
  for (double l : levels) {
    if (l > static_cast<double>(n)) throw Error(ErrorKind::BadParameters, "level l exceeds n");
  }
  const auto paired = paired_samples(measure, n, sample_count, seed, {workers, true, true});
  std::vector<double> gaps(sample_count);
  for (std::size_t s = 0; s < sample_count; ++s) {
    gaps[s] = static_cast<double>(n) *
              euclidean_distance(paired.kappa[s].components, paired.lambda[s].components);
  }
  GapExperiment ex;
  ex.n = n;
  ex.sample_count = sample_count;
  ex.eps = eps;
  std::vector<double> xs, ys, sig;
  for (double l : levels) {
    GapPoint p;
    p.level = l;
    p.hits = static_cast<std::size_t>(
        std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g > eps * l; }));
    p.probability = static_cast<double>(p.hits) / static_cast<double>(sample_count);
    p.ci = stats::wilson(p.hits, sample_count);
    xs.push_back(l);
    ys.push_back(p.probability);
    sig.push_back(std::max(p.ci.width() / (2.0 * stats::kZ95), 1e-12));
    ex.points.push_back(p);
  }
  if (levels.size() >= 2) ex.fit = stats::weighted_line_fit(xs, ys, sig);
  return ex;
}

}  // namespace ldplab
