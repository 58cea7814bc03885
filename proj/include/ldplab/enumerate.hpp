#pragma once

// Exhaustive enumeration of the words of length n over a finite set of atoms.
//
// The first levels are expanded breadth-first with equal products merged
// (probabilities add up), as long as a level stays below `merge_limit`
// candidates. The rest is a depth-first search from every merged state that
// shares prefix products. Merged states are cut into a fixed number of chunks,
// each with its own accumulator, so reductions happen in a fixed order and do
// not depend on the worker count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/product.hpp"
#include "ldplab/walk.hpp"

namespace ldplab {

inline constexpr double kDefaultWordBudget = 2e6;
inline constexpr std::size_t kDefaultMergeLimit = std::size_t{1} << 21;
inline constexpr std::size_t kEnumerationChunks = 64;

/// Number of words of length n over the atoms with positive weight.
inline double word_count(std::span<const double> weights, std::size_t n) {
  std::size_t live = 0;
  for (double w : weights)
    if (w > 0.0) ++live;
  return std::pow(static_cast<double>(live), static_cast<double>(n));
}

inline void check_budget(std::span<const double> weights, std::size_t n, double budget) {
  const double needed = word_count(weights, n);
  if (needed > budget) throw BudgetExceeded(needed, budget);
}

/// Keeps the first state per merge key, in insertion order.
template <class State>
class Deduper {
 public:
  /// True if `s` is new; last_index() is then its slot, else the slot of the
  /// equal state seen before.
  bool insert(const State& s) {
    auto key = s.merge_key();
    const std::uint64_t h = hash(key);
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (keys_[it->second] == key) {
        last_ = it->second;
        return false;
      }
    }
    last_ = states_.size();
    index_.emplace(h, last_);
    states_.push_back(s);
    keys_.push_back(std::move(key));
    return true;
  }

  std::size_t last_index() const noexcept { return last_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::vector<State>& states() noexcept { return states_; }

 private:
  static std::uint64_t hash(const std::vector<std::int64_t>& key) {
    std::uint64_t h = 0x84222325cbf29ce4ull;
    for (auto v : key) h = derive_seed(h, static_cast<std::uint64_t>(v));
    return h;
  }

  std::unordered_multimap<std::uint64_t, std::size_t> index_;
  std::vector<State> states_;
  std::vector<std::vector<std::int64_t>> keys_;
  std::size_t last_ = 0;
};

namespace detail {

template <class Engine, class Acc, class Visit>
void enumerate_from(const Engine& engine, std::span<const double> weights, std::size_t remaining,
                    const typename Engine::State& state, double probability, Acc& acc, Visit& visit) {
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] <= 0.0) continue;
    auto next = state;
    engine.apply(next, a);
    if (remaining == 1) {
      visit(acc, next, probability * weights[a]);
    } else {
      enumerate_from(engine, weights, remaining - 1, next, probability * weights[a], acc, visit);
    }
  }
}

/// Visits every product of `depth` atoms (depth 0: the identity) with its
/// total probability; equal products may be visited once with summed weight.
template <class Engine, class Acc, class Visit>
std::vector<Acc> enumerate_states(const Engine& engine, std::span<const double> weights,
                                  std::size_t depth, const Acc& prototype, Visit visit,
                                  std::size_t workers, std::size_t merge_limit) {
  using State = typename Engine::State;
  std::size_t live = 0;
  for (double w : weights)
    if (w > 0.0) ++live;

  std::vector<State> level{engine.identity()};
  std::vector<double> prob{1.0};
  std::size_t merged_depth = 0;
  while (merged_depth < depth && level.size() * live <= merge_limit) {
    Deduper<State> next;
    std::vector<double> next_prob;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t a = 0; a < weights.size(); ++a) {
        if (weights[a] <= 0.0) continue;
        State s = level[i];
        engine.apply(s, a);
        if (next.insert(s)) {
          next_prob.push_back(prob[i] * weights[a]);
        } else {
          next_prob[next.last_index()] += prob[i] * weights[a];
        }
      }
    }
    level = std::move(next.states());
    prob = std::move(next_prob);
    ++merged_depth;
  }

  const std::size_t remaining = depth - merged_depth;
  const std::size_t chunks = std::min(kEnumerationChunks, level.size());
  std::vector<Acc> per_chunk(chunks, prototype);
  parallel_for(chunks, workers, [&](std::size_t begin, std::size_t end) {
    auto local_visit = visit;
    for (std::size_t c = begin; c < end; ++c) {
      const std::size_t lo = c * level.size() / chunks, hi = (c + 1) * level.size() / chunks;
      for (std::size_t i = lo; i < hi; ++i) {
        if (remaining == 0) {
          local_visit(per_chunk[c], level[i], prob[i]);
        } else {
          enumerate_from(engine, weights, remaining, level[i], prob[i], per_chunk[c], local_visit);
        }
      }
    }
  });
  return per_chunk;
}

}  // namespace detail

/// Visits every product of n atoms, calling visit(acc, state, probability).
/// Equal products may be merged into one visit carrying their total
/// probability. Returns the accumulators to be reduced in order.
template <class Engine, class Acc, class Visit>
std::vector<Acc> enumerate_words(const Engine& engine, std::span<const double> weights,
                                 std::size_t n, const Acc& prototype, Visit visit,
                                 std::size_t workers = 1,
                                 std::size_t merge_limit = kDefaultMergeLimit) {
  if (n == 0) throw Error(ErrorKind::BadParameters, "word length must be positive");
  return detail::enumerate_states(engine, weights, n, prototype, std::move(visit), workers, merge_limit);
}

/// As enumerate_words, but only log sigma_1 of each product is needed:
/// visit(acc, top_cartan, probability). The last factor is never stored.
template <class Engine, class Acc, class Visit>
std::vector<Acc> enumerate_top_cartan(const Engine& engine, std::span<const double> weights,
                                      std::size_t n, const Acc& prototype, Visit visit,
                                      std::size_t workers = 1,
                                      std::size_t merge_limit = kDefaultMergeLimit) {
  if (n == 0) throw Error(ErrorKind::BadParameters, "word length must be positive");
  auto last_step = [&engine, weights, visit](Acc& acc, const typename Engine::State& s, double p) mutable {
    for (std::size_t a = 0; a < weights.size(); ++a) {
      if (weights[a] <= 0.0) continue;
      visit(acc, engine.top_cartan_after(s, a), p * weights[a]);
    }
  };
  return detail::enumerate_states(engine, weights, n - 1, prototype, last_step, workers, merge_limit);
}

}  // namespace ldplab
