#pragma once

// Overflow-safe accumulation of left products Y = X_n ... X_1.
//
// Each exterior power Lambda^k Y (k < d) is carried as a matrix rescaled to
// max |entry| = 1 plus an accumulated log scale, and log|det Y| is summed
// exactly. Partial sums of kappa are read off as log ||Lambda^k Y|| and of
// lambda as log rho(Lambda^k Y); both are dominant quantities of their
// accumulator, so they keep full relative accuracy even when the small
// singular values of Y are far below machine precision relative to the top.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"

namespace ldplab {

namespace detail {

inline double renormalize(Matrix& m) {
  const double scale = max_abs_entry(m);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::SingularProduct, "accumulated product collapsed numerically");
  }
  m /= scale;
  return std::log(scale);
}

/// Rounds x to 44 significant bits relative to its own magnitude, so tiny
/// entries keep their digits.
inline std::int64_t relative_key(double x) {
  if (x == 0.0) return 0;
  int e = 0;
  const double m = std::frexp(x, &e);
  return static_cast<std::int64_t>(e) * (std::int64_t{1} << 46) + std::llround(std::ldexp(m, 44));
}

inline std::int64_t log_key(double x) { return std::llround(x * 1e12); }

inline std::vector<double> differences_of_partial_sums(const std::vector<double>& partial) {
  std::vector<double> out(partial.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < partial.size(); ++k) {
    out[k] = partial[k] - prev;
    prev = partial[k];
  }
  return sorted_descending(std::move(out));
}

inline double log_abs_det_and_sign(const Matrix& m, int& sign) {
  const double det = m.rows() <= 4 ? m.determinant() : m.partialPivLu().determinant();
  sign = det < 0 ? -1 : 1;
  return std::log(std::abs(det));
}

}  // namespace detail

/// A matrix prepared for accumulation: its exterior powers Lambda^1..Lambda^{d-1}
/// (rescaled) and its log|det|.
class Factor {
 public:
  explicit Factor(const SquareMatrix& g) : dim_(g.dim()) {
    const int d = static_cast<int>(dim_);
    for (int k = 1; k <= std::max(1, d - 1); ++k) {
      Matrix p = k == 1 ? g.matrix() : detail::exterior_power_raw(g.matrix(), k);
      const double s = detail::renormalize(p);
      powers_.push_back(std::move(p));
      log_scales_.push_back(s);
    }
    log_abs_det_ = detail::log_abs_det_and_sign(g.matrix(), det_sign_);
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Matrix>& powers() const noexcept { return powers_; }
  const std::vector<double>& log_scales() const noexcept { return log_scales_; }
  double log_abs_det() const noexcept { return log_abs_det_; }
  int det_sign() const noexcept { return det_sign_; }

 private:
  std::size_t dim_;
  std::vector<Matrix> powers_;
  std::vector<double> log_scales_;
  double log_abs_det_ = 0.0;
  int det_sign_ = 1;
};

/// Y_n = X_n ... X_1 kept as `scaled` (max |entry| = 1) times exp(logScale).
class WalkState {
 public:
  WalkState() = default;

  static WalkState identity(std::size_t dim) {
    WalkState s;
    const int d = static_cast<int>(dim);
    s.dim_ = dim;
    for (int k = 1; k <= std::max(1, d - 1); ++k) {
      const auto n = static_cast<Eigen::Index>(detail::combinations(d, k).size());
      s.powers_.push_back(Matrix::Identity(n, n));
      s.log_scales_.push_back(0.0);
    }
    return s;
  }

  /// Y <- X * Y, the newest increment multiplies on the left.
  void apply(const Factor& x) {
    for (std::size_t k = 0; k < powers_.size(); ++k) {
      powers_[k] = x.powers()[k] * powers_[k];
      log_scales_[k] += x.log_scales()[k] + detail::renormalize(powers_[k]);
    }
    log_abs_det_ += x.log_abs_det();
    det_sign_ *= x.det_sign();
    ++steps_;
  }

  std::size_t dim() const noexcept { return dim_; }
  const Matrix& scaled() const noexcept { return powers_.front(); }
  double log_scale() const noexcept { return log_scales_.front(); }
  std::size_t step_count() const noexcept { return steps_; }
  double log_abs_det() const noexcept { return log_abs_det_; }

  /// log sigma_1(Y).
  double top_cartan() const {
    if (dim_ == 1) return log_abs_det_;
    return std::log(detail::top_singular_value(powers_[0])) + log_scales_[0];
  }

  /// log rho(Y).
  double top_jordan() const {
    if (dim_ == 1) return log_abs_det_;
    return std::log(detail::spectral_radius(powers_[0])) + log_scales_[0];
  }

  CartanVector cartan() const {
    std::vector<double> partial;
    for (std::size_t k = 0; k + 1 < dim_; ++k) {
      partial.push_back(std::log(detail::top_singular_value(powers_[k])) + log_scales_[k]);
    }
    partial.push_back(log_abs_det_);
    return {detail::differences_of_partial_sums(partial)};
  }

  JordanVector jordan() const {
    std::vector<double> partial;
    for (std::size_t k = 0; k + 1 < dim_; ++k) {
      const double rho = detail::spectral_radius(powers_[k]);
      if (!(rho > 0.0)) throw Error(ErrorKind::EigenFailure, "spectral radius underflowed");
      partial.push_back(std::log(rho) + log_scales_[k]);
    }
    partial.push_back(log_abs_det_);
    return {detail::differences_of_partial_sums(partial)};
  }

  /// Rescaled entries (relative rounding), log scales and log|det|, for
  /// merging equal products.
  std::vector<std::int64_t> merge_key() const {
    std::vector<std::int64_t> key;
    for (std::size_t k = 0; k < powers_.size(); ++k) {
      const Matrix& m = powers_[k];
      for (Eigen::Index i = 0; i < m.size(); ++i) key.push_back(detail::relative_key(m(i)));
      key.push_back(detail::log_key(log_scales_[k]));
    }
    key.push_back(detail::log_key(log_abs_det_));
    return key;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Matrix> powers_;
  std::vector<double> log_scales_;
  double log_abs_det_ = 0.0;
  int det_sign_ = 1;
  std::size_t steps_ = 0;
};

namespace detail {

/// 2 x 2 specialization of WalkState without heap traffic, for enumeration.
struct Factor2 {
  double a, b, c, d;
  double log_scale;
  double log_abs_det;
  int det_sign;

  explicit Factor2(const SquareMatrix& g) {
    Matrix m = g.matrix();
    log_scale = renormalize(m);
    a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    log_abs_det = log_abs_det_and_sign(g.matrix(), det_sign);
  }
};

struct Product2 {
  double a = 1, b = 0, c = 0, d = 1;
  double log_scale = 0;
  double log_abs_det = 0;
  int det_sign = 1;

  void apply(const Factor2& x) {
    const double na = x.a * a + x.b * c, nb = x.a * b + x.b * d;
    const double nc = x.c * a + x.d * c, nd = x.c * b + x.d * d;
    const double s = std::max(std::max(std::abs(na), std::abs(nb)),
                              std::max(std::abs(nc), std::abs(nd)));
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorKind::SingularProduct, "accumulated product collapsed numerically");
    }
    a = na / s, b = nb / s, c = nc / s, d = nd / s;
    log_scale += x.log_scale + std::log(s);
    log_abs_det += x.log_abs_det;
    det_sign *= x.det_sign;
  }

  double top_cartan() const {
    return std::log(0.5 * (std::hypot(a + d, c - b) + std::hypot(a - d, b + c))) + log_scale;
  }

  double top_jordan() const {
    // det of the scaled matrix from the exactly tracked log|det|.
    const double det = det_sign * std::exp(log_abs_det - 2.0 * log_scale);
    const double tr = a + d;
    const double disc = tr * tr - 4.0 * det;
    const double rho = disc < 0.0 ? std::sqrt(std::abs(det)) : 0.5 * (std::abs(tr) + std::sqrt(disc));
    return std::log(rho) + log_scale;
  }

  CartanVector cartan() const {
    const double k1 = top_cartan();
    return {{k1, log_abs_det - k1}};
  }

  JordanVector jordan() const {
    const double l1 = top_jordan();
    return {{l1, log_abs_det - l1}};
  }

  std::vector<std::int64_t> merge_key() const {
    return {relative_key(a), relative_key(b), relative_key(c), relative_key(d), log_key(log_scale),
            log_key(log_abs_det)};
  }
};

/// Engines bind a measure's atoms to a product representation. The
/// enumerator and samplers are written once against this interface.
class GeneralEngine {
 public:
  using State = WalkState;

  explicit GeneralEngine(std::span<const SquareMatrix> atoms) : dim_(atoms.front().dim()) {
    for (const auto& g : atoms) factors_.emplace_back(g);
  }

  State identity() const { return WalkState::identity(dim_); }
  void apply(State& s, std::size_t atom) const { s.apply(factors_[atom]); }

  /// log sigma_1 of atom * s, without keeping the product.
  double top_cartan_after(const State& s, std::size_t atom) const {
    State t = s;
    t.apply(factors_[atom]);
    return t.top_cartan();
  }
  std::size_t size() const noexcept { return factors_.size(); }

 private:
  std::size_t dim_;
  std::vector<Factor> factors_;
};

class Engine2 {
 public:
  using State = Product2;

  explicit Engine2(std::span<const SquareMatrix> atoms) {
    for (const auto& g : atoms) factors_.emplace_back(g);
  }

  State identity() const { return {}; }
  void apply(State& s, std::size_t atom) const { s.apply(factors_[atom]); }

  double top_cartan_after(const State& s, std::size_t atom) const {
    const Factor2& x = factors_[atom];
    const double na = x.a * s.a + x.b * s.c, nb = x.a * s.b + x.b * s.d;
    const double nc = x.c * s.a + x.d * s.c, nd = x.c * s.b + x.d * s.d;
    // entries are at most 2 in modulus, no overflow in the squares
    const double p = na + nd, q = nc - nb, u = na - nd, v = nb + nc;
    const double sigma = 0.5 * (std::sqrt(p * p + q * q) + std::sqrt(u * u + v * v));
    return std::log(sigma) + s.log_scale + x.log_scale;
  }
  std::size_t size() const noexcept { return factors_.size(); }

 private:
  std::vector<Factor2> factors_;
};

/// Calls `fn(engine)` with the fastest engine for the dimension of `atoms`.
template <class Fn>
decltype(auto) with_engine(std::span<const SquareMatrix> atoms, Fn&& fn) {
  if (atoms.empty()) throw Error(ErrorKind::EmptySet, "no matrices supplied");
  if (atoms.front().dim() == 2) return fn(Engine2(atoms));
  return fn(GeneralEngine(atoms));
}

}  // namespace detail

/// Accumulates the product of `factors` given oldest first: the result is
/// factors[last] * ... * factors[0].
inline WalkState accumulate(std::span<const SquareMatrix> factors) {
  if (factors.empty()) throw Error(ErrorKind::EmptySet, "empty word");
  WalkState s = WalkState::identity(factors.front().dim());
  for (const auto& g : factors) {
    if (g.dim() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "mixed dimensions in word");
    s.apply(Factor(g));
  }
  return s;
}

}  // namespace ldplab
