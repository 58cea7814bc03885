#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"

namespace ldplab {

struct Atom {
  std::string label;
  SquareMatrix matrix;
  double weight = 0.0;
};

/// A finitely supported probability measure on GL(d, R).
class MeasureSpec {
 public:
  MeasureSpec() = default;

  /// Validates: common dimension, unique labels, finite non-negative weights
  /// summing to 1 within `sum_tolerance`.
  explicit MeasureSpec(std::vector<Atom> atoms, double sum_tolerance = 1e-12)
      : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw Error(ErrorKind::ValidationError, "measure has no atoms");
    dim_ = atoms_.front().matrix.dim();
    std::set<std::string> labels;
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (a.matrix.dim() != dim_) {
        throw Error(ErrorKind::ValidationError,
                    "atom '" + a.label + "' has dimension " + std::to_string(a.matrix.dim()) +
                        ", expected " + std::to_string(dim_));
      }
      if (!labels.insert(a.label).second) {
        throw Error(ErrorKind::ValidationError, "duplicate atom label '" + a.label + "'");
      }
      if (!std::isfinite(a.weight) || a.weight < 0.0) {
        throw Error(ErrorKind::ValidationError, "atom '" + a.label + "' has an invalid weight");
      }
      total += a.weight;
    }
    if (std::abs(total - 1.0) > sum_tolerance) {
      throw Error(ErrorKind::ValidationError,
                  "weights sum to " + std::to_string(total) + ", not 1");
    }
    cumulative_.reserve(atoms_.size());
    double running = 0.0;
    for (const auto& a : atoms_) {
      running += a.weight;
      cumulative_.push_back(running);
    }
  }

  /// Uniform weights over `matrices`, labelled g0, g1, ...
  static MeasureSpec uniform(const std::vector<SquareMatrix>& matrices) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      atoms.push_back({"g" + std::to_string(i), matrices[i],
                       1.0 / static_cast<double>(matrices.size())});
    }
    return MeasureSpec(std::move(atoms), 1e-9);
  }

  static MeasureSpec dirac(const SquareMatrix& g, std::string label = "g") {
    return MeasureSpec({{std::move(label), g, 1.0}});
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  std::vector<SquareMatrix> support() const {
    std::vector<SquareMatrix> out;
    for (const auto& a : atoms_) out.push_back(a.matrix);
    return out;
  }

  double min_positive_weight() const {
    double w = INFINITY;
    for (const auto& a : atoms_)
      if (a.weight > 0.0) w = std::min(w, a.weight);
    return w;
  }

  /// Inverse-CDF lookup of a uniform draw in [0, 1).
  std::size_t pick(double u) const noexcept {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it != cumulative_.end()) return static_cast<std::size_t>(it - cumulative_.begin());
    for (std::size_t i = atoms_.size(); i-- > 0;)
      if (atoms_[i].weight > 0.0) return i;
    return 0;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

}  // namespace ldplab
