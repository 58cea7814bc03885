#pragma once

// Shipped measures used by the tests, the CLI and the acceptance suite.

#include <cmath>
#include <string>
#include <vector>

#include "ldplab/error.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"

namespace ldplab::benchmarks {

/// diag(e^3, e^-3) and diag(e^3.5, e^-3.5) with weights 1/2, 1/2. The top
/// coordinate of kappa(Y_n) is 3n + 0.5 * Binomial(n, 1/2).
inline MeasureSpec diagonal_pair() {
  return MeasureSpec({{"A", SquareMatrix::diagonal({std::exp(3.0), std::exp(-3.0)}), 0.5},
                      {"B", SquareMatrix::diagonal({std::exp(3.5), std::exp(-3.5)}), 0.5}});
}

inline SquareMatrix shear_upper() { return SquareMatrix::from_rows({{1, 1}, {0, 1}}); }
inline SquareMatrix shear_lower() { return SquareMatrix::from_rows({{1, 0}, {1, 1}}); }

/// diag(a_k, 1/a_k), a_k = e^(4 - 1/k).
inline SquareMatrix boundary_atom(int k) {
  const double a = std::exp(4.0 - 1.0 / static_cast<double>(k));
  return SquareMatrix::diagonal({a, 1.0 / a});
}

/// mu_K = 1/4 (delta_U + delta_L) + 1/(2K) sum_{k <= K} delta_{A_k}: the
/// boundary example with the diagonal family cut off at K.
inline MeasureSpec boundary_example(int K) {
  if (K < 1) throw Error(ErrorKind::BadParameters, "K must be at least 1");
  std::vector<Atom> atoms{{"U", shear_upper(), 0.25}, {"L", shear_lower(), 0.25}};
  for (int k = 1; k <= K; ++k) {
    atoms.push_back({"A" + std::to_string(k), boundary_atom(k), 0.5 / static_cast<double>(K)});
  }
  return MeasureSpec(std::move(atoms), 1e-12);
}

/// g1 = diag(e^s, e^-s) and g2 = R(theta) g1 R(theta)^-1: proximal with
/// attractors e1 and R(theta) e1, repellers e2 and R(theta) e2.
inline std::vector<SquareMatrix> schottky_pair(double stretch, double theta) {
  const auto g1 = SquareMatrix::diagonal({std::exp(stretch), std::exp(-stretch)});
  return {g1, conjugate(rotation2(theta), g1)};
}

inline MeasureSpec schottky_measure(double stretch, double theta) {
  const auto pair = schottky_pair(stretch, theta);
  return MeasureSpec({{"g1", pair[0], 0.5}, {"g2", pair[1], 0.5}});
}

/// Four conjugates R(theta_k) diag(e^s, e^-s) R(theta_k)^-1, weights 1/4, with
/// theta_0 = 0 and cos(theta_k) = exp(-g_k / sqrt 2) for g = 3.5, 6, 9. The
/// repellers sit close to the other attractors, so the pairing gap
/// kappa - lambda of a product spreads over several scales.
inline std::vector<SquareMatrix> schottky_fan(double stretch = 12.0) {
  std::vector<SquareMatrix> out{SquareMatrix::diagonal({std::exp(stretch), std::exp(-stretch)})};
  for (double g : {3.5, 6.0, 9.0}) {
    out.push_back(conjugate(rotation2(std::acos(std::exp(-g / std::sqrt(2.0)))), out.front()));
  }
  return out;
}

inline MeasureSpec schottky_fan_measure(double stretch = 12.0) {
  const auto fan = schottky_fan(stretch);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < fan.size(); ++i) atoms.push_back({"f" + std::to_string(i), fan[i], 0.25});
  return MeasureSpec(std::move(atoms));
}

}  // namespace ldplab::benchmarks
