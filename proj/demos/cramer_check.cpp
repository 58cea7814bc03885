// Exact finite-n rate on two commuting diagonal atoms next to the binomial
// value it must reproduce.

#include <cmath>
#include <cstdio>

#include "ldplab/ldplab.hpp"

int main() {
  using namespace ldplab;
  const auto mu = benchmarks::diagonal_pair();
  const int n = 20;
  const auto grid = RateGrid::top(3.0, 3.5, 0.025);  // one lattice point per cell
  const auto est = exact_rate(mu, n, grid);

  std::printf("%8s %14s %14s\n", "kappa_1", "exact I_20", "binomial");
  for (int j = 0; j <= n; ++j) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    const double binomial = std::log(2.0) - log_choose / n;
    std::printf("%8.4f %14.10f %14.10f\n", grid.point(j)[0], est.values[j], binomial);
  }

  // the Lyapunov vector is (3.25, -3.25)
  const auto lyap = lyapunov_estimate(mu, 200, 20000, 1);
  std::printf("lyapunov estimate: (%.4f, %.4f) +- %.4f\n", lyap.vector[0], lyap.vector[1], lyap.half_width[0]);
}
