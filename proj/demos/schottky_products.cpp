// A certified Schottky pair and the spectral deviation of its products
// g2^m g1^k, which stays bounded in m and k.

#include <cstdio>
#include <numbers>
#include <vector>

#include "ldplab/ldplab.hpp"

int main() {
  using namespace ldplab;
  const auto pair = benchmarks::schottky_pair(5.0, std::numbers::pi / 6.0);
  const std::vector<int> theta{1};
  const auto cert = is_schottky(pair, theta, 0.1, 0.05, 2000, 3);
  std::printf("schottky: %s (min cross gap %.4f, need %.4f)\n", cert.verdict ? "yes" : "no", cert.min_cross_gap, 0.6);

  std::printf("deviation log lambda_1(g2^m g1^k) - m log lambda_1(g2) - k log lambda_1(g1)\n");
  std::printf("%4s", "m\\k");
  for (int k = 1; k <= 5; ++k) std::printf("%12d", k);
  std::printf("\n");
  for (std::size_t m = 1; m <= 5; ++m) {
    std::printf("%4zu", m);
    for (std::size_t k = 1; k <= 5; ++k) {
      const std::vector<std::size_t> exps{k, m};
      std::printf("%12.6f", product_spectral_deviation(pair, exps));
    }
    std::printf("\n");
  }
}
