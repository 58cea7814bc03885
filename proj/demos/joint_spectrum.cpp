// Joint spectrum of the truncated boundary example with K = 2: the scaled
// clouds (1/n) kappa(S^n), their Hausdorff steps and the JSR brackets.

#include <cstdio>

#include "ldplab/ldplab.hpp"

int main() {
  using namespace ldplab;
  const auto atoms = benchmarks::boundary_example(2).support();

  const auto sp = iterate_spectrum(atoms, 8);
  std::printf("%5s %9s %10s %10s %12s\n", "depth", "products", "left", "right", "step");
  for (const auto& lv : sp.levels) {
    const auto v = lv.hull.vertices();
    std::printf("%5zu %9zu %10.5f %10.5f %12.6f\n", lv.depth, lv.cloud.size(), v.front()[0], v.back()[0],
                lv.hausdorff_to_previous.value_or(0.0));
  }

  const auto b = joint_bounds(atoms, 12);
  std::printf("log JSR in [%.6f, %.6f], log subradius in [%.6f, %.6f]\n", b.lower, b.upper, b.sub_lower, b.sub_upper);
}
