// Runs acceptance criteria 1-10 and prints one PASS/FAIL line each.
// Exit status is 1 when any criterion fails.
//
//   acceptance [--seed S] [--workers W]

#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <iostream>

#include "ldplab/suite.hpp"

int main(int argc, char** argv) {
  ldplab::suite::SuiteOptions opt;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--seed") == 0) opt.seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (std::strcmp(argv[i], "--workers") == 0) opt.workers = std::strtoull(argv[i + 1], nullptr, 10);
    else {
      std::cerr << "unknown argument " << argv[i] << "\n";
      return 1;
    }
  }
  std::cout << "seed " << opt.seed << ", workers " << opt.workers << "\n";
  int failed = 0;
  const int count = static_cast<int>(ldplab::suite::criteria().size());
  for (int id = 1; id <= count; ++id) {
    const auto r = ldplab::suite::run(id, opt);
    if (!r.pass) ++failed;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << std::setw(2) << r.id << ": " << r.name << " -- "
              << r.detail << " [" << std::fixed << std::setprecision(1) << r.seconds << " s]\n"
              << std::defaultfloat << std::flush;
  }
  std::cout << (count - failed) << "/" << count << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
