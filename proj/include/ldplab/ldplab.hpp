#pragma once

// Everything at once.

#include "ldplab/error.hpp"
#include "ldplab/philox.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/measure.hpp"
#include "ldplab/product.hpp"
#include "ldplab/walk.hpp"
#include "ldplab/enumerate.hpp"
#include "ldplab/stats.hpp"
#include "ldplab/hull.hpp"
#include "ldplab/proximal.hpp"
#include "ldplab/rate.hpp"
#include "ldplab/spectrum.hpp"
#include "ldplab/io.hpp"
#include "ldplab/benchmarks.hpp"

namespace ldplab {

inline constexpr const char* version() {
#ifdef LDPLAB_VERSION
  return LDPLAB_VERSION;
#else
  return "0.1.0";
#endif
}

}  // namespace ldplab
