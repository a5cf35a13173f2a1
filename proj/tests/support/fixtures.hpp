#pragma once

#include <map>
#include <mutex>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"

namespace qdelaunay::testing {

inline const DimensionParams& params_for(int n) {
  static std::map<int, DimensionParams> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_params(n)).first;
  return it->second;
}

// Orbits reused across test cases; shooting is the expensive part.
inline const DelaunayOrbit& orbit_for(int n, double a) {
  static std::map<std::pair<int, double>, DelaunayOrbit> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto key = std::make_pair(n, a);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, shoot(params_for(n), a)).first;
  return it->second;
}

}  // namespace qdelaunay::testing
