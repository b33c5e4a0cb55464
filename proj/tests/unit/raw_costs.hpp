#pragma once
// Costs written out from their definitions, for feeding the grid oracles.
// Deliberately independent of the closed forms under test.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "switchcontrol/oracle.hpp"

namespace rawcost {

inline swc::oracle::ScalarFn switching(double alpha, double beta) {
  return [=](std::span<const double> v) {
    const double l0 = (v[0] != 0.0 && v[1] != 0.0) ? 1.0 : 0.0;
    return 0.5 * alpha * (v[0] * v[0] + v[1] * v[1]) + beta * l0;
  };
}

inline swc::oracle::ScalarFn sparse(double alpha, double beta) {
  return [=](std::span<const double> v) { return 0.5 * alpha * v[0] * v[0] + (v[0] != 0.0 ? beta : 0.0); };
}

/// Multi-bang cost restricted to [levels.front(), levels.back()] (the box is the domain).
inline swc::oracle::ScalarFn multibang(double alpha, double beta, std::vector<double> levels) {
  return [=](std::span<const double> v) {
    if (v[0] < levels.front() || v[0] > levels.back()) return std::numeric_limits<double>::infinity();
    double l0 = 1.0;
    for (double u : levels) {
      if (v[0] == u) l0 = 0.0;
    }
    return 0.5 * alpha * v[0] * v[0] + beta * l0;
  };
}

inline swc::oracle::GridSpec multibang_box(const std::vector<double>& levels, int points) {
  swc::oracle::GridSpec g;
  g.lower = {levels.front()};
  g.upper = {levels.back()};
  g.coarse_step = (levels.back() - levels.front()) / points;
  g.box_is_domain = true;
  for (double u : levels) g.atoms.push_back({u});
  return g;
}

}  // namespace rawcost
