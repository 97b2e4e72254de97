#pragma once

// Cross-checks between independent routes to the same quantity.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sbfi/env.hpp"

namespace sbfi {

struct ValidationCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Deterministic for a given seed.
std::vector<ValidationCheck> run_validation(std::uint64_t seed);

/// Random chain with alpha = 1 - 2(p + r) > 0.
template <class Engine>
ChainParams random_chain(Engine& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = 0.49 * unit(engine);
  const double r = 0.49 * (1.0 - 2.0 * p) * unit(engine);
  const double delta = p * unit(engine);
  return ChainParams::from_p_r_delta(p, r, delta);
}

}  // namespace sbfi
