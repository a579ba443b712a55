#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfc/instance.hpp"

namespace cfc {

struct OptResult {
  std::vector<Vector> trajectory;
  double cost = 0.0;
  std::string method;        // "grid_dp" or "first_order"
  double gap_estimate = 0.0;  // grid resolution bound or solver residual

  double lower_bound() const { return std::max(0.0, cost - gap_estimate); }
};

struct GridBox {
  Vector lower;
  Vector upper;
};

// Smallest box holding x0, cost centers and bounded bodies, padded.
GridBox default_grid_box(const Instance& inst);

// Exact DP over a uniform grid (dim <= 2). The box is widened to cover the
// default box if it does not already.
OptResult opt_grid_dp(const Instance& inst, const std::optional<GridBox>& box, int points_per_dim);

// Joint first-order solve: smoothed accelerated descent with continuation,
// then subgradient polishing with iterate averaging. Extra starting paths
// (e.g. the advice) may be supplied.
OptResult opt_first_order(const Instance& inst, int iters, std::uint64_t seed,
                          const std::vector<std::vector<Vector>>& extra_starts = {});

// First-order solve followed by projection of every decision into K_t.
OptResult opt_for_ncbc(const Instance& inst, int iters, std::uint64_t seed = 1);

// max over box vertices of the dual norm of a subgradient; exact Lipschitz
// constant on the box for the supported families.
double lipschitz_on_box(const CostFunction& f, const GridBox& box, NormTag norm);

}  // namespace cfc
