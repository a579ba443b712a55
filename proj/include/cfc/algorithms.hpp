#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cfc/instance.hpp"

namespace cfc {

// Online decision maker. step() is called with t = 1, 2, ... after reset().
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual void reset(const Vector& x0, NormTag norm) = 0;
  virtual Vector step(int t, const CostFunction& f, const ConvexBody* body) = 0;
  virtual std::string name() const = 0;
};

struct Trajectory {
  Vector x0;
  std::vector<Vector> decisions;
  std::vector<double> hitting;
  std::vector<double> movement;
  std::vector<double> cumulative;     // C(1,t)
  std::vector<double> infeasibility;  // empty unless the instance has bodies

  int T() const { return static_cast<int>(decisions.size()); }
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  // C(t1, t2), 1-based inclusive; empty range gives 0.
  double partial(int t1, int t2) const;
  double round_cost(int t) const { return hitting[t - 1] + movement[t - 1]; }
  const Vector& at(int t) const { return t == 0 ? x0 : decisions[t - 1]; }
  double max_infeasibility() const;
};

// Cost accounting for a fixed decision sequence.
Trajectory evaluate_trajectory(const Instance& inst, const std::vector<Vector>& decisions);
Trajectory run(OnlineAlgorithm& alg, const Instance& inst);

std::unique_ptr<OnlineAlgorithm> stay_put();
std::unique_ptr<OnlineAlgorithm> greedy_minimizer();
std::unique_ptr<OnlineAlgorithm> project_greedy();
std::unique_ptr<OnlineAlgorithm> steiner_point_mc(long samples, std::uint64_t seed);
// Replays a fixed decision list; with `project` each decision is first
// projected into the round's body when one is given.
std::unique_ptr<OnlineAlgorithm> replay(std::vector<Vector> decisions, bool project = false,
                                        std::string label = "replay");

// Robust baseline by name: stay_put, greedy, project_greedy, steiner.
std::unique_ptr<OnlineAlgorithm> make_baseline(const std::string& name, long steiner_samples = 100000,
                                               std::uint64_t seed = 1);

}  // namespace cfc
