#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cfc/advice.hpp"
#include "cfc/instance.hpp"

namespace cfc {

// Adaptive hypercube-face construction against switching policies on l2 CBC.
struct SwitchingLowerBoundParams {
  int d = 16;                    // sqrt(d) must be an integer and 3 sqrt(d) <= d
  double delta = 1e-3;           // stationarity tolerance
  double eps_drift = 0.1;        // advice step length in phase two
  int stationarity_cap = 2000;   // rounds per subphase
  int window = 10;               // rounds in the sliding stationarity test
  int drift_cap = 200000;        // phase-two rounds before giving up
  double hitting_scale = 3.0;    // BodyDistance scale of the emitted costs
};

using ProbeFactory = std::function<std::unique_ptr<OnlineAlgorithm>()>;
using PolicyFactory = std::function<std::unique_ptr<OnlineAlgorithm>(std::unique_ptr<OnlineAlgorithm> adv,
                                                                     std::unique_ptr<OnlineAlgorithm> rob)>;

struct SwitchingLowerBound {
  Instance instance;
  AdviceSpec advice;                  // Replay of the advice trajectory
  std::vector<Vector> alg_decisions;  // the switching policy's decisions
  std::vector<Vector> rob_decisions;
  std::vector<int> m;                 // end round of each phase-one subphase (counterfactual run)
  std::vector<double> subphase_rob_cost;
  std::vector<Vector> rob_tails;      // r_{m_j} restricted to the free coordinates
  Vector corner;                      // the hypercube corner a
  bool corner_exact = true;
  int phase_one_end = 0;              // subphase j at which the policy sat on the advice; 0 if none
  std::string phase_two_case = "none";  // none, 1, 2a, 2b-i, 2b-ii
  int drift_rounds = 0;               // k
  bool truncated = false;
};

// Farthest corner of {-1,1}^n from a set of points (max-min l2 distance).
// Exhaustive when n <= 20, else multi-start single-flip ascent.
Vector hypercube_argmax(const std::vector<Vector>& points, bool* exact = nullptr);
double hypercube_objective(const Vector& corner, const std::vector<Vector>& points);

SwitchingLowerBound gen_switching_lowerbound(const SwitchingLowerBoundParams& params, const ProbeFactory& rob,
                                             const PolicyFactory& policy);

}  // namespace cfc
