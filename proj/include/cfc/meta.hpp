#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cfc/algorithms.hpp"

namespace cfc {

// Per-round bookkeeping of a meta-algorithm.
//  interp / bd_interp: phase 0 = advice branch, 1 = interpolation branch
//  switch: phase index i;  nested_switch: 0 = advice, 1 = robust
struct PhaseLog {
  std::vector<int> phase;
  std::vector<double> threshold;
  std::vector<double> potential;
  std::vector<double> c_adv;  // C_Adv(1,t)
  std::vector<double> c_rob;  // C_Rob(1,t)
  std::vector<double> adv_round;
  std::vector<double> rob_round;
  std::vector<Vector> adv;
  std::vector<Vector> rob;
  std::vector<Vector> y;  // interp: y_t, bd_interp: y_t; equals x_t on advice rounds
  std::vector<Vector> z;  // interp only
  std::vector<double> nu;  // bd_interp only
};

// Wraps an advice algorithm and a robust algorithm; both advance every round.
class MetaAlgorithm : public OnlineAlgorithm {
 public:
  MetaAlgorithm(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob);
  void reset(const Vector& x0, NormTag norm) final;
  Vector step(int t, const CostFunction& f, const ConvexBody* body) final;
  const PhaseLog& log() const { return log_; }

 protected:
  struct RoundView {
    int t;
    const Vector& adv;
    const Vector& rob;
    const Vector& adv_prev;
    const Vector& rob_prev;
    const Vector& x_prev;
    double adv_round;
    double rob_round;
    double c_adv;
    double c_rob;
    const ConvexBody* body;
  };
  virtual void on_reset() {}
  virtual Vector decide(const RoundView& r) = 0;

  NormTag norm_;
  PhaseLog log_;

 private:
  std::unique_ptr<OnlineAlgorithm> adv_, rob_;
  Vector adv_prev_, rob_prev_, x_prev_;
  double c_adv_ = 0.0, c_rob_ = 0.0;
  int last_t_ = 0;
};

struct InterpParams {
  double epsilon;
  double gamma;
  double delta;
  bool fallback = false;  // closed form unusable, gamma = delta = epsilon/4
};

struct SwitchParams {
  double b;
  double delta_sw;
};

struct BoundPair {
  double c;
  double r;
};

// Throws InvalidArgument unless 2 gamma + 2 delta = epsilon (1e-12) with positive parts.
void validate_interp_params(const InterpParams& p);

InterpParams optimal_params_interp(double epsilon, double mu, double k);
// D <= 0 is an error unless allow_fallback, in which case gamma = delta = epsilon/4.
InterpParams optimal_params_bdinterp(double epsilon, double D, bool allow_fallback = false);
SwitchParams switch_params_from_epsilon(double epsilon);

BoundPair bound_interp(double epsilon, double gamma, double delta, double mu, double k);
BoundPair bound_bdinterp(double epsilon, double gamma, double delta, double D);
BoundPair bound_switch(double b, double delta_sw);
BoundPair bound_nested_switch(double epsilon, double r, int d);
// Closed forms of the robustness bounds at the optimal parameters.
double interp_optimized_robustness(double epsilon, double mu, double k);
double bdinterp_optimized_robustness(double epsilon, double D);

std::unique_ptr<MetaAlgorithm> interp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob,
                                      const InterpParams& params);
std::unique_ptr<MetaAlgorithm> bd_interp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob,
                                         const InterpParams& params);
std::unique_ptr<MetaAlgorithm> switch_meta(std::unique_ptr<OnlineAlgorithm> adv,
                                           std::unique_ptr<OnlineAlgorithm> rob, double b, double delta_sw);
std::unique_ptr<MetaAlgorithm> switch_from_epsilon(std::unique_ptr<OnlineAlgorithm> adv,
                                                   std::unique_ptr<OnlineAlgorithm> rob, double epsilon);
std::unique_ptr<MetaAlgorithm> nested_switch(std::unique_ptr<OnlineAlgorithm> adv,
                                             std::unique_ptr<OnlineAlgorithm> rob, double epsilon, double r, int d);
// Always plays the advice; identity check for the accounting.
std::unique_ptr<MetaAlgorithm> follow_advice(std::unique_ptr<OnlineAlgorithm> adv,
                                             std::unique_ptr<OnlineAlgorithm> rob);

}  // namespace cfc
