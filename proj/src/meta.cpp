#include "cfc/meta.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "cfc/error.hpp"

namespace cfc {

namespace {

constexpr double kGuard = 1e-12;

}  // namespace

MetaAlgorithm::MetaAlgorithm(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob)
    : adv_(std::move(adv)), rob_(std::move(rob)) {
  if (!adv_ || !rob_) throw InvalidArgument("meta-algorithm needs both an advice and a robust algorithm");
}

void MetaAlgorithm::reset(const Vector& x0, NormTag norm) {
  norm_ = norm;
  adv_->reset(x0, norm);
  rob_->reset(x0, norm);
  adv_prev_ = rob_prev_ = x_prev_ = x0;
  c_adv_ = c_rob_ = 0.0;
  last_t_ = 0;
  log_ = PhaseLog{};
  on_reset();
}

Vector MetaAlgorithm::step(int t, const CostFunction& f, const ConvexBody* body) {
  if (t != last_t_ + 1) throw InvalidArgument("meta-algorithm: rounds must be consecutive starting at 1");
  last_t_ = t;
  Vector a = adv_->step(t, f, body);
  Vector s = rob_->step(t, f, body);
  const double adv_round = eval(f, a) + distance(a, adv_prev_, norm_);
  const double rob_round = eval(f, s) + distance(s, rob_prev_, norm_);
  c_adv_ += adv_round;
  c_rob_ += rob_round;
  const RoundView view{t, a, s, adv_prev_, rob_prev_, x_prev_, adv_round, rob_round, c_adv_, c_rob_, body};
  Vector x = decide(view);
  log_.c_adv.push_back(c_adv_);
  log_.c_rob.push_back(c_rob_);
  log_.adv_round.push_back(adv_round);
  log_.rob_round.push_back(rob_round);
  log_.adv.push_back(a);
  log_.rob.push_back(s);
  adv_prev_ = std::move(a);
  rob_prev_ = std::move(s);
  x_prev_ = x;
  return x;
}

namespace {

class Interp final : public MetaAlgorithm {
 public:
  Interp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob, const InterpParams& p)
      : MetaAlgorithm(std::move(adv), std::move(rob)), p_(p) {
    validate_interp_params(p);
  }
  std::string name() const override { return "interp"; }

 protected:
  Vector decide(const RoundView& r) override {
    const double threshold = p_.delta * r.c_adv;
    Vector x, y, z;
    if (r.c_rob >= threshold - kGuard) {
      x = r.adv;
      y = z = x;
      log_.phase.push_back(0);
    } else {
      const Vector& sp = r.rob_prev;
      y = sp + radial_retraction(r.adv - sp, distance(r.x_prev, sp, norm_), norm_);
      const double shrink = std::max(distance(y, sp, norm_) - p_.gamma * r.adv_round, 0.0);
      z = sp + radial_retraction(y - sp, shrink, norm_);
      x = r.rob + radial_retraction(r.adv - r.rob, distance(z, sp, norm_), norm_);
      log_.phase.push_back(1);
    }
    log_.threshold.push_back(threshold);
    log_.potential.push_back(distance(r.adv, x, norm_));
    log_.y.push_back(std::move(y));
    log_.z.push_back(std::move(z));
    return x;
  }

 private:
  InterpParams p_;
};

class BdInterp final : public MetaAlgorithm {
 public:
  BdInterp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob, const InterpParams& p)
      : MetaAlgorithm(std::move(adv), std::move(rob)), p_(p) {
    validate_interp_params(p);
  }
  std::string name() const override { return "bd_interp"; }

 protected:
  Vector decide(const RoundView& r) override {
    const double threshold = p_.delta * r.c_adv;
    double nu = 0.0;
    const double gap_prev = distance(r.adv_prev, r.rob_prev, norm_);
    if (gap_prev > 0.0) {
      nu = distance(r.x_prev, r.rob_prev, norm_) / gap_prev;
      if (nu > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "bd_interp: interpolation weight " << nu << " > 1 at round " << r.t;
        throw RuntimeFailure(os.str());
      }
      nu = std::min(nu, 1.0);
    }
    Vector x, y;
    if (r.c_rob >= threshold - kGuard) {
      x = r.adv;
      y = x;
      log_.phase.push_back(0);
    } else {
      y = nu * r.adv + (1.0 - nu) * r.rob;
      const double radius = std::max(distance(y, r.rob, norm_) - p_.gamma * r.adv_round, 0.0);
      x = r.rob + radial_retraction(y - r.rob, radius, norm_);
      log_.phase.push_back(1);
    }
    const double gap = distance(r.adv, r.rob, norm_);
    log_.threshold.push_back(threshold);
    log_.potential.push_back(gap > 0.0 ? distance(x, r.rob, norm_) / gap : 0.0);
    log_.nu.push_back(nu);
    log_.y.push_back(std::move(y));
    return x;
  }

 private:
  InterpParams p_;
};

class Switch final : public MetaAlgorithm {
 public:
  Switch(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob, double b, double delta_sw)
      : MetaAlgorithm(std::move(adv), std::move(rob)), b_(b), delta_(delta_sw) {
    if (!(b > 1.0) || !std::isfinite(b)) throw InvalidArgument("switch: b must be > 1");
    if (!(delta_sw > 0.0 && delta_sw <= 1.0)) throw InvalidArgument("switch: delta_sw must be in (0, 1]");
  }
  std::string name() const override { return "switch"; }

 protected:
  void on_reset() override { i_ = 0; }

  Vector decide(const RoundView& r) override {
    for (;;) {
      const double base = std::pow(b_, i_);
      if (i_ % 2 == 0) {
        if (r.c_adv <= base + kGuard) {
          log_.phase.push_back(i_);
          log_.threshold.push_back(base);
          log_.potential.push_back(0.0);
          return r.adv;
        }
      } else if (r.c_rob <= delta_ * base) {
        log_.phase.push_back(i_);
        log_.threshold.push_back(delta_ * base);
        log_.potential.push_back(0.0);
        return r.rob;
      }
      if (++i_ > 100000) throw RuntimeFailure("switch: phase index diverged");
    }
  }

 private:
  double b_, delta_;
  int i_ = 0;
};

class NestedSwitch final : public MetaAlgorithm {
 public:
  NestedSwitch(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob, double eps, double r,
               int d)
      : MetaAlgorithm(std::move(adv), std::move(rob)), eps_(eps), r_(r), d_(d) {
    if (!(eps > 0.0)) throw InvalidArgument("nested_switch: epsilon must be > 0");
    if (!(r > 0.0)) throw InvalidArgument("nested_switch: r must be > 0");
    if (d < 1) throw InvalidArgument("nested_switch: d must be >= 1");
  }
  std::string name() const override { return "nested_switch"; }

 protected:
  void on_reset() override {
    prev_body_.reset();
    switched_ = false;
  }

  Vector decide(const RoundView& r) override {
    if (r.body == nullptr) throw InvalidArgument("nested_switch: instance has no bodies");
    if (prev_body_ && !body_nested_in(*r.body, *prev_body_, 1e-9, norm_)) {
      std::ostringstream os;
      os << "nested_switch: body " << r.t << " is not contained in body " << r.t - 1;
      throw InvalidArgument(os.str());
    }
    prev_body_ = *r.body;
    const double threshold = r_ * (d_ + 2);
    const bool use_rob = eps_ * r.c_adv >= threshold + kGuard;
    if (switched_ && !use_rob) throw RuntimeFailure("nested_switch: switched back to advice");
    switched_ = use_rob;
    log_.phase.push_back(use_rob ? 1 : 0);
    log_.threshold.push_back(threshold);
    log_.potential.push_back(0.0);
    return use_rob ? r.rob : r.adv;
  }

 private:
  double eps_, r_;
  int d_;
  std::optional<ConvexBody> prev_body_;
  bool switched_ = false;
};

class FollowAdvice final : public MetaAlgorithm {
 public:
  using MetaAlgorithm::MetaAlgorithm;
  std::string name() const override { return "follow_advice"; }

 protected:
  Vector decide(const RoundView& r) override {
    log_.phase.push_back(0);
    log_.threshold.push_back(0.0);
    log_.potential.push_back(0.0);
    return r.adv;
  }
};

}  // namespace

void validate_interp_params(const InterpParams& p) {
  if (!(p.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (!(p.gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (!(p.delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (std::fabs(2.0 * p.gamma + 2.0 * p.delta - p.epsilon) > 1e-12 * std::max(1.0, p.epsilon))
    throw InvalidArgument("gamma and delta must satisfy 2*gamma + 2*delta = epsilon");
}

InterpParams optimal_params_interp(double epsilon, double mu, double k) {
  if (!(epsilon > 0.0)) throw InvalidArgument("optimal_params_interp: epsilon must be > 0");
  if (!(mu >= std::sqrt(2.0) - 1e-12 && mu <= 3.0 + 1e-12)) throw InvalidArgument("optimal_params_interp: mu outside [sqrt2, 3]");
  if (!(k >= 1.0 && k <= 2.0)) throw InvalidArgument("optimal_params_interp: k outside [1, 2]");
  const double e = epsilon;
  const double root = std::sqrt(k * (2.0 + e) * (2.0 * k + e * (1.0 + e + mu)));
  const double gamma = (root - k * (2.0 + e)) / (2.0 * (1.0 - k + e + mu));
  if (!(gamma > 0.0 && gamma < e / 2.0) || !std::isfinite(gamma)) return {e, e / 4.0, e / 4.0, true};
  return {e, gamma, e / 2.0 - gamma, false};
}

InterpParams optimal_params_bdinterp(double epsilon, double D, bool allow_fallback) {
  if (!(epsilon > 0.0)) throw InvalidArgument("optimal_params_bdinterp: epsilon must be > 0");
  if (!(D > 0.0) || !std::isfinite(D)) {
    if (allow_fallback) return {epsilon, epsilon / 4.0, epsilon / 4.0, true};
    throw InvalidArgument("optimal_params_bdinterp: D must be > 0");
  }
  const double gamma = D * epsilon / (2.0 * (D + std::sqrt(D * (1.0 + epsilon))));
  return {epsilon, gamma, epsilon / 2.0 - gamma, false};
}

SwitchParams switch_params_from_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("switch_from_epsilon: epsilon must be > 0");
  const double gamma = std::sqrt(epsilon / 4.0);
  const double b = std::sqrt(1.0 / (gamma * gamma) + 1.0);
  const double delta = b * gamma * gamma - 1.0 / b;
  return {b, delta};
}

BoundPair bound_interp(double epsilon, double gamma, double delta, double mu, double k) {
  return {mu + epsilon, 1.0 + k / gamma + (mu + epsilon + 1.0 + k / gamma) / delta};
}

BoundPair bound_bdinterp(double epsilon, double gamma, double delta, double D) {
  return {1.0 + epsilon, D + D / gamma + (1.0 + epsilon) / delta};
}

BoundPair bound_switch(double b, double delta_sw) {
  const double b2 = b * b;
  const double ratio = b2 / (b2 - 1.0);
  const double cube = b2 * b / (b2 - 1.0);
  return {1.0 + 2.0 * (ratio + delta_sw * cube), 1.0 + 2.0 * (ratio + cube / delta_sw)};
}

BoundPair bound_nested_switch(double epsilon, double r, int d) {
  return {1.0 + epsilon, (1.0 + 1.0 / epsilon) * r * (d + 2)};
}

double interp_optimized_robustness(double epsilon, double mu, double k) {
  const double e = epsilon;
  const double root = std::sqrt(k * (2.0 + e) * (2.0 * k + e * (1.0 + e + mu)));
  return 3.0 + (2.0 * (e + k * (4.0 + e) + e * mu) + 4.0 * root) / (e * e);
}

double bdinterp_optimized_robustness(double epsilon, double D) {
  return 2.0 + D + (2.0 * (1.0 + D) + 4.0 * std::sqrt(D * (1.0 + epsilon))) / epsilon;
}

std::unique_ptr<MetaAlgorithm> interp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob,
                                      const InterpParams& params) {
  return std::make_unique<Interp>(std::move(adv), std::move(rob), params);
}

std::unique_ptr<MetaAlgorithm> bd_interp(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob,
                                         const InterpParams& params) {
  return std::make_unique<BdInterp>(std::move(adv), std::move(rob), params);
}

std::unique_ptr<MetaAlgorithm> switch_meta(std::unique_ptr<OnlineAlgorithm> adv,
                                           std::unique_ptr<OnlineAlgorithm> rob, double b, double delta_sw) {
  return std::make_unique<Switch>(std::move(adv), std::move(rob), b, delta_sw);
}

std::unique_ptr<MetaAlgorithm> switch_from_epsilon(std::unique_ptr<OnlineAlgorithm> adv,
                                                   std::unique_ptr<OnlineAlgorithm> rob, double epsilon) {
  const SwitchParams p = switch_params_from_epsilon(epsilon);
  return switch_meta(std::move(adv), std::move(rob), p.b, p.delta_sw);
}

std::unique_ptr<MetaAlgorithm> nested_switch(std::unique_ptr<OnlineAlgorithm> adv,
                                             std::unique_ptr<OnlineAlgorithm> rob, double epsilon, double r, int d) {
  return std::make_unique<NestedSwitch>(std::move(adv), std::move(rob), epsilon, r, d);
}

std::unique_ptr<MetaAlgorithm> follow_advice(std::unique_ptr<OnlineAlgorithm> adv,
                                             std::unique_ptr<OnlineAlgorithm> rob) {
  return std::make_unique<FollowAdvice>(std::move(adv), std::move(rob));
}

}  // namespace cfc
