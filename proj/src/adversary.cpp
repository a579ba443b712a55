#include "cfc/adversary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_point(const Vector& a, const Vector& b) { return (a - b).norm() <= 1e-12 * (1.0 + b.norm()); }

// Advice that plays whatever the builder placed in the shared slot.
class SlotAdvice final : public OnlineAlgorithm {
 public:
  explicit SlotAdvice(const Vector* slot) : slot_(slot) {}
  void reset(const Vector&, NormTag) override {}
  Vector step(int, const CostFunction&, const ConvexBody*) override { return *slot_; }
  std::string name() const override { return "advice_slot"; }

 private:
  const Vector* slot_;
};

// Decisions of a probe on a round sequence, for the stationarity test.
class ProbeRun {
 public:
  ProbeRun(std::unique_ptr<OnlineAlgorithm> alg, const Vector& x0) : alg_(std::move(alg)), prev_(x0) {
    alg_->reset(x0, NormTag::l2());
  }
  // Returns the round cost.
  double step(const CostFunction& f, const ConvexBody& k) {
    ++t_;
    Vector x = alg_->step(t_, f, &k);
    const double c = eval(f, x) + (x - prev_).norm();
    prev_ = std::move(x);
    return c;
  }
  const Vector& last() const { return prev_; }

 private:
  std::unique_ptr<OnlineAlgorithm> alg_;
  Vector prev_;
  int t_ = 0;
};

AffineSliceOfBox slice(int d, const std::vector<double>& z, int j) {
  AffineSliceOfBox s;
  s.lower = Vector::Constant(d, -kInf);
  s.upper = Vector::Constant(d, kInf);
  for (int i = 0; i < j; ++i) {
    s.fixed_index.push_back(i);
    s.fixed_value.push_back(z[i]);
  }
  return s;
}

}  // namespace

double hypercube_objective(const Vector& corner, const std::vector<Vector>& points) {
  double best = kInf;
  for (const auto& p : points) best = std::min(best, (corner - p).norm());
  return best;
}

Vector hypercube_argmax(const std::vector<Vector>& points, bool* exact) {
  if (points.empty()) throw InvalidArgument("hypercube_argmax: no points");
  const int n = static_cast<int>(points.front().size());
  if (n == 0) {
    if (exact) *exact = true;
    return Vector(0);
  }
  // ||x - r||^2 = n - 2 x.r + |r|^2, so compare the squared form
  auto sq_obj = [&](const Vector& x) {
    double best = kInf;
    for (const auto& p : points) best = std::min(best, (x - p).squaredNorm());
    return best;
  };
  if (n <= 20) {
    Vector x(n), best_x(n);
    double best = -1.0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u ? 1.0 : -1.0;
      const double v = sq_obj(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    if (exact) *exact = true;
    return best_x;
  }
  Rng rng(0x5eed);
  Vector best_x;
  double best = -1.0;
  for (int s = 0; s < 16; ++s) {
    Vector x(n);
    if (s == 0) {
      Vector mean = Vector::Zero(n);
      for (const auto& p : points) mean += p;
      for (int i = 0; i < n; ++i) x[i] = mean[i] > 0.0 ? -1.0 : 1.0;
    } else {
      for (int i = 0; i < n; ++i) x[i] = rng.below(2) ? 1.0 : -1.0;
    }
    double v = sq_obj(x);
    for (bool improved = true; improved;) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        x[i] = -x[i];
        const double w = sq_obj(x);
        if (w > v + 1e-12) {
          v = w;
          improved = true;
        } else {
          x[i] = -x[i];
        }
      }
    }
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  if (exact) *exact = false;
  return best_x;
}

SwitchingLowerBound gen_switching_lowerbound(const SwitchingLowerBoundParams& p, const ProbeFactory& rob_factory,
                                             const PolicyFactory& policy_factory) {
  const int d = p.d;
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  if (d < 1 || s * s != d) throw InvalidArgument("switching lower bound: sqrt(d) must be an integer");
  const int J = 3 * s;
  if (J > d) throw InvalidArgument("switching lower bound: need 3 sqrt(d) <= d");
  if (!(p.delta > 0.0) || !(p.eps_drift > 0.0)) throw InvalidArgument("switching lower bound: delta and eps_drift must be > 0");
  if (p.window < 1 || p.stationarity_cap < p.window) throw InvalidArgument("switching lower bound: bad stationarity window/cap");
  const int n = d - J;
  const Vector x0 = Vector::Zero(d);
  const NormTag l2 = NormTag::l2();
  auto cost_for = [&](const ConvexBody& k) -> CostFunction { return BodyDistance{k, p.hitting_scale, l2}; };

  SwitchingLowerBound out;

  // Counterfactual run of the probe through all phase-one subphases.
  std::vector<double> z(J, 0.0);
  std::vector<int> sub_len;
  {
    ProbeRun probe(rob_factory(), x0);
    int t = 0;
    for (int j = 1; j <= J; ++j) {
      if (j == 1) z[0] = 1.0;
      else z[j - 1] = probe.last()[j - 1] > 0.0 ? -1.0 : 1.0;  // -sgn, 1 at zero
      const ConvexBody k = slice(d, z, j);
      const CostFunction f = cost_for(k);
      std::vector<double> costs;
      double first = 0.0;
      int len = 0;
      for (;;) {
        const double c = probe.step(f, k);
        ++t;
        ++len;
        if (len == 1) first = c;
        costs.push_back(c);
        if (len > p.window) {
          double tail = 0.0;
          for (int q = len - p.window; q < len; ++q) tail += costs[q];
          if (tail <= p.delta) break;
        }
        if (len >= p.stationarity_cap) {
          out.truncated = true;
          break;
        }
      }
      out.m.push_back(t);
      sub_len.push_back(len);
      out.subphase_rob_cost.push_back(first);
      out.rob_tails.push_back(probe.last().tail(n));
    }
  }
  out.corner = hypercube_argmax(out.rob_tails, &out.corner_exact);
  Vector a_hat(d);
  for (int i = 0; i < J; ++i) a_hat[i] = z[i];
  a_hat.tail(n) = out.corner;

  // Interactive run against the policy.
  Instance& inst = out.instance;
  inst.x0 = x0;
  inst.norm = l2;
  inst.subclass = Subclass::CBC;
  inst.bodies.emplace();
  Vector slot = a_hat;
  auto rob_inner = rob_factory();
  auto policy = policy_factory(std::make_unique<SlotAdvice>(&slot), std::move(rob_inner));
  policy->reset(x0, l2);
  // A second probe copy tracks Rob's decisions in the real run.
  ProbeRun rob_track(rob_factory(), x0);
  std::vector<Vector> adv_traj;

  auto play = [&](const ConvexBody& k, const Vector& adv) {
    const CostFunction f = cost_for(k);
    inst.costs.push_back(f);
    inst.bodies->push_back(k);
    slot = adv;
    adv_traj.push_back(adv);
    rob_track.step(f, k);
    out.rob_decisions.push_back(rob_track.last());
    const int t = static_cast<int>(inst.costs.size());
    out.alg_decisions.push_back(policy->step(t, inst.costs.back(), &inst.bodies->back()));
  };
  auto alg_now = [&]() -> const Vector& { return out.alg_decisions.back(); };

  auto serve_subphase = [&](int j) {
    const ConvexBody k = slice(d, z, j);
    for (int q = 0; q < sub_len[j - 1]; ++q) play(k, a_hat);
  };

  int end_j = 0;
  for (int j = 1; j <= J; ++j) {
    serve_subphase(j);
    if (same_point(alg_now(), adv_traj.back())) {
      end_j = j;
      break;
    }
  }
  // Rob is advice-agnostic, so the real run must retrace the counterfactual one.
  for (int j = 1; j <= (end_j == 0 ? J : end_j); ++j) {
    if ((out.rob_decisions[out.m[j - 1] - 1].tail(n) - out.rob_tails[j - 1]).norm() > 1e-9)
      throw RuntimeFailure("switching lower bound: probe is not deterministic");
  }
  out.phase_one_end = end_j;

  auto drift = [&](int j, const Vector& r_tail) {
    const ConvexBody k = slice(d, z, j);
    Vector v = out.corner - r_tail;
    const double nv = v.norm();
    if (nv > 0.0) v /= nv;
    else v = Vector::Zero(n);
    int q = 0;
    for (;;) {
      ++q;
      Vector adv = a_hat;
      adv.tail(n) += (q * p.eps_drift) * v;
      play(k, adv);
      if (same_point(alg_now(), out.rob_decisions.back())) break;
      if (q >= p.drift_cap) {
        out.truncated = true;
        break;
      }
    }
    out.drift_rounds = q;
    const ConvexBody fin = Singleton{adv_traj.back()};
    play(fin, adv_traj.back());
  };

  if (end_j > 0) {
    const Vector& r_j = out.rob_tails[end_j - 1];
    const double lim = std::sqrt(static_cast<double>(n));
    if ((out.corner - r_j).norm() >= lim) {
      out.phase_two_case = "1";
      drift(end_j, r_j);
    } else {
      int i_star = 0;
      double best = kInf;
      for (int i = 1; i <= J; ++i) {
        const double v = (-out.corner - out.rob_tails[i - 1]).norm();
        if (v < best) {
          best = v;
          i_star = i;
        }
      }
      if (i_star == end_j) throw RuntimeFailure("switching lower bound: corner is not a maximizer");
      if (i_star < end_j) {
        out.phase_two_case = "2a";
        drift(end_j, r_j);
      } else {
        for (int l = end_j + 1; l <= i_star; ++l) serve_subphase(l);
        if (same_point(alg_now(), out.rob_decisions.back())) {
          out.phase_two_case = "2b-i";
          play(Singleton{a_hat}, a_hat);
        } else if (same_point(alg_now(), a_hat)) {
          out.phase_two_case = "2b-ii";
          drift(i_star, out.rob_tails[i_star - 1]);
        } else {
          throw RuntimeFailure("switching lower bound: policy is neither on the advice nor on Rob");
        }
      }
    }
  }

  out.advice.kind = AdviceSpec::Kind::Replay;
  out.advice.trajectory = adv_traj;
  std::ostringstream ms;
  for (std::size_t i = 0; i < out.m.size(); ++i) ms << (i ? "," : "") << out.m[i];
  inst.metadata["generator"] = "switching_lowerbound";
  inst.metadata["d"] = std::to_string(d);
  inst.metadata["subphase_ends"] = ms.str();
  inst.metadata["phase_one_end"] = std::to_string(end_j);
  inst.metadata["phase_two_case"] = out.phase_two_case;
  inst.metadata["drift_rounds"] = std::to_string(out.drift_rounds);
  inst.metadata["corner_exact"] = out.corner_exact ? "true" : "false";
  inst.metadata["truncated"] = out.truncated ? "true" : "false";
  validate_instance(inst);
  return out;
}

}  // namespace cfc
