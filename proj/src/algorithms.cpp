#include "cfc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

double Trajectory::partial(int t1, int t2) const {
  if (t2 < t1) return 0.0;
  if (t1 < 1 || t2 > T()) throw InvalidArgument("Trajectory::partial: range out of bounds");
  return cumulative[t2 - 1] - (t1 > 1 ? cumulative[t1 - 2] : 0.0);
}

double Trajectory::max_infeasibility() const {
  double m = 0.0;
  for (double v : infeasibility) m = std::max(m, v);
  return m;
}

namespace {

void record(Trajectory& tr, const Instance& inst, int t, Vector x) {
  if (x.size() != inst.dim()) throw DimensionMismatch("decision has wrong dimension");
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "non-finite decision at round " << t;
    throw RuntimeFailure(os.str());
  }
  const double hit = eval(inst.cost(t), x);
  const double move = distance(x, tr.at(t - 1), inst.norm);
  tr.hitting.push_back(hit);
  tr.movement.push_back(move);
  tr.cumulative.push_back((tr.cumulative.empty() ? 0.0 : tr.cumulative.back()) + hit + move);
  if (const ConvexBody* k = inst.body(t))
    tr.infeasibility.push_back(distance(x, project_body(x, *k, inst.norm), inst.norm));
  tr.decisions.push_back(std::move(x));
}

class StayPut final : public OnlineAlgorithm {
 public:
  void reset(const Vector& x0, NormTag) override { x0_ = x0; }
  Vector step(int, const CostFunction&, const ConvexBody*) override { return x0_; }
  std::string name() const override { return "stay_put"; }

 private:
  Vector x0_;
};

class Greedy final : public OnlineAlgorithm {
 public:
  void reset(const Vector&, NormTag) override {}
  Vector step(int, const CostFunction& f, const ConvexBody*) override {
    if (std::holds_alternative<BodyDistance>(f))
      throw UnsupportedOracle("greedy: body_distance costs have no unique minimizer (use project_greedy)");
    return minimizer(f);
  }
  std::string name() const override { return "greedy"; }
};

class ProjectGreedy final : public OnlineAlgorithm {
 public:
  void reset(const Vector& x0, NormTag norm) override {
    x_ = x0;
    norm_ = norm;
  }
  Vector step(int, const CostFunction&, const ConvexBody* body) override {
    if (body == nullptr) throw InvalidArgument("project_greedy: instance has no bodies");
    x_ = project_body(x_, *body, norm_);
    return x_;
  }
  std::string name() const override { return "project_greedy"; }

 private:
  Vector x_;
  NormTag norm_;
};

// Support points of balls and boxes are affine in a few direction
// statistics, so the sample average is kept as those statistics.
class SteinerMc final : public OnlineAlgorithm {
 public:
  SteinerMc(long samples, std::uint64_t seed) : samples_(samples), seed_(seed) {
    if (samples < 1) throw InvalidArgument("steiner_point_mc: samples must be >= 1");
  }

  void reset(const Vector& x0, NormTag norm) override {
    if (!norm.is_l2()) throw UnsupportedOracle("steiner_point_mc: requires the l2 norm");
    const int d = static_cast<int>(x0.size());
    Rng rng(seed_);
    mean_u_ = Vector::Zero(d);
    frac_pos_ = Vector::Zero(d);
    frac_neg_ = Vector::Zero(d);
    for (long s = 0; s < samples_; ++s) {
      const Vector u = rng.unit_sphere(d);
      mean_u_ += u;
      for (int i = 0; i < d; ++i) {
        if (u[i] > 0.0) frac_pos_[i] += 1.0;
        else if (u[i] < 0.0) frac_neg_[i] += 1.0;
      }
    }
    const double n = static_cast<double>(samples_);
    mean_u_ /= n;
    frac_pos_ /= n;
    frac_neg_ /= n;
  }

  Vector step(int, const CostFunction&, const ConvexBody* body) override {
    if (body == nullptr) throw InvalidArgument("steiner_point_mc: instance has no bodies");
    Vector s = std::visit(
        [&](const auto& b) -> Vector {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return b.center + b.radius * mean_u_;
          } else if constexpr (std::is_same_v<T, Box>) {
            return box_average(b.lower, b.upper);
          } else if constexpr (std::is_same_v<T, AffineSliceOfBox>) {
            Vector lo = b.lower, hi = b.upper;
            for (std::size_t k = 0; k < b.fixed_index.size(); ++k) {
              lo[b.fixed_index[k]] = b.fixed_value[k];
              hi[b.fixed_index[k]] = b.fixed_value[k];
            }
            return box_average(lo, hi);
          } else if constexpr (std::is_same_v<T, Hyperplane>) {
            throw UnsupportedOracle("steiner_point_mc: hyperplane has no support points");
          } else {
            return b.point;
          }
        },
        *body);
    return project_body(s, *body, NormTag::l2());
  }

  std::string name() const override { return "steiner"; }

 private:
  Vector box_average(const Vector& lo, const Vector& hi) const {
    Vector s(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
        if (lo[i] == hi[i]) {
          s[i] = lo[i];
          continue;
        }
        throw UnsupportedOracle("steiner_point_mc: unbounded body");
      }
      const double zero = 1.0 - frac_pos_[i] - frac_neg_[i];
      s[i] = frac_pos_[i] * hi[i] + frac_neg_[i] * lo[i] + zero * 0.5 * (lo[i] + hi[i]);
    }
    return s;
  }

  long samples_;
  std::uint64_t seed_;
  Vector mean_u_, frac_pos_, frac_neg_;
};

class Replay final : public OnlineAlgorithm {
 public:
  Replay(std::vector<Vector> xs, bool project, std::string label)
      : xs_(std::move(xs)), project_(project), label_(std::move(label)) {}
  void reset(const Vector&, NormTag norm) override { norm_ = norm; }
  Vector step(int t, const CostFunction&, const ConvexBody* body) override {
    if (t < 1 || t > static_cast<int>(xs_.size())) throw InvalidArgument("replay: trajectory shorter than instance");
    if (project_ && body != nullptr) return project_body(xs_[t - 1], *body, norm_);
    return xs_[t - 1];
  }
  std::string name() const override { return label_; }

 private:
  std::vector<Vector> xs_;
  bool project_;
  std::string label_;
  NormTag norm_;
};

}  // namespace

Trajectory evaluate_trajectory(const Instance& inst, const std::vector<Vector>& decisions) {
  if (static_cast<int>(decisions.size()) != inst.T()) throw InvalidArgument("evaluate_trajectory: length != T");
  Trajectory tr;
  tr.x0 = inst.x0;
  for (int t = 1; t <= inst.T(); ++t) record(tr, inst, t, decisions[t - 1]);
  return tr;
}

Trajectory run(OnlineAlgorithm& alg, const Instance& inst) {
  Trajectory tr;
  tr.x0 = inst.x0;
  alg.reset(inst.x0, inst.norm);
  for (int t = 1; t <= inst.T(); ++t) {
    Vector x = alg.step(t, inst.cost(t), inst.body(t));
    if (!x.allFinite()) {
      std::ostringstream os;
      os << alg.name() << " returned a non-finite decision at round " << t;
      throw RuntimeFailure(os.str());
    }
    record(tr, inst, t, std::move(x));
  }
  return tr;
}

std::unique_ptr<OnlineAlgorithm> stay_put() { return std::make_unique<StayPut>(); }
std::unique_ptr<OnlineAlgorithm> greedy_minimizer() { return std::make_unique<Greedy>(); }
std::unique_ptr<OnlineAlgorithm> project_greedy() { return std::make_unique<ProjectGreedy>(); }
std::unique_ptr<OnlineAlgorithm> steiner_point_mc(long samples, std::uint64_t seed) {
  return std::make_unique<SteinerMc>(samples, seed);
}
std::unique_ptr<OnlineAlgorithm> replay(std::vector<Vector> decisions, bool project, std::string label) {
  return std::make_unique<Replay>(std::move(decisions), project, std::move(label));
}

std::unique_ptr<OnlineAlgorithm> make_baseline(const std::string& name, long steiner_samples, std::uint64_t seed) {
  if (name == "stay_put") return stay_put();
  if (name == "greedy") return greedy_minimizer();
  if (name == "project_greedy") return project_greedy();
  if (name == "steiner") return steiner_point_mc(steiner_samples, seed);
  throw InvalidArgument("unknown robust algorithm '" + name + "'");
}

}  // namespace cfc
