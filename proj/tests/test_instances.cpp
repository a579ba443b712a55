#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cfc/adversary.hpp"
#include "cfc/algorithms.hpp"
#include "cfc/error.hpp"
#include "cfc/instance_io.hpp"
#include "cfc/rng.hpp"

using namespace cfc;

namespace {

Vector parse_csv_vector(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// Follows Rob every round, so it never sits on the advice.
class FollowRob : public OnlineAlgorithm {
 public:
  FollowRob(std::unique_ptr<OnlineAlgorithm> adv, std::unique_ptr<OnlineAlgorithm> rob)
      : adv_(std::move(adv)), rob_(std::move(rob)) {}
  void reset(const Vector& x0, NormTag norm) override {
    adv_->reset(x0, norm);
    rob_->reset(x0, norm);
  }
  Vector step(int t, const CostFunction& f, const ConvexBody* body) override {
    adv_->step(t, f, body);
    return rob_->step(t, f, body);
  }
  std::string name() const override { return "follow_rob"; }

 private:
  std::unique_ptr<OnlineAlgorithm> adv_, rob_;
};

}  // namespace

TEST(Generators, QuadraticDeterministic) {
  const Instance a = gen_random_quadratic_cfc(1, 2, 7);
  const Instance b = gen_random_quadratic_cfc(1, 2, 7);
  EXPECT_EQ(serialize_instance(a), serialize_instance(b));
  EXPECT_NE(serialize_instance(a), serialize_instance(gen_random_quadratic_cfc(1, 2, 8)));
}

TEST(Generators, QuadraticShape) {
  const Instance inst = gen_random_quadratic_cfc(8, 50, 1);
  EXPECT_EQ(inst.T(), 50);
  EXPECT_EQ(inst.dim(), 8);
  EXPECT_EQ(inst.subclass, Subclass::CFC);
  EXPECT_FALSE(inst.bodies.has_value());
  Rng rng(2);
  for (const auto& f : inst.costs) {
    EXPECT_EQ(cost_dim(f), 8);
    for (int s = 0; s < 10; ++s) EXPECT_GE(eval(f, 3.0 * rng.normal_vector(8)), 0.0);
  }
}

TEST(Generators, AlphaPolyhedralWitness) {
  const Instance inst = gen_alpha_polyhedral(1, 5, 0.5, 3);
  EXPECT_EQ(inst.subclass, Subclass::alphaCFC);
  for (const auto& f : inst.costs) EXPECT_GE(alpha_polyhedral_witness(f, 2000, 1), 0.5 - 1e-9);
}

TEST(Generators, AlphaPolyhedralGreedyFinite) {
  const Instance inst = gen_alpha_polyhedral(4, 20, 2.0, 4);
  auto g = greedy_minimizer();
  const Trajectory tr = run(*g, inst);
  EXPECT_TRUE(std::isfinite(tr.total()));
  EXPECT_EQ(tr.T(), 20);
}

TEST(Generators, BoxConfinedHasBoundedBodies) {
  const Instance inst = gen_box_confined(3, 10, 1.5, 5);
  ASSERT_TRUE(inst.bodies.has_value());
  EXPECT_EQ(inst.subclass, Subclass::CBC);
  for (int t = 1; t <= inst.T(); ++t) {
    const auto* box = std::get_if<Box>(inst.body(t));
    ASSERT_NE(box, nullptr);
    EXPECT_LE(box->upper.maxCoeff(), 1.5 + 1e-12);
    EXPECT_GE(box->lower.minCoeff(), -1.5 - 1e-12);
  }
}

TEST(Generators, NestedBodies) {
  for (std::uint64_t seed : {1, 2, 3, 4, 5, 6}) {
    const Instance inst = gen_nested_bodies(2, 10, 1.0, seed);
    EXPECT_EQ(inst.subclass, Subclass::NCBC);
    ASSERT_TRUE(inst.bodies.has_value());
    EXPECT_TRUE(check_nested(inst, 1000, seed));
    // independent check: inner sample points stay inside the outer body
    Rng rng(seed + 100);
    for (int t = 1; t < inst.T(); ++t) {
      for (int s = 0; s < 1000; ++s) {
        const Vector u = rng.uniform_vector(2, -1.0, 1.0);
        Vector p;
        if (const auto* b = std::get_if<Ball>(inst.body(t + 1))) {
          p = b->center + b->radius * std::pow(rng.uniform(), 0.5) * rng.unit_sphere(2);
        } else {
          const auto& bx = std::get<Box>(*inst.body(t + 1));
          p = bx.lower.array() + (bx.upper - bx.lower).array() * (u.array() + 1.0) / 2.0;
        }
        EXPECT_TRUE(body_contains(*inst.body(t), p, 1e-9));
      }
    }
    const Vector y = parse_csv_vector(inst.metadata.at("ball_center"));
    EXPECT_LE((inst.x0 - y).norm(), 1.0 + 1e-12);
    EXPECT_TRUE(body_nested_in(*inst.body(1), Ball{y, 1.0}, 1e-9, NormTag::l2()));
  }
  EXPECT_EQ(serialize_instance(gen_nested_bodies(2, 10, 1.0, 9)), serialize_instance(gen_nested_bodies(2, 10, 1.0, 9)));
}

TEST(Generators, Validation) {
  EXPECT_THROW(gen_nested_bodies(2, 10, -1.0, 1), InvalidArgument);
  EXPECT_THROW(gen_alpha_polyhedral(2, 5, 0.0, 1), InvalidArgument);
}

TEST(InstanceIo, RoundTripIsExact) {
  std::vector<Instance> all = {gen_random_quadratic_cfc(3, 5, 1), gen_alpha_polyhedral(2, 4, 0.7, 2, NormTag(1.5)),
                               gen_nested_bodies(3, 4, 2.0, 3), gen_box_confined(2, 3, 1.0, 4, {}, NormTag::linf())};
  for (const auto& inst : all) {
    const std::string text = serialize_instance(inst);
    const Instance back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text);
    Rng rng(5);
    for (int t = 1; t <= inst.T(); ++t) {
      const Vector x = rng.normal_vector(inst.dim());
      EXPECT_EQ(eval(inst.cost(t), x), eval(back.cost(t), x));
    }
    EXPECT_EQ(instance_hash(inst), instance_hash(back));
  }
}

TEST(InstanceIo, RejectsMalformed) {
  EXPECT_THROW(parse_instance("{"), InvalidArgument);
  EXPECT_THROW(parse_instance(R"({"version":1})"), InvalidArgument);
}

TEST(Hypercube, ArgmaxMatchesBruteForce) {
  Rng rng(21);
  for (int n : {1, 3, 6, 10}) {
    std::vector<Vector> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(rng.uniform_vector(n, -1.0, 1.0));
    bool exact = false;
    const Vector a = hypercube_argmax(pts, &exact);
    EXPECT_TRUE(exact);
    double best = -1.0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Vector x(n);
      for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u ? 1.0 : -1.0;
      double v = HUGE_VAL;
      for (const auto& p : pts) v = std::min(v, (x - p).norm());
      best = std::max(best, v);
    }
    EXPECT_NEAR(hypercube_objective(a, pts), best, 1e-12);
  }
}

TEST(Hypercube, LargeDimensionIsLocalOptimum) {
  Rng rng(22);
  const int n = 40;
  std::vector<Vector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(rng.uniform_vector(n, -1.0, 1.0));
  bool exact = true;
  Vector a = hypercube_argmax(pts, &exact);
  EXPECT_FALSE(exact);
  const double v = hypercube_objective(a, pts);
  for (int i = 0; i < n; ++i) {
    a[i] = -a[i];
    EXPECT_LE(hypercube_objective(a, pts), v + 1e-12);
    a[i] = -a[i];
  }
}

TEST(SwitchingLowerBound, AllPhaseOneCase) {
  SwitchingLowerBoundParams p;
  p.d = 16;
  const auto lb = gen_switching_lowerbound(
      p, [] { return project_greedy(); },
      [](std::unique_ptr<OnlineAlgorithm> a, std::unique_ptr<OnlineAlgorithm> r) -> std::unique_ptr<OnlineAlgorithm> {
        return std::make_unique<FollowRob>(std::move(a), std::move(r));
      });
  EXPECT_LE(lb.m.size(), 12u);
  EXPECT_EQ(lb.phase_one_end, 0);
  EXPECT_EQ(lb.phase_two_case, "none");
  EXPECT_TRUE(lb.corner_exact);
  EXPECT_FALSE(lb.truncated);
  // exhaustive corner check over the free coordinates (n = 4)
  const int n = 16 - 12;
  double best = -1.0;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1u ? 1.0 : -1.0;
    best = std::max(best, hypercube_objective(x, lb.rob_tails));
  }
  EXPECT_NEAR(hypercube_objective(lb.corner, lb.rob_tails), best, 1e-12);
  // advice: jump to the corner point once, then sit inside every slice
  auto adv = make_advice(lb.advice, lb.instance, std::nullopt);
  const Trajectory tr = run(*adv, lb.instance);
  EXPECT_NEAR(tr.total(), 4.0, 1e-12);
  // Rob decisions are feasible
  const Trajectory rob = evaluate_trajectory(lb.instance, lb.rob_decisions);
  EXPECT_LE(rob.max_infeasibility(), 1e-9);
}

TEST(SwitchingLowerBound, RejectsBadDimension) {
  SwitchingLowerBoundParams p;
  p.d = 15;
  auto rf = [] { return project_greedy(); };
  auto pf = [](std::unique_ptr<OnlineAlgorithm> a, std::unique_ptr<OnlineAlgorithm> r) -> std::unique_ptr<OnlineAlgorithm> {
    return std::make_unique<FollowRob>(std::move(a), std::move(r));
  };
  EXPECT_THROW(gen_switching_lowerbound(p, rf, pf), InvalidArgument);
  p.d = 4;  // 3*2 > 4
  EXPECT_THROW(gen_switching_lowerbound(p, rf, pf), InvalidArgument);
}
