#include <gtest/gtest.h>

#include <cmath>

#include "cfc/algorithms.hpp"
#include "cfc/error.hpp"
#include "cfc/instance_io.hpp"
#include "cfc/offline.hpp"

using namespace cfc;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Instance fixture() { return load_instance(CFC_TEST_DATA "/fixture_1d.json"); }

// min_z (z-c)^2 + |z - x0| in closed form
double one_round_quadratic(double x0, double c) {
  if (std::fabs(c - x0) <= 0.5) return (x0 - c) * (x0 - c);
  const double z = c - (c > x0 ? 0.5 : -0.5);
  return (z - c) * (z - c) + std::fabs(z - x0);
}

}  // namespace

TEST(GridDp, FixtureClosedForm) {
  const Instance inst = fixture();
  const OptResult r = opt_grid_dp(inst, GridBox{v1(-2), v1(2)}, 4001);
  EXPECT_EQ(r.method, "grid_dp");
  EXPECT_NEAR(r.cost, 0.875, r.gap_estimate);
  EXPECT_GE(r.cost, 0.875 - 1e-12);
  EXPECT_NEAR(r.trajectory[0][0], 0.75, 1e-3);
  EXPECT_NEAR(r.trajectory[1][0], 0.75, 1e-3);
}

TEST(GridDp, SingleRoundQuadratic) {
  for (double c : {-2.0, -0.3, 0.2, 0.9, 1.7}) {
    Instance inst;
    inst.x0 = v1(0.1);
    inst.norm = NormTag::l1();
    inst.costs.emplace_back(Quadratic{Eigen::MatrixXd::Identity(1, 1), v1(c), 0.0});
    const OptResult r = opt_grid_dp(inst, std::nullopt, 20001);
    const double exact = one_round_quadratic(0.1, c);
    EXPECT_LE(r.lower_bound(), exact + 1e-12);
    EXPECT_GE(r.cost, exact - 1e-12);
    EXPECT_NEAR(r.cost, exact, 1e-3);
  }
}

TEST(GridDp, PolyhedralAtStartCostsOffset) {
  Instance inst;
  inst.x0 = Vector::Constant(2, 0.3);
  inst.norm = NormTag::l2();
  inst.costs.emplace_back(NormPolyhedral{inst.x0, 1.5, 0.7, inst.norm});
  EXPECT_NEAR(opt_grid_dp(inst, std::nullopt, 51).cost, 0.7, 1e-12);
  Instance one = inst;
  one.x0 = v1(0.3);
  one.costs = {NormPolyhedral{one.x0, 1.5, 0.7, one.norm}};
  EXPECT_NEAR(opt_grid_dp(one, std::nullopt, 101).cost, 0.7, 1e-12);
  EXPECT_NEAR(opt_first_order(one, 500, 1).cost, 0.7, 1e-9);
}

TEST(GridDp, NoWorseThanSimpleBaselines) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (int d : {1, 2}) {
      for (double p : {1.0, 2.0, HUGE_VAL}) {
        const Instance inst = gen_random_quadratic_cfc(d, 8, seed, {}, NormTag(p));
        const OptResult r = opt_grid_dp(inst, std::nullopt, d == 1 ? 2001 : 61);
        auto sp = stay_put();
        auto g = greedy_minimizer();
        EXPECT_LE(r.lower_bound(), run(*sp, inst).total());
        EXPECT_LE(r.lower_bound(), run(*g, inst).total());
        EXPECT_NEAR(evaluate_trajectory(inst, r.trajectory).total(), r.cost, 1e-12 * (1 + r.cost));
      }
    }
  }
}

TEST(GridDp, NestedRefinementIsMonotone) {
  const Instance inst = gen_random_quadratic_cfc(1, 10, 3);
  const GridBox box = default_grid_box(inst);
  double prev = HUGE_VAL;
  for (int n : {51, 101, 201, 401, 801}) {
    const double c = opt_grid_dp(inst, box, n).cost;
    EXPECT_LE(c, prev + 1e-12);
    prev = c;
  }
  const Instance inst2 = gen_random_quadratic_cfc(2, 5, 3);
  const GridBox box2 = default_grid_box(inst2);
  EXPECT_LE(opt_grid_dp(inst2, box2, 41).cost, opt_grid_dp(inst2, box2, 21).cost + 1e-12);
}

TEST(GridDp, Limits) {
  const Instance inst = gen_random_quadratic_cfc(3, 4, 1);
  EXPECT_THROW(opt_grid_dp(inst, std::nullopt, 11), InvalidArgument);
  EXPECT_THROW(opt_grid_dp(fixture(), std::nullopt, 2), InvalidArgument);
  const Instance two = gen_random_quadratic_cfc(2, 3, 1);
  const OptResult coarse = opt_grid_dp(two, std::nullopt, 3);
  EXPECT_GT(coarse.gap_estimate, 1.0);
}

TEST(FirstOrder, AgreesWithDp) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance i1 = gen_random_quadratic_cfc(1, 20, seed);
    const OptResult g1 = opt_grid_dp(i1, std::nullopt, 20001);
    const OptResult f1 = opt_first_order(i1, 1500, seed);
    EXPECT_NEAR(f1.cost, g1.cost, 0.01 * g1.cost) << seed;
    const Instance a1 = gen_alpha_polyhedral(1, 20, 1.0, seed);
    const OptResult ga = opt_grid_dp(a1, std::nullopt, 20001);
    const OptResult fa = opt_first_order(a1, 1500, seed);
    EXPECT_NEAR(fa.cost, ga.cost, 0.01 * ga.cost) << seed;
    const Instance i2 = gen_random_quadratic_cfc(2, 10, seed);
    const OptResult g2 = opt_grid_dp(i2, std::nullopt, 101);
    const OptResult f2 = opt_first_order(i2, 1500, seed);
    EXPECT_NEAR(f2.cost, g2.cost, 0.03 * g2.cost) << seed;
  }
}

TEST(FirstOrder, FixtureAndDeterminism) {
  const OptResult a = opt_first_order(fixture(), 2000, 4);
  EXPECT_NEAR(a.cost, 0.875, 1e-4);
  EXPECT_EQ(a.method, "first_order");
  const OptResult b = opt_first_order(fixture(), 2000, 4);
  EXPECT_EQ(a.cost, b.cost);
}

TEST(Ncbc, FeasibleAndBelowBaselines) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = gen_nested_bodies(3, 15, 1.0, seed);
    const OptResult r = opt_for_ncbc(inst, 800, seed);
    const Trajectory tr = evaluate_trajectory(inst, r.trajectory);
    EXPECT_LE(tr.max_infeasibility(), 1e-9);
    auto pg = project_greedy();
    EXPECT_LE(r.cost, run(*pg, inst).total() + 1e-9);
  }
}

TEST(Lipschitz, BoxBound) {
  const GridBox box{v1(-1), v1(3)};
  EXPECT_NEAR(lipschitz_on_box(Quadratic{Eigen::MatrixXd::Identity(1, 1), v1(0), 0}, box, NormTag::l2()), 6.0, 1e-12);
  EXPECT_NEAR(lipschitz_on_box(NormPolyhedral{v1(0), 2.5, 0, NormTag::l2()}, box, NormTag::l2()), 2.5, 1e-12);
}
