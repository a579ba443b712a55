#include <gtest/gtest.h>

#include <cmath>

#include "cfc/costs.hpp"
#include "cfc/error.hpp"
#include "cfc/rng.hpp"

using namespace cfc;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

std::vector<CostFunction> sample_costs(int d) {
  Rng rng(11);
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(d, d);
  std::vector<CostFunction> out;
  out.push_back(Quadratic{A.transpose() * A, rng.normal_vector(d), 0.5});
  for (double p : {1.0, 1.5, 2.0, HUGE_VAL}) {
    out.push_back(NormPolyhedral{rng.normal_vector(d), 1.5, 0.25, NormTag(p)});
    out.push_back(NormPower{rng.normal_vector(d), 2.0, 1.7, NormTag(p)});
    out.push_back(BodyDistance{Ball{rng.normal_vector(d), 0.7}, 3.0, NormTag(p)});
    out.push_back(BodyDistance{Box{-Vector::Ones(d), Vector::Ones(d)}, 3.0, NormTag(p)});
  }
  return out;
}

}  // namespace

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval(Quadratic{Eigen::MatrixXd::Identity(2, 2), v2(1, 1), 0.0}, v2(1, 1)), 0.0);
  EXPECT_DOUBLE_EQ(eval(NormPolyhedral{v2(0, 0), 2.0, 0.0, NormTag::l2()}, v2(3, 4)), 10.0);
  EXPECT_DOUBLE_EQ(eval(BodyDistance{Ball{v2(0, 0), 1.0}, 3.0, NormTag::l2()}, v2(2, 0)), 3.0);
  EXPECT_DOUBLE_EQ(eval(NormPower{v2(0, 0), 2.0, 2.0, NormTag::l1()}, v2(1, -2)), 9.0);
}

TEST(Eval, DimensionMismatchThrows) {
  EXPECT_THROW(eval(NormPolyhedral{v2(0, 0), 1.0, 0.0, NormTag::l2()}, Vector::Zero(3)), DimensionMismatch);
}

TEST(Validate, RejectsBadParameters) {
  EXPECT_THROW(validate_cost(NormPolyhedral{v2(0, 0), -1.0, 0.0, NormTag::l2()}), InvalidArgument);
  EXPECT_THROW(validate_cost(NormPower{v2(0, 0), 1.0, 0.5, NormTag::l2()}), InvalidArgument);
  Eigen::MatrixXd Q(2, 2);
  Q << 1, 0, 0, -1;
  EXPECT_THROW(validate_cost(Quadratic{Q, v2(0, 0), 0.0}), InvalidArgument);
  Eigen::MatrixXd Qa(2, 2);
  Qa << 1, 1, 0, 1;
  EXPECT_THROW(validate_cost(Quadratic{Qa, v2(0, 0), 0.0}), InvalidArgument);
}

TEST(Minimizer, Examples) {
  EXPECT_EQ(minimizer(Quadratic{Eigen::MatrixXd::Identity(2, 2), v2(2, 3), 5.0}), v2(2, 3));
  EXPECT_EQ(minimizer(NormPolyhedral{v2(1, 0), 3.0, 1.0, NormTag::l1()}), v2(1, 0));
  EXPECT_EQ(minimizer(NormPower{v2(0, 0), 2.0, 3.0, NormTag::linf()}), v2(0, 0));
  const BodyDistance bd{Ball{v2(0, 0), 1.0}, 3.0, NormTag::l2()};
  EXPECT_THROW(minimizer(CostFunction(bd)), InvalidArgument);
  EXPECT_TRUE(minimizer(CostFunction(bd), v2(0, 5)).isApprox(v2(0, 1)));
}

TEST(Subgradient, Examples) {
  Eigen::MatrixXd Q(2, 2);
  Q << 2, 1, 1, 3;
  const Vector c = v2(1, -1), x = v2(0.5, 2);
  EXPECT_TRUE(subgradient(Quadratic{Q, c, 1.0}, x).isApprox(2.0 * Q * (x - c)));
  EXPECT_EQ(subgradient(NormPolyhedral{c, 2.0, 0.0, NormTag::l2()}, c), v2(0, 0));
  const Vector g = subgradient(NormPolyhedral{v2(0, 0), 2.0, 0.0, NormTag::l2()}, v2(3, 4));
  EXPECT_TRUE(g.isApprox(2.0 * v2(3, 4) / 5.0));
}

TEST(Subgradient, SatisfiesSubgradientInequality) {
  Rng rng(12);
  for (int d : {1, 3}) {
    for (const auto& f : sample_costs(d)) {
      for (int s = 0; s < 40; ++s) {
        const Vector x = 2.0 * rng.normal_vector(d);
        const Vector y = 2.0 * rng.normal_vector(d);
        const Vector g = subgradient(f, x);
        EXPECT_GE(eval(f, y), eval(f, x) + g.dot(y - x) - 1e-9 * (1 + std::fabs(eval(f, y)))) << cost_kind_name(f);
      }
    }
  }
}

TEST(Subgradient, MatchesFiniteDifferencesAtSmoothPoints) {
  Rng rng(13);
  for (const auto& f : sample_costs(3)) {
    const Vector x = 3.0 + rng.normal_vector(3).array();  // away from centers and kinks
    const Vector g = subgradient(f, x);
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
      Vector e = Vector::Zero(3);
      e[i] = h;
      const double fd = (eval(f, x + e) - eval(f, x - e)) / (2 * h);
      // the l1 / linf kinks can sit at x; only compare where the value is differentiable
      const double right = (eval(f, x + e) - eval(f, x)) / h;
      const double left = (eval(f, x) - eval(f, x - e)) / h;
      if (std::fabs(right - left) < 1e-4) EXPECT_NEAR(g[i], fd, 1e-4 * (1 + std::fabs(fd))) << cost_kind_name(f);
    }
  }
}

TEST(Costs, ConvexAlongSegments) {
  Rng rng(14);
  for (const auto& f : sample_costs(2)) {
    for (int s = 0; s < 100; ++s) {
      const Vector x = 3.0 * rng.normal_vector(2), y = 3.0 * rng.normal_vector(2);
      const double l = rng.uniform();
      const double mid = eval(f, l * x + (1 - l) * y);
      EXPECT_LE(mid, l * eval(f, x) + (1 - l) * eval(f, y) + 1e-9) << cost_kind_name(f);
      EXPECT_GE(eval(f, x), 0.0);
    }
  }
}

TEST(Witness, Examples) {
  EXPECT_GE(alpha_polyhedral_witness(NormPolyhedral{v2(0, 0), 2.0, 0.0, NormTag::l2()}, 10000, 1), 2.0 - 1e-9);
  EXPECT_LT(alpha_polyhedral_witness(Quadratic{Eigen::MatrixXd::Identity(2, 2), v2(1, 1), 0.0}, 10000, 1), 0.05);
  EXPECT_GE(alpha_polyhedral_witness(NormPower{v2(0, 0), 2.0, 1.0, NormTag::l1()}, 10000, 1), 1.0 - 1e-9);
  EXPECT_EQ(alpha_polyhedral_witness(NormPolyhedral{v2(0, 0), 2.0, 0.0, NormTag::l2()}, 500, 4),
            alpha_polyhedral_witness(NormPolyhedral{v2(0, 0), 2.0, 0.0, NormTag::l2()}, 500, 4));
}

TEST(Rescale, MatchesDefinition) {
  Rng rng(15);
  for (const auto& f : sample_costs(2)) {
    for (double lambda : {0.5, 2.0, 7.0}) {
      const CostFunction g = rescale_cost(f, lambda);
      for (int s = 0; s < 20; ++s) {
        const Vector x = 3.0 * rng.normal_vector(2);
        const double expect = lambda * eval(f, x / lambda);
        EXPECT_NEAR(eval(g, x), expect, 1e-9 * (1 + std::fabs(expect))) << cost_kind_name(f);
      }
    }
  }
}

TEST(BodyDistance, ProjectionRepairNeverIncreasesCost) {
  // moving a point to its projection cannot increase s*dist(., K)
  Rng rng(16);
  for (double p : {1.0, 2.0, HUGE_VAL}) {
    const NormTag t(p);
    const BodyDistance f{Box{v2(-1, -1), v2(1, 1)}, 3.0, t};
    for (int s = 0; s < 50; ++s) {
      const Vector x = 4.0 * rng.normal_vector(2);
      const Vector px = project_body(x, f.body, t);
      EXPECT_LE(eval(f, px), eval(f, x) + 1e-12);
      EXPECT_NEAR(eval(f, px), 0.0, 1e-12);
    }
  }
}
