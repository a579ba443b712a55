#include <gtest/gtest.h>

#include <cmath>

#include "cfc/error.hpp"
#include "cfc/geometry.hpp"
#include "cfc/rng.hpp"

using cfc::NormTag;
using cfc::Vector;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Independent l^p norm for the oracle comparisons.
double naive_norm(const Vector& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TEST(Norms, Examples) {
  EXPECT_DOUBLE_EQ(cfc::norm(v2(3, 4), NormTag::l2()), 5.0);
  EXPECT_DOUBLE_EQ(cfc::norm(v2(3, 4), NormTag::l1()), 7.0);
  EXPECT_DOUBLE_EQ(cfc::norm(v2(3, -4), NormTag::linf()), 4.0);
}

TEST(Norms, MatchNaivePowerSums) {
  cfc::Rng rng(3);
  for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 7.5, HUGE_VAL}) {
    for (int d : {1, 2, 5, 16}) {
      const Vector x = rng.normal_vector(d) * 3.0;
      EXPECT_NEAR(cfc::norm(x, NormTag(p)), naive_norm(x, p), 1e-12 * (1 + naive_norm(x, p))) << p << " " << d;
    }
  }
}

TEST(Norms, ParseAcceptsInf) {
  EXPECT_TRUE(NormTag::parse("inf").is_inf());
  EXPECT_DOUBLE_EQ(NormTag::parse("1.5").p(), 1.5);
  EXPECT_THROW(NormTag::parse("0.5"), cfc::InvalidArgument);
  EXPECT_THROW(NormTag::parse("abc"), cfc::InvalidArgument);
}

TEST(Norms, GradientIsUnitDualAndNorming) {
  cfc::Rng rng(4);
  for (double p : {1.0, 1.5, 2.0, 3.0, HUGE_VAL}) {
    const NormTag t(p);
    const Vector v = rng.normal_vector(6);
    const Vector g = cfc::norm_gradient(v, t);
    EXPECT_NEAR(g.dot(v), cfc::norm(v, t), 1e-12);
    EXPECT_NEAR(cfc::norm(g, NormTag(t.dual())), 1.0, 1e-12);
  }
}

TEST(Retraction, Examples) {
  EXPECT_EQ(cfc::radial_retraction(v2(3, 4), 5, NormTag::l2()), v2(3, 4));
  const Vector r = cfc::radial_retraction(v2(3, 4), 1, NormTag::l2());
  EXPECT_NEAR(r[0], 0.6, 1e-15);
  EXPECT_NEAR(r[1], 0.8, 1e-15);
  for (double p : {1.0, 2.0, HUGE_VAL}) EXPECT_EQ(cfc::radial_retraction(v2(0, 0), 2, NormTag(p)), v2(0, 0));
  EXPECT_THROW(cfc::radial_retraction(v2(1, 1), -1, NormTag::l2()), cfc::InvalidArgument);
}

TEST(Constants, RectangularUpper) {
  EXPECT_NEAR(cfc::rectangular_constant_upper(2.0), std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(cfc::rectangular_constant_upper(1.0), 3.0);
  EXPECT_DOUBLE_EQ(cfc::rectangular_constant_upper(HUGE_VAL), 3.0);
  EXPECT_NEAR(cfc::rectangular_constant_upper(3.0), std::pow(1.0 + std::sqrt(3.0), 2.0 / 3.0), 1e-12);
  // p >= 2 closed form evaluated directly
  const double p = 4.0;
  const double expect = std::pow(1.0 + std::pow(std::pow(2.0, p - 1) - 1.0, 1.0 / (p - 1)), (p - 1) / p);
  EXPECT_NEAR(cfc::rectangular_constant_upper(4.0), expect, 1e-12);
  for (double q : {1.0001, 1.01, 1.1, 1.5, 1.9, 2.5, 6.0, 50.0}) {
    const double mu = cfc::rectangular_constant_upper(q);
    EXPECT_GE(mu, std::sqrt(2.0) - 1e-12) << q;
    EXPECT_LE(mu, 3.0 + 1e-12) << q;
  }
  EXPECT_THROW(cfc::rectangular_constant_upper(0.9), cfc::InvalidArgument);
}

TEST(Constants, LipschitzUpper) {
  EXPECT_DOUBLE_EQ(cfc::lipschitz_constant_upper(2.0), 1.0);
  EXPECT_DOUBLE_EQ(cfc::lipschitz_constant_upper(1.0), 2.0);
  EXPECT_DOUBLE_EQ(cfc::lipschitz_constant_upper(4.0), std::min(2.0, cfc::rectangular_constant_upper(4.0)));
  for (double p : {1.0, 1.5, 2.0, 3.0, HUGE_VAL}) {
    const auto sc = cfc::space_constants(NormTag(p));
    EXPECT_LE(sc.k_upper, sc.mu_upper);
    EXPECT_GE(sc.k_upper, 1.0);
    EXPECT_LE(sc.k_upper, 2.0);
  }
}

TEST(Constants, EmpiricalLipschitz) {
  const double l2 = cfc::estimate_lipschitz_empirical(NormTag::l2(), 4, 100000, 5);
  EXPECT_GE(l2, 1.0 - 1e-6);
  EXPECT_LE(l2, 1.0 + 1e-9);
  const double l1 = cfc::estimate_lipschitz_empirical(NormTag::l1(), 2, 100000, 5);
  EXPECT_GT(l1, 1.0);
  EXPECT_LE(l1, 2.0 + 1e-9);
  EXPECT_EQ(cfc::estimate_lipschitz_empirical(NormTag::l1(), 2, 1000, 9),
            cfc::estimate_lipschitz_empirical(NormTag::l1(), 2, 1000, 9));
  EXPECT_NO_THROW(cfc::estimate_lipschitz_empirical(NormTag::l2(), 1, 1, 1));
}

TEST(BirkhoffJames, Examples) {
  EXPECT_TRUE(cfc::bj_orthogonal(v2(1, 0), v2(0, 1), NormTag::l2()));
  EXPECT_FALSE(cfc::bj_orthogonal(v2(1, 0), v2(1, 0), NormTag::l2()));
  EXPECT_TRUE(cfc::bj_orthogonal(v2(1, 1), v2(1, -1), NormTag::l1()));
  EXPECT_THROW(cfc::bj_orthogonal(v2(1, 1), v2(1, -1), NormTag::l1(), 2), cfc::InvalidArgument);
}

TEST(Projection, Examples) {
  const auto l2 = NormTag::l2();
  EXPECT_TRUE(cfc::project_body(v2(2, 0), cfc::Ball{v2(0, 0), 1.0}, l2).isApprox(v2(1, 0)));
  EXPECT_EQ(cfc::project_body(v2(3, 5), cfc::Box{v2(0, 0), v2(1, 1)}, l2), v2(1, 1));
  EXPECT_TRUE(cfc::project_body(v2(0, 0), cfc::Hyperplane{v2(1, 0), 1.0}, l2).isApprox(v2(1, 0)));
  EXPECT_EQ(cfc::project_body(v2(7, 7), cfc::Singleton{v2(1, 2)}, l2), v2(1, 2));
}

TEST(Projection, NearestAmongSamplesForAllNorms) {
  cfc::Rng rng(6);
  for (double p : {1.0, 1.5, 2.0, 3.0, HUGE_VAL}) {
    const NormTag t(p);
    const cfc::Box box{v2(-1, -0.5), v2(1, 0.5)};
    const cfc::Hyperplane h{v2(1, 2), 0.5};
    for (int s = 0; s < 50; ++s) {
      const Vector x = 3.0 * rng.normal_vector(2);
      const Vector pb = cfc::project_body(x, box, t);
      const Vector ph = cfc::project_body(x, h, t);
      EXPECT_NEAR(h.normal.dot(ph), h.offset, 1e-12);
      // oracle: dense sampling of each body
      double best_b = HUGE_VAL, best_h = HUGE_VAL;
      for (int i = 0; i <= 400; ++i) {
        for (int j = 0; j <= 40; ++j) {
          best_b = std::min(best_b, cfc::distance(x, v2(-1 + 2.0 * i / 400, -0.5 + 1.0 * j / 40), t));
        }
        const double u = -10 + 20.0 * i / 400;  // points on the line: (0.5 - 2u, u)
        best_h = std::min(best_h, cfc::distance(x, v2(0.5 - 2 * u, u), t));
      }
      EXPECT_LE(cfc::distance(x, pb, t), best_b + 1e-12);
      EXPECT_LE(cfc::distance(x, ph, t), best_h + 1e-12);
    }
  }
}

TEST(Projection, EuclideanHyperplaneIsOrthogonal) {
  cfc::Rng rng(7);
  const Vector n = rng.normal_vector(5);
  const cfc::Hyperplane h{n, 0.3};
  const Vector x = rng.normal_vector(5);
  const Vector p = cfc::project_body(x, h, NormTag::l2());
  const Vector expect = x - (n.dot(x) - 0.3) / n.squaredNorm() * n;
  EXPECT_TRUE(p.isApprox(expect, 1e-12));
}

TEST(Support, Examples) {
  const Vector c = v2(1, -1);
  const Vector u = v2(3, 4);
  const Vector s = cfc::support_point(cfc::Ball{c, 2.0}, u);
  EXPECT_TRUE(s.isApprox(c + 2.0 * u / 5.0));
  EXPECT_EQ(cfc::support_point(cfc::Box{v2(0, 0), v2(1, 2)}, v2(-1, 1)), v2(0, 2));
  EXPECT_EQ(cfc::support_point(cfc::Singleton{c}, u), c);
  EXPECT_THROW(cfc::support_point(cfc::Hyperplane{v2(1, 0), 0.0}, u), cfc::UnsupportedOracle);
}

TEST(Bodies, ContainsAndNested) {
  EXPECT_TRUE(cfc::body_contains(cfc::Ball{v2(0, 0), 1.0}, v2(1, 0), 0.0));
  EXPECT_TRUE(cfc::body_contains(cfc::Box{v2(0, 0), v2(1, 1)}, v2(1.000001, 0.5), 1e-5));
  EXPECT_FALSE(cfc::body_contains(cfc::Singleton{v2(0, 0)}, v2(0, 1e-9), 0.0));
  const auto l2 = NormTag::l2();
  EXPECT_TRUE(cfc::body_nested_in(cfc::Ball{v2(0, 0), 0.5}, cfc::Ball{v2(0.1, 0), 1.0}, 1e-9, l2));
  EXPECT_FALSE(cfc::body_nested_in(cfc::Ball{v2(0, 0), 0.5}, cfc::Ball{v2(0.6, 0), 1.0}, 1e-9, l2));
  EXPECT_TRUE(cfc::body_nested_in(cfc::Box{v2(0, 0), v2(0.5, 0.5)}, cfc::Ball{v2(0, 0), 1.0}, 1e-9, l2));
  EXPECT_FALSE(cfc::body_nested_in(cfc::Box{v2(0, 0), v2(1, 1)}, cfc::Ball{v2(0, 0), 1.0}, 1e-9, l2));
}

TEST(Bodies, Validation) {
  EXPECT_THROW(cfc::validate_body(cfc::Ball{v2(0, 0), -1.0}), cfc::InvalidArgument);
  EXPECT_THROW(cfc::validate_body(cfc::Box{v2(1, 0), v2(0, 1)}), cfc::InvalidArgument);
  cfc::AffineSliceOfBox s{{0, 0}, {1.0, 2.0}, v2(-1, -1), v2(1, 1)};
  EXPECT_THROW(cfc::validate_body(s), cfc::InvalidArgument);
  EXPECT_THROW(cfc::validate_body(cfc::Hyperplane{v2(0, 0), 1.0}), cfc::InvalidArgument);
}
