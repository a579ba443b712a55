#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "cfc/body.hpp"

namespace cfc {

// An l^p norm, p in [1, inf]. Infinity is stored as +inf.
class NormTag {
 public:
  NormTag() = default;
  explicit NormTag(double p);

  static NormTag l1() { return NormTag(1.0); }
  static NormTag l2() { return NormTag(2.0); }
  static NormTag linf() { return NormTag(std::numeric_limits<double>::infinity()); }
  static NormTag parse(const std::string& text);  // "2", "1.5", "inf"

  double p() const { return p_; }
  bool is_inf() const { return p_ == std::numeric_limits<double>::infinity(); }
  bool is_l2() const { return p_ == 2.0; }
  // Hoelder conjugate q with 1/p + 1/q = 1.
  double dual() const;
  std::string str() const;

  bool operator==(const NormTag& o) const { return p_ == o.p_; }

 private:
  double p_ = 2.0;
};

struct SpaceConstants {
  double mu_upper;
  double k_upper;
};

double norm(const Vector& x, NormTag tag);
double distance(const Vector& a, const Vector& b, NormTag tag);

// A unit-dual-norm functional g with <g, v> = ||v||; zero at v = 0.
Vector norm_gradient(const Vector& v, NormTag tag);

Vector radial_retraction(const Vector& x, double r, NormTag tag);

double rectangular_constant_upper(double p);
double lipschitz_constant_upper(double p);
SpaceConstants space_constants(NormTag tag);

double estimate_lipschitz_empirical(NormTag tag, int dim, long samples, std::uint64_t seed);

bool bj_orthogonal(const Vector& x, const Vector& y, NormTag tag, int lambda_grid = 2001);

Vector project_body(const Vector& x, const ConvexBody& body, NormTag tag);
// argmax_{x in body} <u, x>; Ball support uses the ball's own norm `tag`.
Vector support_point(const ConvexBody& body, const Vector& u, NormTag tag = NormTag::l2());
bool body_contains(const ConvexBody& body, const Vector& x, double tol,
                   NormTag tag = NormTag::l2());
// Exact for ball/box/singleton pairs, sampled otherwise.
bool body_nested_in(const ConvexBody& inner, const ConvexBody& outer, double tol, NormTag tag);

}  // namespace cfc
