#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Dense>

#include "cfc/body.hpp"
#include "cfc/geometry.hpp"

namespace cfc {

// (x-c)^T Q (x-c) + m, Q symmetric psd.
struct Quadratic {
  Eigen::MatrixXd Q;
  Vector center;
  double offset = 0.0;
};

// m + alpha ||x - x*||
struct NormPolyhedral {
  Vector center;
  double alpha = 1.0;
  double offset = 0.0;
  NormTag norm;
};

// (a/2) ||x - x*||^gamma, gamma >= 1
struct NormPower {
  Vector center;
  double coefficient = 1.0;
  double exponent = 1.0;
  NormTag norm;
};

// s * dist(x, K)
struct BodyDistance {
  ConvexBody body;
  double scale = 3.0;
  NormTag norm;
};

using CostFunction = std::variant<Quadratic, NormPolyhedral, NormPower, BodyDistance>;

int cost_dim(const CostFunction& f);
const char* cost_kind_name(const CostFunction& f);
void validate_cost(const CostFunction& f);

double eval(const CostFunction& f, const Vector& x);
// Throws InvalidArgument for BodyDistance, whose minimizer is a set.
Vector minimizer(const CostFunction& f);
// BodyDistance: projection of `reference`; other kinds ignore it.
Vector minimizer(const CostFunction& f, const Vector& reference);
Vector subgradient(const CostFunction& f, const Vector& x);

double alpha_polyhedral_witness(const CostFunction& f, long samples, std::uint64_t seed);

// lambda * f(x / lambda), expressed in the same family.
CostFunction rescale_cost(const CostFunction& f, double lambda);
ConvexBody rescale_body(const ConvexBody& body, double lambda);

}  // namespace cfc
