#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cfc {

using Vector = Eigen::VectorXd;

// Balls are measured in the ambient norm of whatever uses them.
struct Ball {
  Vector center;
  double radius = 0.0;
};

struct Box {
  Vector lower;
  Vector upper;
};

// Coordinates in `fixed_index` are pinned to `fixed_value`; the remaining
// coordinates range over [lower, upper] (entries may be infinite).
struct AffineSliceOfBox {
  std::vector<int> fixed_index;
  std::vector<double> fixed_value;
  Vector lower;
  Vector upper;
};

// { x : <normal, x> = offset }
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
};

struct Singleton {
  Vector point;
};

using ConvexBody = std::variant<Ball, Box, AffineSliceOfBox, Hyperplane, Singleton>;

int body_dim(const ConvexBody& body);
const char* body_kind_name(const ConvexBody& body);
// Throws InvalidArgument on empty or inconsistent descriptors.
void validate_body(const ConvexBody& body);

}  // namespace cfc
