#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfc/costs.hpp"

namespace cfc {

enum class Subclass { CFC, CBC, NCBC, alphaCFC };

const char* subclass_name(Subclass s);
Subclass parse_subclass(const std::string& s);

struct Instance {
  Vector x0;
  std::vector<CostFunction> costs;
  std::optional<std::vector<ConvexBody>> bodies;
  NormTag norm;
  Subclass subclass = Subclass::CFC;
  std::map<std::string, std::string> metadata;

  int T() const { return static_cast<int>(costs.size()); }
  int dim() const { return static_cast<int>(x0.size()); }
  const ConvexBody* body(int t) const { return bodies ? &(*bodies)[t - 1] : nullptr; }
  const CostFunction& cost(int t) const { return costs[t - 1]; }
};

// Shape, finiteness, per-cost validity, subclass-specific invariants.
void validate_instance(const Instance& inst);
// Nestedness on `points` sampled points per adjacent pair.
bool check_nested(const Instance& inst, int points, std::uint64_t seed);

// Coordinates and costs multiplied by lambda; every trajectory cost scales by lambda.
Instance rescale_instance(const Instance& inst, double lambda);

struct QuadraticGenParams {
  double eig_lo = 0.5;
  double eig_hi = 2.0;
  double center_lo = -1.0;
  double center_hi = 1.0;
  double offset_hi = 0.5;
  double jump_prob = 0.3;  // otherwise the center drifts locally
};

Instance gen_random_quadratic_cfc(int dim, int T, std::uint64_t seed, const QuadraticGenParams& params = {},
                                  NormTag norm = NormTag::l2());
Instance gen_alpha_polyhedral(int dim, int T, double alpha, std::uint64_t seed, NormTag norm = NormTag::l2(),
                              const QuadraticGenParams& params = {});

// Quadratics centred inside [-w, w]^d with that box served as K_t every round.
Instance gen_box_confined(int dim, int T, double half_width, std::uint64_t seed, const QuadraticGenParams& params = {},
                          NormTag norm = NormTag::l2());
// Quadratic centres ramp away from x0 by `step` per round, so any fixed
// advice accumulates cost quickly.
Instance gen_phase_forcing(int dim, int T, double step, std::uint64_t seed, const QuadraticGenParams& params = {},
                           NormTag norm = NormTag::l2());

enum class NestedShape { random, balls, boxes };
Instance gen_nested_bodies(int dim, int T, double r, std::uint64_t seed, NestedShape shape = NestedShape::random);

}  // namespace cfc
