#include "cfc/costs.hpp"

#include <algorithm>
#include <cmath>

#include "cfc/error.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const CostFunction& f, const Vector& x, const char* what) {
  if (cost_dim(f) != x.size()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

}  // namespace

int cost_dim(const CostFunction& f) {
  return std::visit(overloaded{
                        [](const Quadratic& q) { return static_cast<int>(q.center.size()); },
                        [](const NormPolyhedral& c) { return static_cast<int>(c.center.size()); },
                        [](const NormPower& c) { return static_cast<int>(c.center.size()); },
                        [](const BodyDistance& c) { return body_dim(c.body); },
                    },
                    f);
}

const char* cost_kind_name(const CostFunction& f) {
  static const char* names[] = {"quadratic", "norm_polyhedral", "norm_power", "body_distance"};
  return names[f.index()];
}

void validate_cost(const CostFunction& f) {
  std::visit(overloaded{
                 [](const Quadratic& q) {
                   const auto d = q.center.size();
                   if (d == 0 || q.Q.rows() != d || q.Q.cols() != d) throw InvalidArgument("quadratic: Q shape");
                   if (!q.Q.allFinite() || !q.center.allFinite()) throw InvalidArgument("quadratic: non-finite entries");
                   const double scale = 1.0 + q.Q.cwiseAbs().maxCoeff();
                   if ((q.Q - q.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                     throw InvalidArgument("quadratic: Q must be symmetric");
                   Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.Q, Eigen::EigenvaluesOnly);
                   if (es.eigenvalues().minCoeff() < -1e-10 * scale) throw InvalidArgument("quadratic: Q must be psd");
                   if (!(q.offset >= 0.0)) throw InvalidArgument("quadratic: offset must be >= 0");
                 },
                 [](const NormPolyhedral& c) {
                   if (c.center.size() == 0 || !c.center.allFinite()) throw InvalidArgument("norm_polyhedral: bad center");
                   if (!(c.alpha > 0.0)) throw InvalidArgument("norm_polyhedral: alpha must be > 0");
                   if (!(c.offset >= 0.0)) throw InvalidArgument("norm_polyhedral: offset must be >= 0");
                 },
                 [](const NormPower& c) {
                   if (c.center.size() == 0 || !c.center.allFinite()) throw InvalidArgument("norm_power: bad center");
                   if (!(c.coefficient > 0.0)) throw InvalidArgument("norm_power: coefficient must be > 0");
                   if (!(c.exponent >= 1.0)) throw InvalidArgument("norm_power: exponent must be >= 1");
                 },
                 [](const BodyDistance& c) {
                   validate_body(c.body);
                   if (!(c.scale > 0.0)) throw InvalidArgument("body_distance: scale must be > 0");
                 },
             },
             f);
}

double eval(const CostFunction& f, const Vector& x) {
  check_dim(f, x, "eval");
  return std::visit(overloaded{
                        [&](const Quadratic& q) {
                          const Vector d = x - q.center;
                          return std::max(0.0, d.dot(q.Q * d)) + q.offset;
                        },
                        [&](const NormPolyhedral& c) { return c.offset + c.alpha * distance(x, c.center, c.norm); },
                        [&](const NormPower& c) {
                          const double r = distance(x, c.center, c.norm);
                          return 0.5 * c.coefficient * (c.exponent == 1.0 ? r : std::pow(r, c.exponent));
                        },
                        [&](const BodyDistance& c) {
                          return c.scale * distance(x, project_body(x, c.body, c.norm), c.norm);
                        },
                    },
                    f);
}

Vector minimizer(const CostFunction& f) {
  return std::visit(overloaded{
                        [](const Quadratic& q) -> Vector { return q.center; },
                        [](const NormPolyhedral& c) -> Vector { return c.center; },
                        [](const NormPower& c) -> Vector { return c.center; },
                        [](const BodyDistance&) -> Vector {
                          throw InvalidArgument("minimizer: body_distance needs a reference point");
                        },
                    },
                    f);
}

Vector minimizer(const CostFunction& f, const Vector& reference) {
  if (const auto* c = std::get_if<BodyDistance>(&f)) return project_body(reference, c->body, c->norm);
  return minimizer(f);
}

Vector subgradient(const CostFunction& f, const Vector& x) {
  check_dim(f, x, "subgradient");
  return std::visit(overloaded{
                        [&](const Quadratic& q) -> Vector { return 2.0 * (q.Q * (x - q.center)); },
                        [&](const NormPolyhedral& c) -> Vector {
                          return c.alpha * norm_gradient(x - c.center, c.norm);
                        },
                        [&](const NormPower& c) -> Vector {
                          const Vector v = x - c.center;
                          const double r = norm(v, c.norm);
                          if (r == 0.0) return Vector::Zero(x.size());
                          const double s = 0.5 * c.coefficient * c.exponent * std::pow(r, c.exponent - 1.0);
                          return s * norm_gradient(v, c.norm);
                        },
                        [&](const BodyDistance& c) -> Vector {
                          const Vector v = x - project_body(x, c.body, c.norm);
                          // projection roundoff on the boundary can point the wrong way; 0 is valid on K
                          if (norm(v, c.norm) <= 1e-12 * (1.0 + norm(x, c.norm))) return Vector::Zero(x.size());
                          return c.scale * norm_gradient(v, c.norm);
                        },
                    },
                    f);
}

double alpha_polyhedral_witness(const CostFunction& f, long samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("alpha_polyhedral_witness: samples must be >= 1");
  const Vector xs = minimizer(f);
  const double fs = eval(f, xs);
  NormTag tag = NormTag::l2();
  if (const auto* c = std::get_if<NormPolyhedral>(&f)) tag = c->norm;
  if (const auto* c = std::get_if<NormPower>(&f)) tag = c->norm;
  Rng rng(seed);
  const int d = cost_dim(f);
  double best = INFINITY;
  for (long s = 0; s < samples; ++s) {
    Vector w = rng.normal_vector(d);
    const double nw = norm(w, tag);
    if (!(nw > 0.0)) continue;
    const Vector x = xs + (rng.uniform(1e-6, 1.0) / nw) * w;
    const double r = distance(x, xs, tag);
    if (!(r > 0.0)) continue;
    best = std::min(best, (eval(f, x) - fs) / r);
  }
  return best;
}

ConvexBody rescale_body(const ConvexBody& body, double lambda) {
  return std::visit(overloaded{
                        [&](const Ball& b) -> ConvexBody { return Ball{lambda * b.center, lambda * b.radius}; },
                        [&](const Box& b) -> ConvexBody { return Box{lambda * b.lower, lambda * b.upper}; },
                        [&](const AffineSliceOfBox& b) -> ConvexBody {
                          AffineSliceOfBox o = b;
                          o.lower = lambda * b.lower;
                          o.upper = lambda * b.upper;
                          for (double& v : o.fixed_value) v *= lambda;
                          return o;
                        },
                        [&](const Hyperplane& b) -> ConvexBody { return Hyperplane{b.normal, lambda * b.offset}; },
                        [&](const Singleton& b) -> ConvexBody { return Singleton{lambda * b.point}; },
                    },
                    body);
}

CostFunction rescale_cost(const CostFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("rescale_cost: lambda must be > 0");
  return std::visit(overloaded{
                        [&](const Quadratic& q) -> CostFunction {
                          return Quadratic{q.Q / lambda, lambda * q.center, lambda * q.offset};
                        },
                        [&](const NormPolyhedral& c) -> CostFunction {
                          return NormPolyhedral{lambda * c.center, c.alpha, lambda * c.offset, c.norm};
                        },
                        [&](const NormPower& c) -> CostFunction {
                          return NormPower{lambda * c.center, c.coefficient * std::pow(lambda, 1.0 - c.exponent),
                                           c.exponent, c.norm};
                        },
                        [&](const BodyDistance& c) -> CostFunction {
                          return BodyDistance{rescale_body(c.body, lambda), c.scale, c.norm};
                        },
                    },
                    f);
}

}  // namespace cfc
